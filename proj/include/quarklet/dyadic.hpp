#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace quarklet {

/// Exact dyadic rational num / 2^exp, kept in lowest terms (num odd or exp == 0).
class Dyadic {
public:
    constexpr Dyadic() = default;
    constexpr Dyadic(std::int64_t integer) : num_(integer), exp_(0) {}  // NOLINT(implicit)

    static Dyadic make(std::int64_t num, int exp);

    std::int64_t numerator() const { return num_; }
    int exponent() const { return exp_; }
    double to_double() const;

    /// Divides by 2^j (multiplies for negative j).
    Dyadic scaled_pow2(int j) const { return make(num_, exp_ + j); }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a) { return make(-a.num_, a.exp_); }
    friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

    std::string to_string() const;

private:
    std::int64_t num_ = 0;
    int exp_ = 0;
};

}  // namespace quarklet
