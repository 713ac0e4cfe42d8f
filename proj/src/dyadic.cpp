#include "quarklet/dyadic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "quarklet/errors.hpp"

namespace quarklet {

namespace {

std::int64_t checked_narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw Error("dyadic breakpoint overflow");
    }
    return static_cast<std::int64_t>(v);
}

__int128 lifted(const Dyadic& d, int target_exp) {
    return static_cast<__int128>(d.numerator()) << (target_exp - d.exponent());
}

}  // namespace

Dyadic Dyadic::make(std::int64_t num, int exp) {
    Dyadic d;
    if (num == 0) return d;
    __int128 n = num;
    if (exp < 0) {
        if (exp < -62) throw Error("dyadic breakpoint overflow");
        n <<= -exp;
        exp = 0;
    }
    while (exp > 0 && (n & 1) == 0) {
        n >>= 1;
        --exp;
    }
    if (exp > 62) throw Error("dyadic breakpoint underflow");
    d.num_ = checked_narrow(n);
    d.exp_ = exp;
    return d;
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const int e = std::max(a.exp_, b.exp_);
    const __int128 s = lifted(a, e) + lifted(b, e);
    return Dyadic::make(checked_narrow(s), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const int e = std::max(a.exp_, b.exp_);
    const __int128 x = lifted(a, e);
    const __int128 y = lifted(b, e);
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Dyadic::to_string() const {
    std::ostringstream os;
    os << num_;
    if (exp_ > 0) os << "/2^" << exp_;
    return os.str();
}

}  // namespace quarklet
