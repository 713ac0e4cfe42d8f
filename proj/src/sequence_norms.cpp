#include "quarklet/sequence_norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quarklet/errors.hpp"

namespace quarklet {

int CoefficientField::max_level() const {
    int j = 0;
    for (const auto& [idx, v] : entries) j = std::max(j, idx.j);
    return j;
}

int CoefficientField::max_degree() const {
    int p = 0;
    for (const auto& [idx, v] : entries) p = std::max(p, idx.p);
    return p;
}

CoefficientField CoefficientField::scaled(double alpha) const {
    CoefficientField out = *this;
    for (auto& [idx, v] : out.entries) v *= alpha;
    return out;
}

NormParams NormParams::make(double s, double r, double delta, int m) {
    if (!(s >= 0.0)) throw InvalidParameter("smoothness must satisfy s >= 0");
    if (!(r > 1.0)) throw InvalidParameter("integrability must satisfy 1 < r < infinity");
    if (!(delta > 1.0)) throw InvalidParameter("weight exponent must satisfy delta > 1");
    if (m < 2) throw InvalidParameter("spline order must satisfy m >= 2");
    return NormParams{s, r, delta, m};
}

void validate_smoothness(double s, int m) {
    if (!(s > 0.0 && s < m - 1)) {
        throw InvalidParameter("smoothness violates 0 < s < m - 1 (s=" + std::to_string(s) +
                               ", m - 1=" + std::to_string(m - 1) + ")");
    }
}

int chi_tilde(int j, int k, double x) {
    const int n = 1 << j;
    const int kk = std::clamp(k, 0, n - 1);
    const double a = std::ldexp(kk, -j);
    const double b = std::ldexp(kk + 1, -j);
    return (x >= a && x < b) ? 1 : 0;
}

double weight(int p, int j, const NormParams& params) {
    const double sgn = params.s > 0.0 ? 1.0 : 0.0;
    return std::pow(p + 1.0, sgn * 4.0 * params.m + 2.0 * params.delta) * std::pow(2.0, 2.0 * j * params.s) *
           std::ldexp(1.0, j);
}

double seq_norm_1d(const CoefficientField& coeffs, const NormParams& params) {
    if (coeffs.empty()) return 0.0;
    const int J = coeffs.max_level();
    const std::size_t cells = std::size_t{1} << J;
    std::vector<double> diff(cells + 1, 0.0);
    for (const auto& [idx, c] : coeffs.entries) {
        if (c == 0.0) continue;
        if (idx.j < 0) throw IndexError("sequence norm needs levels j >= 0");
        const int n = 1 << idx.j;
        const std::size_t k = static_cast<std::size_t>(std::clamp(idx.k, 0, n - 1));
        const std::size_t span = std::size_t{1} << (J - idx.j);
        const double v = weight(idx.p, idx.j, params) * c * c;
        diff[k * span] += v;
        diff[(k + 1) * span] -= v;
    }
    double running = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        running += diff[i];
        acc += std::pow(std::max(running, 0.0), params.r / 2.0);
    }
    return std::pow(std::ldexp(acc, -J), 1.0 / params.r);
}

}  // namespace quarklet
