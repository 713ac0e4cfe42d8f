#pragma once

#include <functional>
#include <vector>

#include "quarklet/piecewise_polynomial.hpp"
#include "quarklet/spline_algebra.hpp"

namespace quarklet {

/// Finitely supported sequence; taps[i] is the value at index offset + i.
struct Mask {
    int offset = 0;
    std::vector<double> taps;

    double operator[](int k) const {
        const int i = k - offset;
        return (i < 0 || i >= static_cast<int>(taps.size())) ? 0.0 : taps[i];
    }
    int first() const { return offset; }
    int last() const { return offset + static_cast<int>(taps.size()) - 1; }
    double sum() const;
    /// Drops exact zeros at both ends.
    Mask trimmed() const;
};

struct FilterPair {
    Mask primal;
    Mask dual;
    Mask wavelet;       // b_k = (-1)^k dual_{1-k}
    Mask dual_wavelet;  // b~_k = (-1)^k primal_{1-k}
};

/// Refinable function or wavelet sampled on the grid 2^-level Z.
///
/// The samples are the subdivision coefficients c_i with f ~ sum c_i g(2^level x - i)
/// for the refinable g; value(i) approximates f at (i + centre) 2^-level, where centre is
/// the first moment of g.
struct SampledFunction {
    int level = 0;
    int first_index = 0;
    double centre = 0.0;
    std::vector<double> samples;

    double value(int i) const {
        const int n = i - first_index;
        return (n < 0 || n >= static_cast<int>(samples.size())) ? 0.0 : samples[n];
    }
    double x(int n) const;
};

/// CDF biorthogonal filters of orders (m, m_tilde), centred like the symmetrized generator.
FilterPair cdf_filters(const SplineParams& params);

/// Max over n of |sum_k a_k a~_{k+2n} - 2 delta_{0,n}|.
double biorthogonality_defect(const Mask& primal, const Mask& dual);

/// psi_p = sum_k b_k phi_p(2 . - k).
PiecewisePolynomial shift_quarklet(const SplineParams& params, int p);
PiecewisePolynomial shift_quarklet(const SplineParams& params, const FilterPair& filters, int p);

/// 2^{j/2} f(2^j . - k) for j >= 0, and f(. - k) for j = -1.
PiecewisePolynomial scaled_element(const PiecewisePolynomial& f, int j, int k);

/// Subdivision from a delta sequence, `level` steps with `mask`.
SampledFunction cascade(const Mask& mask, int level);

/// sum_k wavelet_k g(2 . - k) for the refinable g of `scaling`, sampled at `level`.
SampledFunction cascade_wavelet(const Mask& wavelet, const Mask& scaling, int level);

/// Riemann sum of g against the sampled function (grid 2^-level).
double sampled_inner_product(const std::function<double(double)>& g, const SampledFunction& s);

}  // namespace quarklet
