#pragma once

#include "quarklet/piecewise_polynomial.hpp"

namespace quarklet {

/// Spline order m, dual order m_tilde and coarsest level j0.
struct SplineParams {
    int m = 3;
    int m_tilde = 3;
    int j0 = 0;

    /// Validates m >= 2, m_tilde >= m, m + m_tilde even and fills j0 when it is 0.
    static SplineParams make(int m, int m_tilde, int j0 = 0);

    /// Smallest j0 with 2^j0 >= 2 (m + m_tilde).
    static int default_j0(int m, int m_tilde);

    int floor_half() const { return m / 2; }
    int ceil_half() const { return (m + 1) / 2; }
};

/// Cardinal B-spline N_m on [0, m], built by the convolution recursion N_m = N_{m-1} * N_1.
PiecewisePolynomial cardinal_bspline(int m);

/// phi(x) = N_m(x + floor(m/2)).
PiecewisePolynomial symmetrized_generator(const SplineParams& params);

/// phi_p(x) = (x / ceil(m/2))^p phi(x).
PiecewisePolynomial cardinal_quark(const SplineParams& params, int p);

}  // namespace quarklet
