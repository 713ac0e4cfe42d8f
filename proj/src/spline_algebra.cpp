#include "quarklet/spline_algebra.hpp"

#include <string>

#include "quarklet/errors.hpp"

namespace quarklet {

SplineParams SplineParams::make(int m, int m_tilde, int j0) {
    if (m < 2) throw InvalidParameter("spline order must satisfy m >= 2");
    if (m_tilde < m) throw InvalidParameter("dual order must satisfy m_tilde >= m");
    if ((m + m_tilde) % 2 != 0) {
        throw InvalidParameter("m + m_tilde must be even (m + m_tilde in 2N), got m=" +
                               std::to_string(m) + ", m_tilde=" + std::to_string(m_tilde));
    }
    if (j0 < 0) throw InvalidParameter("coarsest level must satisfy j0 >= 1");
    SplineParams p;
    p.m = m;
    p.m_tilde = m_tilde;
    p.j0 = j0 == 0 ? default_j0(m, m_tilde) : j0;
    return p;
}

int SplineParams::default_j0(int m, int m_tilde) {
    int j = 1;
    while ((1 << j) < 2 * (m + m_tilde)) ++j;
    return j;
}

PiecewisePolynomial cardinal_bspline(int m) {
    if (m < 1) throw InvalidParameter("B-spline order must satisfy m >= 1");
    auto n = PiecewisePolynomial::constant(0, 1, 1.0);
    for (int order = 2; order <= m; ++order) {
        // N_order(x) = F(x) - F(x - 1) with F the primitive of N_{order-1},
        // continued by its final value 1 on [order-1, order].
        auto primitive = pp_antiderivative(n);
        auto tail = PiecewisePolynomial::constant(order - 1, order, 1.0);
        auto extended = pp_add(primitive, tail);
        auto shifted = pp_restrict(pp_scale_shift(extended, 0, 1), 1, order);
        n = pp_restrict(pp_sub(extended, shifted), 0, order);
    }
    return n;
}

PiecewisePolynomial symmetrized_generator(const SplineParams& params) {
    return pp_scale_shift(cardinal_bspline(params.m), 0, -params.floor_half());
}

PiecewisePolynomial cardinal_quark(const SplineParams& params, int p) {
    if (p < 0) throw InvalidParameter("quark degree must satisfy p >= 0");
    return pp_monomial_multiply(symmetrized_generator(params), p, 0.0, params.ceil_half());
}

}  // namespace quarklet
