#pragma once

#include <vector>

namespace quarklet {

/// Gauss-Legendre rule mapped to [0, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1]; exact for polynomials of degree 2n - 1.
/// Rules are computed once per n and shared.
const QuadratureRule& gauss_legendre(int n);

}  // namespace quarklet
