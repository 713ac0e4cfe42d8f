#pragma once

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "quarklet/piecewise_polynomial.hpp"
#include "quarklet/shift_invariant.hpp"
#include "quarklet/spline_algebra.hpp"

namespace quarklet {

/// Orders of homogeneous Dirichlet conditions at 0 and 1.
struct BoundaryCondition {
    int sigma_l = 0;
    int sigma_r = 0;

    int sgn_l() const { return sigma_l > 0 ? 1 : 0; }
    int sgn_r() const { return sigma_r > 0 ? 1 : 0; }
    friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

/// Largest admissible boundary order for smoothness s and integrability r,
/// floor(s + 1 - dim/r - eps) with eps = 1e-9.
int max_boundary_order(double s, double r, int dim = 1);

/// Throws InvalidParameter when sigma exceeds max_boundary_order.
void validate_boundary_condition(const BoundaryCondition& sigma, double s, double r, int dim = 1);

struct QuarkletIndex {
    int p = 0;
    int j = 0;
    int k = 0;
    friend auto operator<=>(const QuarkletIndex&, const QuarkletIndex&) = default;
};

enum class Side { left, right };

/// Knot t^j_k for k = -m+1, ..., 2^j + m - 1.
Dyadic knot(const SplineParams& params, int j, int k);
std::vector<Dyadic> knots(const SplineParams& params, int j);

/// Schoenberg B-spline B^m_{j,k} on the multiplicity-m knot sequence, k in {-m+1, ..., 2^j - 1}.
PiecewisePolynomial schoenberg_bspline(const SplineParams& params, int j, int k);

/// Boundary-adapted quarklet system on (0, 1).
class IntervalSystem {
public:
    IntervalSystem(SplineParams params, BoundaryCondition sigma);
    IntervalSystem(SplineParams params, BoundaryCondition sigma, FilterPair filters);

    const SplineParams& params() const { return params_; }
    const BoundaryCondition& sigma() const { return sigma_; }
    const FilterPair& filters() const { return filters_; }
    int j0() const { return params_.j0; }

    // Delta_{j,sigma}
    int delta_first(int j) const;
    int delta_last(int j) const;
    int delta_size(int j) const { return delta_last(j) - delta_first(j) + 1; }
    // nabla_{j,sigma}; j = j0 - 1 is the quark level.
    int nabla_first(int j) const;
    int nabla_last(int j) const;
    bool contains(const QuarkletIndex& idx) const;
    /// All indices with p <= p_max and j0 - 1 <= j <= j_max, ordered by (p, j, k).
    std::vector<QuarkletIndex> indices(int p_max, int j_max) const;

    /// Schoenberg quark phi_{p,j,k}, k in Delta_j (unrestricted by sigma).
    PiecewisePolynomial boundary_quark(int p, int j, int k) const;

    /// True when the inner quarklet at (j, k) can be taken from the shift-invariant one.
    bool is_inner(int j, int k) const;
    PiecewisePolynomial inner_quarklet(int p, int j, int k) const;

    /// First quark index of the boundary-type window for position k counted from `side`.
    int window_start(Side side, int k) const;
    /// m_tilde x (m_tilde + 1) matrix of moments int x^q phi_{p,j+1,l} dx; columns run
    /// from the boundary inward. For side right, k counts from the right end.
    Eigen::MatrixXd boundary_moment_matrix(int p, int j, Side side, int k) const;
    /// Normalized kernel vector of the moment system (unit norm, first nonzero entry positive).
    Eigen::VectorXd boundary_coefficients(int p, int j, Side side, int k) const;
    PiecewisePolynomial boundary_quarklet(int p, int j, Side side, int k) const;

    /// Frame element psi^sigma_lambda; cached.
    std::shared_ptr<const PiecewisePolynomial> element(const QuarkletIndex& idx) const;

    /// Quark indices l of the window for a boundary-type element.
    std::vector<int> window(Side side, int j, int k) const;

private:
    PiecewisePolynomial build(const QuarkletIndex& idx) const;

    SplineParams params_;
    BoundaryCondition sigma_;
    FilterPair filters_;
    mutable std::recursive_mutex mutex_;
    mutable std::map<QuarkletIndex, std::shared_ptr<const PiecewisePolynomial>> cache_;
    mutable std::map<QuarkletIndex, std::shared_ptr<const PiecewisePolynomial>> quark_cache_;
    mutable std::map<int, PiecewisePolynomial> shift_quarklets_;
};

/// Dimension of the numerical kernel of m (singular values below tol * largest, plus
/// the column excess).
int kernel_dimension(const Eigen::MatrixXd& m, double tol = 1e-8);

}  // namespace quarklet
