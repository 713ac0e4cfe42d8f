#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quarklet/expansion.hpp"

namespace quarklet {

struct TensorTerm {
    CoefficientField u;  // direction 1
    CoefficientField v;  // direction 2
};

struct TensorRepresentation {
    std::vector<TensorTerm> terms;
    std::size_t rank() const { return terms.size(); }
};

/// (x, y) -> psi_{lambda1}(x) psi_{lambda2}(y)
Function2D tensor_element(const IntervalSystem& sys1, const IntervalSystem& sys2, const QuarkletIndex& l1,
                          const QuarkletIndex& l2);

using FieldNorm = std::function<double(const CoefficientField&)>;

/// sup { ||sum lambda_l g_l|| : ||lambda||_r <= 1 } where combo_norm(lambda) = ||sum lambda_l g_l||.
/// Multi-start projected gradient ascent (32 random starts plus coordinate directions); for r = 2
/// the top eigenvector of the polarization Gram is an extra start.
double ball_sup(int a, const std::function<double(const std::vector<double>&)>& combo_norm, double r,
                std::uint64_t seed = 0);

/// (sum_l x_norms_l^r)^{1/r} * ball_sup(combo_norm)
double g_r_value(const std::vector<double>& x_norms, const std::function<double(const std::vector<double>&)>& combo_norm,
                 double r, std::uint64_t seed = 0);

/// (sum_l ||u_l||_X^r)^{1/r} * sup { ||sum lambda_l v_l||_Y : ||lambda||_r <= 1 } for this representation.
double g_r_objective(const TensorRepresentation& rep, const FieldNorm& norm_x, const FieldNorm& norm_y, double r,
                     std::uint64_t seed = 0);

/// Direction 1: (sum ||u_l | h^{s}_{delta1}||) (sum ||v_l | h^{0}_{delta2}||); direction 2 swaps the roles of s.
double bivariate_seq_objective(const TensorRepresentation& rep, double s, double r, double delta1, double delta2, int m,
                               int direction);

/// Sum of component norms of an intersection space.
double intersection_norm(const std::vector<double>& values);

using VectorNorm = std::function<double(const Eigen::VectorXd&)>;

struct Factorization {
    std::vector<Eigen::VectorXd> u;  // leading R terms followed by the tail
    std::vector<Eigen::VectorXd> v;
    int rank = 0;                    // number of leading terms
    double discarded = 0.0;          // Frobenius mass of the tail singular values
    double objective = 0.0;          // (sum ||u||)(sum ||v||) over all terms
    std::vector<double> by_rank;     // objective after the sweeps for 1, ..., R leading terms
    std::vector<double> history;     // objective after every sweep of the last rank
};

/// Truncated SVD of c with R leading terms, the remaining singular terms kept as an exact tail, then
/// shear and rescaling sweeps on the leading terms minimizing (sum norm_x(u))(sum norm_y(v)).
/// Ranks are built up from 1 so that the objective is nonincreasing in R.
Factorization factorize_grid(const Eigen::MatrixXd& c, int R, const VectorNorm& norm_x, const VectorNorm& norm_y,
                             int sweeps = 20);

/// Sum of leading terms u_l v_l^T.
Eigen::MatrixXd leading_matrix(const Factorization& f);

TensorRepresentation to_representation(const Factorization& f, const std::vector<QuarkletIndex>& idx1,
                                       const std::vector<QuarkletIndex>& idx2, bool include_tail = true);

/// Coefficient array of the P = 0 tensor projection of f onto both systems up to level J.
struct TensorAnalysis {
    std::vector<QuarkletIndex> idx1;
    std::vector<QuarkletIndex> idx2;
    Eigen::MatrixXd coefficients;
};
TensorAnalysis tensor_analyze(const Projector& p1, const Projector& p2, const Function2D& f, bool x_first = true);

enum class Mode { strict, exploratory };

struct BivariateEstimate {
    double estimate = 0.0;
    double direction1 = 0.0;
    double direction2 = 0.0;
    std::vector<double> by_rank;  // estimate for R' = 1..R
    std::string warning;
};

/// Throws in strict mode unless m_tilde > 5m + 12; returns a warning text in exploratory mode.
std::string check_dual_order(const SplineParams& params, Mode mode);

/// Rank-R upper bound of the bivariate quarklet norm of f (direction objectives on f/2 each).
BivariateEstimate bivariate_norm_estimate(const Function2D& f, const IntervalSystem& sys1, const IntervalSystem& sys2,
                                          int J, double s, double r, double delta1, double delta2, int R, Mode mode);
BivariateEstimate bivariate_norm_estimate(const TensorAnalysis& analysis, const SplineParams& params, double s,
                                          double r, double delta1, double delta2, int R);

}  // namespace quarklet
