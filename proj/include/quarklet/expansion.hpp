#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "quarklet/interval_system.hpp"
#include "quarklet/sequence_norms.hpp"
#include "quarklet/smoothness_oracle.hpp"

namespace quarklet {

struct TruncationSpec {
    int J = 0;  // finest level
    int P = 0;  // largest polynomial degree
};

struct GramMatrix {
    std::vector<QuarkletIndex> indices;  // ordered as IntervalSystem::indices
    Eigen::MatrixXd matrix;
};

/// Exact L_2 Gram matrix of all elements with p <= P and j <= J.
GramMatrix gram_matrix(const IntervalSystem& sys, const TruncationSpec& spec);

/// Ratio of extreme eigenvalues of a symmetric matrix.
double condition_number(const Eigen::MatrixXd& g);

/// Gram-solve projection onto the span of the p = 0 system up to level J.
class Projector {
public:
    /// quad_nodes = 0 selects 2 (m + P) + 8 Gauss nodes per cell of level J + 1.
    Projector(const IntervalSystem& sys, int J, int quad_nodes = 0);

    const std::vector<QuarkletIndex>& indices() const { return indices_; }
    const Eigen::MatrixXd& gram() const { return gram_; }
    double condition() const { return condition_; }

    /// Quadrature nodes and weights on (0, 1) used for right-hand sides.
    const Eigen::VectorXd& nodes() const { return nodes_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    /// Element values at the nodes, one row per index.
    const Eigen::MatrixXd& values() const { return values_; }

    /// G^{-1} b
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

    Eigen::VectorXd analyze_vector(const Function1D& f) const;
    CoefficientField analyze(const Function1D& f) const;
    CoefficientField to_field(const Eigen::VectorXd& c) const;

private:
    std::vector<QuarkletIndex> indices_;
    Eigen::MatrixXd gram_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double condition_ = 0.0;
    Eigen::VectorXd nodes_;
    Eigen::VectorXd weights_;
    Eigen::MatrixXd values_;
};

/// Coefficients c with G c = <psi_lambda, f>; spec.P must be 0.
CoefficientField analyze_p0(const IntervalSystem& sys, const Function1D& f, const TruncationSpec& spec);

std::vector<double> synthesize(const IntervalSystem& sys, const CoefficientField& coeffs, const std::vector<double>& points);

/// Sequence norm of the canonical p = 0 representation; an upper bound for the quarklet norm.
double quarklet_norm_estimate(const IntervalSystem& sys, const Function1D& f, const TruncationSpec& spec,
                              const NormParams& norm);

}  // namespace quarklet
