#include "quarklet/expansion.hpp"

#include <cmath>

#include "quarklet/errors.hpp"
#include "quarklet/parallel.hpp"
#include "quarklet/quadrature.hpp"

namespace quarklet {

namespace {

bool overlaps(const PiecewisePolynomial& a, const PiecewisePolynomial& b) {
    return a.support_begin() < b.support_end() && b.support_begin() < a.support_end();
}

Eigen::MatrixXd assemble(const IntervalSystem& sys, const std::vector<QuarkletIndex>& idx) {
    const std::size_t n = idx.size();
    std::vector<std::shared_ptr<const PiecewisePolynomial>> elems(n);
    for (std::size_t i = 0; i < n; ++i) elems[i] = sys.element(idx[i]);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t k = i; k < n; ++k) {
            if (!overlaps(*elems[i], *elems[k])) continue;
            g(i, k) = pp_inner_product(*elems[i], *elems[k]);
        }
    });
    g.triangularView<Eigen::StrictlyLower>() = g.transpose().triangularView<Eigen::StrictlyLower>();
    return g;
}

}  // namespace

GramMatrix gram_matrix(const IntervalSystem& sys, const TruncationSpec& spec) {
    if (spec.J < sys.j0() - 1 || spec.P < 0) throw InvalidParameter("truncation needs J >= j0 - 1 and P >= 0");
    GramMatrix out;
    out.indices = sys.indices(spec.P, spec.J);
    out.matrix = assemble(sys, out.indices);
    return out;
}

double condition_number(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    if (ev.size() == 0) return 1.0;
    if (ev[0] <= 0.0) return std::numeric_limits<double>::infinity();
    return ev[ev.size() - 1] / ev[0];
}

Projector::Projector(const IntervalSystem& sys, int J, int quad_nodes) {
    if (J < sys.j0() - 1) throw InvalidParameter("truncation needs J >= j0 - 1");
    indices_ = sys.indices(0, J);
    gram_ = assemble(sys, indices_);
    condition_ = condition_number(gram_);
    if (!(condition_ <= 1e12)) {
        throw IllConditioned("Gram matrix condition " + std::to_string(condition_) + " exceeds 1e12");
    }
    llt_.compute(gram_);
    if (llt_.info() != Eigen::Success) throw IllConditioned("Gram matrix is not positive definite");

    const int q = quad_nodes > 0 ? quad_nodes : 2 * sys.params().m + 8;
    const auto& rule = gauss_legendre(q);
    const int cells = 1 << (J + 1);
    nodes_.resize(static_cast<Eigen::Index>(cells) * q);
    weights_.resize(nodes_.size());
    for (int c = 0; c < cells; ++c)
        for (int i = 0; i < q; ++i) {
            nodes_[c * q + i] = (c + rule.nodes[i]) / cells;
            weights_[c * q + i] = rule.weights[i] / cells;
        }
    values_ = Eigen::MatrixXd::Zero(indices_.size(), nodes_.size());
    parallel_for(indices_.size(), [&](std::size_t row) {
        const auto e = sys.element(indices_[row]);
        const int first = static_cast<int>(std::floor(e->support_begin().to_double() * cells));
        const int last = static_cast<int>(std::ceil(e->support_end().to_double() * cells));
        for (int c = std::max(first, 0); c < std::min(last, cells); ++c)
            for (int i = 0; i < q; ++i) values_(row, c * q + i) = (*e)(nodes_[c * q + i]);
    });
}

Eigen::VectorXd Projector::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }
Eigen::MatrixXd Projector::solve(const Eigen::MatrixXd& b) const { return llt_.solve(b); }

Eigen::VectorXd Projector::analyze_vector(const Function1D& f) const {
    Eigen::VectorXd fw(nodes_.size());
    for (Eigen::Index i = 0; i < nodes_.size(); ++i) fw[i] = f(nodes_[i]) * weights_[i];
    return solve(Eigen::VectorXd(values_ * fw));
}

CoefficientField Projector::analyze(const Function1D& f) const { return to_field(analyze_vector(f)); }

CoefficientField Projector::to_field(const Eigen::VectorXd& c) const {
    CoefficientField out;
    for (std::size_t i = 0; i < indices_.size(); ++i) out[indices_[i]] = c[i];
    return out;
}

CoefficientField analyze_p0(const IntervalSystem& sys, const Function1D& f, const TruncationSpec& spec) {
    if (spec.P != 0) throw InvalidParameter("analysis is defined for P = 0 only");
    return Projector(sys, spec.J).analyze(f);
}

std::vector<double> synthesize(const IntervalSystem& sys, const CoefficientField& coeffs, const std::vector<double>& points) {
    std::vector<double> out(points.size(), 0.0);
    for (const auto& [idx, c] : coeffs.entries) {
        if (c == 0.0) continue;
        const auto e = sys.element(idx);
        for (std::size_t i = 0; i < points.size(); ++i) out[i] += c * (*e)(points[i]);
    }
    return out;
}

double quarklet_norm_estimate(const IntervalSystem& sys, const Function1D& f, const TruncationSpec& spec,
                              const NormParams& norm) {
    validate_smoothness(norm.s, sys.params().m);
    const auto checked = NormParams::make(norm.s, norm.r, norm.delta, sys.params().m);
    return seq_norm_1d(analyze_p0(sys, f, spec), checked);
}

}  // namespace quarklet
