#include "quarklet/interval_system.hpp"

#include <cmath>
#include <string>

#include "quarklet/errors.hpp"

namespace quarklet {

namespace {

constexpr double kBoundaryEps = 1e-9;

void check_level(const SplineParams& params, int j) {
    if (j < params.j0) {
        throw InvalidParameter("level must satisfy j >= j0 (j=" + std::to_string(j) +
                               ", j0=" + std::to_string(params.j0) + ")");
    }
}

PiecewisePolynomial closed_at_one(PiecewisePolynomial f) {
    f = f.trimmed();
    if (!f.empty() && f.support_end() == Dyadic(1)) f.set_closed_right(true);
    return f;
}

double l2_scale(int j) { return std::ldexp(1.0, j / 2) * ((j % 2) ? std::sqrt(2.0) : 1.0); }

}  // namespace

int max_boundary_order(double s, double r, int dim) {
    return static_cast<int>(std::floor(s + 1.0 - dim / r - kBoundaryEps));
}

void validate_boundary_condition(const BoundaryCondition& sigma, double s, double r, int dim) {
    const int bound = max_boundary_order(s, r, dim);
    if (sigma.sigma_l < 0 || sigma.sigma_r < 0) throw InvalidParameter("boundary orders must be >= 0");
    if (sigma.sigma_l > bound || sigma.sigma_r > bound) {
        const std::string rhs = dim == 1 ? "1/r" : std::to_string(dim) + "/r";
        throw InvalidParameter("boundary order violates sigma <= floor(s + 1 - " + rhs + " - eps) = " +
                               std::to_string(bound));
    }
}

Dyadic knot(const SplineParams& params, int j, int k) {
    check_level(params, j);
    const std::int64_t n = std::int64_t{1} << j;
    if (k < -params.m + 1 || k > n + params.m - 1) throw IndexError("knot index out of range");
    if (k <= 0) return Dyadic(0);
    if (k >= n) return Dyadic(1);
    return Dyadic::make(k, j);
}

std::vector<Dyadic> knots(const SplineParams& params, int j) {
    std::vector<Dyadic> t;
    const int n = 1 << j;
    for (int k = -params.m + 1; k <= n + params.m - 1; ++k) t.push_back(knot(params, j, k));
    return t;
}

PiecewisePolynomial schoenberg_bspline(const SplineParams& params, int j, int k) {
    check_level(params, j);
    const int m = params.m;
    if (k < -m + 1 || k > (1 << j) - 1) {
        throw IndexError("Schoenberg index k=" + std::to_string(k) + " outside Delta_j");
    }
    auto t = [&](int i) { return knot(params, j, i); };
    std::vector<PiecewisePolynomial> level;
    for (int i = k; i < k + m; ++i) {
        level.push_back(t(i) < t(i + 1) ? PiecewisePolynomial::constant(t(i), t(i + 1), 1.0) : PiecewisePolynomial{});
    }
    for (int r = 2; r <= m; ++r) {
        std::vector<PiecewisePolynomial> next;
        for (int i = 0; i + 1 < static_cast<int>(level.size()); ++i) {
            const int g = k + i;
            PiecewisePolynomial sum;
            const Dyadic d1 = t(g + r - 1) - t(g);
            if (d1 > Dyadic(0) && !level[i].empty()) {
                sum = pp_monomial_multiply(level[i], 1, t(g).to_double(), d1.to_double());
            }
            const Dyadic d2 = t(g + r) - t(g + 1);
            if (d2 > Dyadic(0) && !level[i + 1].empty()) {
                sum = pp_add(sum, pp_monomial_multiply(level[i + 1], 1, t(g + r).to_double(), -d2.to_double()));
            }
            next.push_back(std::move(sum));
        }
        level = std::move(next);
    }
    return closed_at_one(level.front());
}

int kernel_dimension(const Eigen::MatrixXd& m, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    int dim = static_cast<int>(m.cols()) - static_cast<int>(sv.size());
    const double top = sv.size() ? sv[0] : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] <= tol * top) ++dim;
    return dim;
}

IntervalSystem::IntervalSystem(SplineParams params, BoundaryCondition sigma)
    : IntervalSystem(params, sigma, cdf_filters(params)) {}

IntervalSystem::IntervalSystem(SplineParams params, BoundaryCondition sigma, FilterPair filters)
    : params_(SplineParams::make(params.m, params.m_tilde, params.j0)), sigma_(sigma), filters_(std::move(filters)) {
    if (sigma.sigma_l < 0 || sigma.sigma_r < 0) throw InvalidParameter("boundary orders must be >= 0");
    if (params_.j0 < 1) throw InvalidParameter("coarsest level must satisfy j0 >= 1");
    if ((1 << params_.j0) < 2 * params_.m) {
        throw InvalidParameter("coarsest level must satisfy 2^j0 >= 2m");
    }
    filters_.wavelet = filters_.wavelet.trimmed();
}

int IntervalSystem::delta_first(int) const { return -params_.m + 1 + sigma_.sgn_l(); }
int IntervalSystem::delta_last(int j) const { return (1 << j) - 1 - sigma_.sgn_r(); }

int IntervalSystem::nabla_first(int j) const {
    if (j == params_.j0 - 1) return delta_first(params_.j0);
    if (j < params_.j0 - 1) throw IndexError("level below j0 - 1");
    return 0;
}

int IntervalSystem::nabla_last(int j) const {
    if (j == params_.j0 - 1) return delta_last(params_.j0);
    if (j < params_.j0 - 1) throw IndexError("level below j0 - 1");
    return (1 << j) - 1;
}

bool IntervalSystem::contains(const QuarkletIndex& idx) const {
    if (idx.p < 0 || idx.j < params_.j0 - 1 || idx.j > 28) return false;
    return idx.k >= nabla_first(idx.j) && idx.k <= nabla_last(idx.j);
}

std::vector<QuarkletIndex> IntervalSystem::indices(int p_max, int j_max) const {
    std::vector<QuarkletIndex> out;
    for (int p = 0; p <= p_max; ++p)
        for (int j = params_.j0 - 1; j <= j_max; ++j)
            for (int k = nabla_first(j); k <= nabla_last(j); ++k) out.push_back({p, j, k});
    return out;
}

PiecewisePolynomial IntervalSystem::boundary_quark(int p, int j, int k) const {
    if (p < 0) throw InvalidParameter("quark degree must satisfy p >= 0");
    check_level(params_, j);
    const int m = params_.m;
    const int n = 1 << j;
    if (k < -m + 1 || k > n - 1) throw IndexError("quark index k=" + std::to_string(k) + " outside Delta_j");
    const QuarkletIndex key{p, j, k};
    std::lock_guard lock(mutex_);
    if (auto it = quark_cache_.find(key); it != quark_cache_.end()) return *it->second;

    PiecewisePolynomial q;
    if (k <= -1) {
        const auto b = pp_scale(schoenberg_bspline(params_, j, k), l2_scale(j));
        q = pp_monomial_multiply(b, p, 0.0, std::ldexp(k + m, -j));
    } else if (k <= n - m) {
        const auto b = pp_scale(schoenberg_bspline(params_, j, k), l2_scale(j));
        q = pp_monomial_multiply(b, p, std::ldexp(k + params_.floor_half(), -j), std::ldexp(params_.ceil_half(), -j));
    } else {
        q = pp_reflect(boundary_quark(p, j, n - m - k));
    }
    q = closed_at_one(q);
    quark_cache_.emplace(key, std::make_shared<const PiecewisePolynomial>(q));
    return q;
}

bool IntervalSystem::is_inner(int j, int k) const {
    const int m = params_.m;
    if (k < m - 1 || k > (1 << j) - m) return false;
    const int lo = 2 * k + filters_.wavelet.first() - params_.floor_half();
    const int hi = 2 * k + filters_.wavelet.last() - params_.floor_half();
    return lo >= 0 && hi <= (1 << (j + 1)) - m;
}

PiecewisePolynomial IntervalSystem::inner_quarklet(int p, int j, int k) const {
    check_level(params_, j);
    if (!is_inner(j, k)) {
        throw ConstructionError("k=" + std::to_string(k) + " is not an inner position at level " + std::to_string(j));
    }
    std::lock_guard lock(mutex_);
    auto it = shift_quarklets_.find(p);
    if (it == shift_quarklets_.end()) it = shift_quarklets_.emplace(p, shift_quarklet(params_, filters_, p)).first;
    return closed_at_one(scaled_element(it->second, j, k));
}

int IntervalSystem::window_start(Side side, int k) const {
    return -params_.m + 1 + (side == Side::left ? sigma_.sgn_l() : sigma_.sgn_r()) + k;
}

std::vector<int> IntervalSystem::window(Side side, int j, int k) const {
    check_level(params_, j);
    if (k < 0 || k > (1 << j) - 1) throw IndexError("boundary position out of range");
    std::vector<int> w;
    const int start = window_start(side, k);
    for (int c = 0; c <= params_.m_tilde; ++c) {
        const int l = start + c;
        w.push_back(side == Side::left ? l : (1 << (j + 1)) - params_.m - l);
    }
    for (int l : w) {
        if (l < delta_first(j + 1) || l > delta_last(j + 1)) {
            throw ConstructionError("boundary window leaves Delta_{j+1,sigma}; level too coarse");
        }
    }
    return w;
}

Eigen::MatrixXd IntervalSystem::boundary_moment_matrix(int p, int j, Side side, int k) const {
    const auto w = window(side, j, k);
    Eigen::MatrixXd mat(params_.m_tilde, params_.m_tilde + 1);
    for (int c = 0; c < static_cast<int>(w.size()); ++c) {
        const auto q = boundary_quark(p, j + 1, w[c]);
        for (int row = 0; row < params_.m_tilde; ++row) mat(row, c) = pp_moment(q, row);
    }
    return mat;
}

Eigen::VectorXd IntervalSystem::boundary_coefficients(int p, int j, Side side, int k) const {
    const auto w = window(side, j, k);
    // Moments in the local variable 2^{j+1}(x - endpoint) span the same conditions
    // and keep the matrix well scaled.
    const double anchor = side == Side::left ? 0.0 : 1.0;
    const double scale = std::ldexp(1.0, -(j + 1));
    Eigen::MatrixXd mat(params_.m_tilde, params_.m_tilde + 1);
    for (int c = 0; c < static_cast<int>(w.size()); ++c) {
        const auto q = boundary_quark(p, j + 1, w[c]);
        for (int row = 0; row < params_.m_tilde; ++row) mat(row, c) = pp_integral(pp_monomial_multiply(q, row, anchor, scale));
    }
    for (Eigen::Index row = 0; row < mat.rows(); ++row) {
        const double norm = mat.row(row).lpNorm<Eigen::Infinity>();
        if (norm > 0.0) mat.row(row) /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(mat.cols() - 1);
    if ((mat * v).norm() > 1e-8 * std::max(1.0, mat.norm())) {
        throw ConstructionError("moment system has no numerical kernel");
    }
    v.normalize();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-14) {
            if (v[i] < 0.0) v = -v;
            break;
        }
    }
    return v;
}

PiecewisePolynomial IntervalSystem::boundary_quarklet(int p, int j, Side side, int k) const {
    const auto w = window(side, j, k);
    const Eigen::VectorXd v = boundary_coefficients(p, j, side, k);
    std::vector<double> weights(v.data(), v.data() + v.size());
    std::vector<PiecewisePolynomial> terms;
    for (int l : w) terms.push_back(boundary_quark(p, j + 1, l));
    return closed_at_one(pp_linear_combination(weights, terms));
}

PiecewisePolynomial IntervalSystem::build(const QuarkletIndex& idx) const {
    if (idx.j == params_.j0 - 1) return boundary_quark(idx.p, params_.j0, idx.k);
    if (is_inner(idx.j, idx.k)) return inner_quarklet(idx.p, idx.j, idx.k);
    const int n = 1 << idx.j;
    if (idx.k < n / 2) return boundary_quarklet(idx.p, idx.j, Side::left, idx.k);
    return boundary_quarklet(idx.p, idx.j, Side::right, n - 1 - idx.k);
}

std::shared_ptr<const PiecewisePolynomial> IntervalSystem::element(const QuarkletIndex& idx) const {
    if (!contains(idx)) {
        throw IndexError("index (p=" + std::to_string(idx.p) + ", j=" + std::to_string(idx.j) +
                         ", k=" + std::to_string(idx.k) + ") is not in nabla_sigma");
    }
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(idx); it != cache_.end()) return it->second;
    auto built = std::make_shared<const PiecewisePolynomial>(build(idx));
    cache_.emplace(idx, built);
    return built;
}

}  // namespace quarklet
