#include "quarklet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "quarklet/errors.hpp"
#include "quarklet/parallel.hpp"

namespace quarklet {

Function2D tensor_element(const IntervalSystem& sys1, const IntervalSystem& sys2, const QuarkletIndex& l1,
                          const QuarkletIndex& l2) {
    auto e1 = sys1.element(l1);
    auto e2 = sys2.element(l2);
    return [e1, e2](double x, double y) { return pp_eval(*e1, x) * pp_eval(*e2, y); };
}

namespace {

double lr_norm(const std::vector<double>& v, double r) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), r);
    return std::pow(s, 1.0 / r);
}

bool normalize(std::vector<double>& v, double r) {
    const double n = lr_norm(v, r);
    if (!(n > 0.0) || !std::isfinite(n)) return false;
    for (double& x : v) x /= n;
    return true;
}

// Conditional gradient ascent on the unit l_r sphere.
double ascend(std::vector<double> lambda, const std::function<double(const std::vector<double>&)>& phi, double r) {
    if (!normalize(lambda, r)) return 0.0;
    const double rp = r / (r - 1.0);
    const std::size_t a = lambda.size();
    double value = phi(lambda);
    if (!std::isfinite(value)) throw DomainError("non-finite norm in ball supremum");
    std::vector<double> grad(a), probe(a), next(a);
    for (int iter = 0; iter < 500; ++iter) {
        const double h = 1e-6;
        for (std::size_t i = 0; i < a; ++i) {
            probe = lambda;
            probe[i] += h;
            const double up = phi(probe);
            probe[i] -= 2 * h;
            const double down = phi(probe);
            grad[i] = (up - down) / (2 * h);
        }
        for (std::size_t i = 0; i < a; ++i)
            next[i] = std::copysign(std::pow(std::abs(grad[i]), rp - 1.0), grad[i]);
        if (!normalize(next, r)) break;
        const double candidate = phi(next);
        if (!(candidate > value)) break;
        const double gain = candidate - value;
        lambda = next;
        value = candidate;
        if (gain <= 1e-8 * std::max(value, 1e-300)) break;
    }
    return value;
}

}  // namespace

double ball_sup(int a, const std::function<double(const std::vector<double>&)>& combo_norm, double r,
                std::uint64_t seed) {
    if (!(r > 1.0) || !std::isfinite(r)) throw InvalidParameter("g_r requires 1 < r < infinity");
    if (a <= 0) return 0.0;
    const std::size_t n = static_cast<std::size_t>(a);
    double best = 0.0;
    std::vector<double> start(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(start.begin(), start.end(), 0.0);
        start[i] = 1.0;
        best = std::max(best, ascend(start, combo_norm, r));
    }
    if (n == 1) return best;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int s = 0; s < 32; ++s) {
        for (double& x : start) x = normal(rng);
        best = std::max(best, ascend(start, combo_norm, r));
    }
    if (r == 2.0) {
        Eigen::MatrixXd g(a, a);
        std::vector<double> e(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                std::fill(e.begin(), e.end(), 0.0);
                e[i] += 1.0;
                e[j] += 1.0;
                const double plus = combo_norm(e);
                e[j] -= 2.0;
                const double minus = combo_norm(e);
                g(i, j) = g(j, i) = (plus * plus - minus * minus) / 4.0;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
        const Eigen::VectorXd top = eig.eigenvectors().col(a - 1);
        best = std::max(best, ascend(std::vector<double>(top.data(), top.data() + a), combo_norm, r));
    }
    return best;
}

double g_r_value(const std::vector<double>& x_norms, const std::function<double(const std::vector<double>&)>& combo_norm,
                 double r, std::uint64_t seed) {
    if (x_norms.empty()) throw InvalidParameter("g_r requires rank >= 1");
    for (double x : x_norms)
        if (!std::isfinite(x)) throw DomainError("non-finite norm in g_r objective");
    return lr_norm(x_norms, r) * ball_sup(static_cast<int>(x_norms.size()), combo_norm, r, seed);
}

double g_r_objective(const TensorRepresentation& rep, const FieldNorm& norm_x, const FieldNorm& norm_y, double r,
                     std::uint64_t seed) {
    std::vector<double> x_norms;
    for (const auto& t : rep.terms) x_norms.push_back(norm_x(t.u));
    auto combo = [&](const std::vector<double>& lambda) {
        CoefficientField sum;
        for (std::size_t l = 0; l < rep.terms.size(); ++l)
            for (const auto& [idx, c] : rep.terms[l].v.entries) sum[idx] += lambda[l] * c;
        return norm_y(sum);
    };
    return g_r_value(x_norms, combo, r, seed);
}

double bivariate_seq_objective(const TensorRepresentation& rep, double s, double r, double delta1, double delta2, int m,
                               int direction) {
    validate_smoothness(s, m);
    if (direction != 1 && direction != 2) throw InvalidParameter("direction must be 1 or 2");
    const NormParams px = NormParams::make(direction == 1 ? s : 0.0, r, delta1, m);
    const NormParams py = NormParams::make(direction == 1 ? 0.0 : s, r, delta2, m);
    double su = 0.0, sv = 0.0;
    for (const auto& t : rep.terms) {
        su += seq_norm_1d(t.u, px);
        sv += seq_norm_1d(t.v, py);
    }
    return su * sv;
}

double intersection_norm(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidParameter("intersection norm components must be finite and >= 0");
        sum += v;
    }
    return sum;
}

namespace {

struct SweepState {
    std::vector<Eigen::VectorXd>& u;
    std::vector<Eigen::VectorXd>& v;
    std::vector<double> a, b;
    const VectorNorm& nx;
    const VectorNorm& ny;

    double sum() const {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::sqrt(a[i] * b[i]);
        return s;
    }

    void rescale() {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!(a[i] > 0.0) || !(b[i] > 0.0)) continue;
            const double alpha = std::sqrt(b[i] / a[i]);
            u[i] *= alpha;
            v[i] /= alpha;
            a[i] = b[i] = std::sqrt(a[i] * b[i]);
        }
    }

    // u_l += t u_k and v_k -= t v_l keep u_l v_l^T + u_k v_k^T fixed.
    bool shear(std::size_t l, std::size_t k) {
        const double un = u[k].norm();
        if (!(un > 0.0)) return false;
        const double gamma = std::max(u[l].norm(), 1e-300) / un;
        const double base = std::sqrt(a[l] * b[l]) + std::sqrt(a[k] * b[k]);
        double na = 0.0, nb = 0.0;
        auto eval = [&](double t, double& al, double& bk) {
            al = nx(u[l] + t * u[k]);
            bk = ny(v[k] - t * v[l]);
            return std::sqrt(al * b[l]) + std::sqrt(a[k] * bk);
        };
        double best = base, best_t = 0.0;
        for (int sign : {1, -1}) {
            for (int e = -2; e <= 12; ++e) {
                const double t = sign * gamma * std::ldexp(1.0, -e);
                double al, bk;
                const double val = eval(t, al, bk);
                if (val < best) {
                    best = val;
                    best_t = t;
                    na = al;
                    nb = bk;
                }
            }
        }
        if (best_t == 0.0) return false;
        // golden section between the neighbouring grid points
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = best_t / 2, hi = best_t * 2;
        double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
        double ac, bc, ad, bd;
        double fc = eval(c, ac, bc), fd = eval(d, ad, bd);
        for (int it = 0; it < 30; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                ad = ac;
                bd = bc;
                c = hi - g * (hi - lo);
                fc = eval(c, ac, bc);
            } else {
                lo = c;
                c = d;
                fc = fd;
                ac = ad;
                bc = bd;
                d = lo + g * (hi - lo);
                fd = eval(d, ad, bd);
            }
        }
        if (fc < best) {
            best = fc;
            best_t = c;
            na = ac;
            nb = bc;
        }
        if (fd < best) {
            best = fd;
            best_t = d;
            na = ad;
            nb = bd;
        }
        if (!(best < base * (1.0 - 1e-14))) return false;
        u[l] += best_t * u[k];
        v[k] -= best_t * v[l];
        a[l] = na;
        b[k] = nb;
        return true;
    }
};

}  // namespace

Factorization factorize_grid(const Eigen::MatrixXd& c, int R, const VectorNorm& norm_x, const VectorNorm& norm_y,
                             int sweeps) {
    if (R < 1) throw InvalidParameter("rank R must be >= 1");
    Factorization out;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    int nonzero = 0;
    const double cut = sv.size() > 0 ? 1e-14 * sv(0) : 0.0;
    while (nonzero < sv.size() && sv(nonzero) > cut) ++nonzero;
    const int rank = std::min(R, nonzero);
    out.rank = rank;
    double discarded = 0.0;
    for (int i = rank; i < sv.size(); ++i) discarded += sv(i) * sv(i);
    out.discarded = std::sqrt(discarded);
    if (nonzero == 0) {
        out.by_rank.assign(R, 0.0);
        return out;
    }
    for (int i = 0; i < nonzero; ++i) {
        const double w = std::sqrt(sv(i));
        out.u.push_back(w * svd.matrixU().col(i));
        out.v.push_back(w * svd.matrixV().col(i));
    }

    SweepState st{out.u, out.v, std::vector<double>(nonzero), std::vector<double>(nonzero), norm_x, norm_y};
    parallel_for(nonzero, [&](std::size_t i) {
        st.a[i] = norm_x(out.u[i]);
        st.b[i] = norm_y(out.v[i]);
    });
    st.rescale();

    for (int lead = 1; lead <= rank; ++lead) {
        out.history.assign(1, std::pow(st.sum(), 2));
        for (int sweep = 0; sweep < sweeps && lead > 1; ++sweep) {
            bool moved = false;
            for (int l = 0; l < lead; ++l)
                for (int k = 0; k < lead; ++k)
                    if (l != k) moved = st.shear(l, k) || moved;
            st.rescale();
            out.history.push_back(std::pow(st.sum(), 2));
            if (!moved) break;
        }
        out.by_rank.push_back(std::pow(st.sum(), 2));
    }
    while (static_cast<int>(out.by_rank.size()) < R) out.by_rank.push_back(out.by_rank.back());
    out.objective = out.by_rank.back();
    return out;
}

Eigen::MatrixXd leading_matrix(const Factorization& f) {
    if (f.u.empty()) return Eigen::MatrixXd();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(f.u[0].size(), f.v[0].size());
    for (int i = 0; i < f.rank; ++i) m += f.u[i] * f.v[i].transpose();
    return m;
}

namespace {

CoefficientField vector_field(const Eigen::VectorXd& c, const std::vector<QuarkletIndex>& idx) {
    CoefficientField f;
    for (std::size_t i = 0; i < idx.size(); ++i) f.entries.emplace_hint(f.entries.end(), idx[i], c(i));
    return f;
}

}  // namespace

TensorRepresentation to_representation(const Factorization& f, const std::vector<QuarkletIndex>& idx1,
                                       const std::vector<QuarkletIndex>& idx2, bool include_tail) {
    TensorRepresentation rep;
    const std::size_t n = include_tail ? f.u.size() : static_cast<std::size_t>(f.rank);
    for (std::size_t i = 0; i < n; ++i) rep.terms.push_back({vector_field(f.u[i], idx1), vector_field(f.v[i], idx2)});
    return rep;
}

namespace {

// rows: phi * diag(w) * F over slices, where F(i, k) = f at (node i of the analysed direction, node k of the other)
Eigen::MatrixXd slice_moments(const Projector& analysed, const Projector& other,
                              const std::function<double(double, double)>& f) {
    const Eigen::VectorXd& xs = analysed.nodes();
    const Eigen::VectorXd& wx = analysed.weights();
    const Eigen::VectorXd& ys = other.nodes();
    const Eigen::Index n = xs.size(), slices = ys.size();
    const Eigen::Index block = 64;
    Eigen::MatrixXd t(analysed.values().rows(), slices);
    const std::size_t blocks = static_cast<std::size_t>((slices + block - 1) / block);
    parallel_for(blocks, [&](std::size_t b) {
        const Eigen::Index first = static_cast<Eigen::Index>(b) * block;
        const Eigen::Index count = std::min(block, slices - first);
        Eigen::MatrixXd fb(n, count);
        for (Eigen::Index k = 0; k < count; ++k)
            for (Eigen::Index i = 0; i < n; ++i) fb(i, k) = wx(i) * f(xs(i), ys(first + k));
        t.middleCols(first, count).noalias() = analysed.values() * fb;
    });
    return t;
}

}  // namespace

TensorAnalysis tensor_analyze(const Projector& p1, const Projector& p2, const Function2D& f, bool x_first) {
    TensorAnalysis out{p1.indices(), p2.indices(), {}};
    if (x_first) {
        const Eigen::MatrixXd c1 = p1.solve(slice_moments(p1, p2, f));  // n1 x N2
        const Eigen::MatrixXd d = (p2.values() * p2.weights().asDiagonal()) * c1.transpose();
        out.coefficients = p2.solve(d).transpose();
    } else {
        auto g = [&](double y, double x) { return f(x, y); };
        const Eigen::MatrixXd c2 = p2.solve(slice_moments(p2, p1, g));  // n2 x N1
        const Eigen::MatrixXd d = (p1.values() * p1.weights().asDiagonal()) * c2.transpose();
        out.coefficients = p1.solve(d);
    }
    for (Eigen::Index i = 0; i < out.coefficients.size(); ++i)
        if (!std::isfinite(out.coefficients.data()[i])) throw DomainError("non-finite tensor coefficient");
    return out;
}

std::string check_dual_order(const SplineParams& params, Mode mode) {
    const int bound = 5 * params.m + 12;
    if (params.m_tilde > bound) return {};
    std::ostringstream msg;
    msg << "m̃ > 5m+12 (m_tilde = " << params.m_tilde << ", 5m + 12 = " << bound << ")";
    if (mode == Mode::strict) throw InvalidParameter("strict mode requires " + msg.str());
    return "exploratory mode, hypothesis not met: " + msg.str();
}

BivariateEstimate bivariate_norm_estimate(const TensorAnalysis& analysis, const SplineParams& params, double s,
                                          double r, double delta1, double delta2, int R) {
    validate_smoothness(s, params.m);
    const NormParams x_s = NormParams::make(s, r, delta1, params.m);
    const NormParams x_0 = NormParams::make(0.0, r, delta1, params.m);
    const NormParams y_s = NormParams::make(s, r, delta2, params.m);
    const NormParams y_0 = NormParams::make(0.0, r, delta2, params.m);
    if (R < 1) throw InvalidParameter("rank R must be >= 1");

    auto norm_on = [](const std::vector<QuarkletIndex>& idx, const NormParams& p) {
        return [&idx, p](const Eigen::VectorXd& c) { return seq_norm_1d(vector_field(c, idx), p); };
    };
    const Eigen::MatrixXd half = analysis.coefficients / 2.0;
    const Factorization f1 = factorize_grid(half, R, norm_on(analysis.idx1, x_s), norm_on(analysis.idx2, y_0));
    const Factorization f2 = factorize_grid(half, R, norm_on(analysis.idx1, x_0), norm_on(analysis.idx2, y_s));

    BivariateEstimate out;
    for (int i = 0; i < R; ++i) out.by_rank.push_back(f1.by_rank[i] + f2.by_rank[i]);
    out.direction1 = f1.objective;
    out.direction2 = f2.objective;
    out.estimate = intersection_norm({f1.objective, f2.objective});
    return out;
}

BivariateEstimate bivariate_norm_estimate(const Function2D& f, const IntervalSystem& sys1, const IntervalSystem& sys2,
                                          int J, double s, double r, double delta1, double delta2, int R, Mode mode) {
    const SplineParams& params = sys1.params();
    if (params.m != sys2.params().m || params.m_tilde != sys2.params().m_tilde)
        throw InvalidParameter("both directions must use the same (m, m_tilde)");
    validate_smoothness(s, params.m);
    NormParams::make(s, r, delta1, params.m);
    NormParams::make(s, r, delta2, params.m);
    std::string warning = check_dual_order(params, mode);
    const Projector p1(sys1, J);
    const Projector p2(sys2, J);
    BivariateEstimate out = bivariate_norm_estimate(tensor_analyze(p1, p2, f), params, s, r, delta1, delta2, R);
    out.warning = std::move(warning);
    return out;
}

}  // namespace quarklet
