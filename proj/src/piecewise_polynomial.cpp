#include "quarklet/piecewise_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <unsupported/Eigen/Polynomials>

#include "quarklet/errors.hpp"
#include "quarklet/quadrature.hpp"

namespace quarklet {

namespace {

using Coefficients = PiecewisePolynomial::Coefficients;

double poly_eval(const Coefficients& c, double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
}

Coefficients poly_mul(const Coefficients& a, const Coefficients& b) {
    if (a.empty() || b.empty()) return {};
    Coefficients out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
    }
    return out;
}

double poly_integral01(const Coefficients& c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] / static_cast<double>(i + 1);
    return acc;
}

// Coefficients of c(alpha + beta * u).
Coefficients poly_compose_affine(Coefficients c, double alpha, double beta) {
    const std::size_t n = c.size();
    if (alpha != 0.0) {
        // Taylor shift by repeated synthetic division.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t k = n - 1; k > i; --k) c[k - 1] += alpha * c[k];
        }
    }
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        c[i] *= scale;
        scale *= beta;
    }
    return c;
}

// (alpha + beta u)^p expanded in powers of u.
Coefficients binomial_power(double alpha, double beta, int p) {
    Coefficients out(static_cast<std::size_t>(p) + 1, 0.0);
    double binom = 1.0;
    for (int i = 0; i <= p; ++i) {
        out[i] = binom * std::pow(alpha, p - i) * std::pow(beta, i);
        binom = binom * (p - i) / (i + 1);
    }
    return out;
}

bool is_zero(const Coefficients& c) {
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

std::vector<Dyadic> merge_breaks(std::span<const Dyadic> a, std::span<const Dyadic> b) {
    std::vector<Dyadic> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void add_into(Coefficients& acc, const Coefficients& c, double w) {
    if (acc.size() < c.size()) acc.resize(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) acc[i] += w * c[i];
}

}  // namespace

PiecewisePolynomial::PiecewisePolynomial(std::vector<Dyadic> breakpoints,
                                         std::vector<Coefficients> pieces, bool closed_right)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), closed_right_(closed_right) {
    if (breaks_.empty() && pieces_.empty()) return;
    if (breaks_.size() != pieces_.size() + 1) {
        throw InvalidParameter("piecewise polynomial needs #pieces = #breakpoints - 1");
    }
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        if (!(breaks_[i] < breaks_[i + 1])) {
            throw InvalidParameter("piecewise polynomial breakpoints must be strictly increasing");
        }
    }
    breaks_d_.reserve(breaks_.size());
    for (const auto& b : breaks_) breaks_d_.push_back(b.to_double());
}

PiecewisePolynomial PiecewisePolynomial::constant(Dyadic a, Dyadic b, double value) {
    return PiecewisePolynomial({a, b}, {{value}});
}

int PiecewisePolynomial::degree_cap() const {
    int deg = 0;
    for (const auto& c : pieces_) {
        for (int i = static_cast<int>(c.size()) - 1; i > deg; --i) {
            if (c[i] != 0.0) {
                deg = i;
                break;
            }
        }
    }
    return deg;
}

double PiecewisePolynomial::operator()(double x) const {
    if (pieces_.empty() || x < breaks_d_.front()) return 0.0;
    if (x >= breaks_d_.back()) {
        if (closed_right_ && x == breaks_d_.back()) return poly_eval(pieces_.back(), 1.0);
        return 0.0;
    }
    const auto it = std::upper_bound(breaks_d_.begin(), breaks_d_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - breaks_d_.begin()) - 1;
    const double a = breaks_d_[i];
    const double h = breaks_d_[i + 1] - a;
    return poly_eval(pieces_[i], (x - a) / h);
}

PiecewisePolynomial PiecewisePolynomial::trimmed() const {
    std::size_t lo = 0;
    std::size_t hi = pieces_.size();
    while (lo < hi && is_zero(pieces_[lo])) ++lo;
    while (hi > lo && is_zero(pieces_[hi - 1])) --hi;
    if (lo == hi) return {};
    if (lo == 0 && hi == pieces_.size()) return *this;
    std::vector<Dyadic> b(breaks_.begin() + static_cast<std::ptrdiff_t>(lo),
                          breaks_.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    std::vector<Coefficients> p(pieces_.begin() + static_cast<std::ptrdiff_t>(lo),
                                pieces_.begin() + static_cast<std::ptrdiff_t>(hi));
    return PiecewisePolynomial(std::move(b), std::move(p),
                               closed_right_ && hi == pieces_.size());
}

double pp_eval(const PiecewisePolynomial& f, double x) { return f(x); }

PiecewisePolynomial pp_derivative(const PiecewisePolynomial& f) {
    if (f.empty()) return {};
    const auto& b = f.breakpoints();
    std::vector<Coefficients> out;
    out.reserve(f.num_pieces());
    for (std::size_t i = 0; i < f.num_pieces(); ++i) {
        const auto& c = f.pieces()[i];
        const double h = (b[i + 1] - b[i]).to_double();
        Coefficients d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k] / h;
        out.push_back(std::move(d));
    }
    return PiecewisePolynomial(b, std::move(out), f.closed_right());
}

PiecewisePolynomial pp_antiderivative(const PiecewisePolynomial& f) {
    if (f.empty()) return {};
    const auto& b = f.breakpoints();
    std::vector<Coefficients> out;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.num_pieces(); ++i) {
        const auto& c = f.pieces()[i];
        const double h = (b[i + 1] - b[i]).to_double();
        Coefficients F(c.size() + 1, 0.0);
        F[0] = acc;
        for (std::size_t k = 0; k < c.size(); ++k) F[k + 1] = h * c[k] / static_cast<double>(k + 1);
        acc += h * poly_integral01(c);
        out.push_back(std::move(F));
    }
    return PiecewisePolynomial(b, std::move(out), f.closed_right());
}

PiecewisePolynomial pp_scale_shift(const PiecewisePolynomial& f, int j, Dyadic k,
                                   double normalization) {
    if (f.empty()) return {};
    std::vector<Dyadic> b;
    b.reserve(f.breakpoints().size());
    for (const auto& x : f.breakpoints()) b.push_back((x + k).scaled_pow2(j));
    std::vector<Coefficients> p = f.pieces();
    if (normalization != 1.0) {
        for (auto& c : p)
            for (auto& v : c) v *= normalization;
    }
    return PiecewisePolynomial(std::move(b), std::move(p), f.closed_right());
}

PiecewisePolynomial pp_reflect(const PiecewisePolynomial& f) {
    if (f.empty()) return {};
    const auto& src = f.breakpoints();
    std::vector<Dyadic> b;
    b.reserve(src.size());
    for (auto it = src.rbegin(); it != src.rend(); ++it) b.push_back(Dyadic(1) - *it);
    std::vector<Coefficients> p;
    p.reserve(f.num_pieces());
    for (auto it = f.pieces().rbegin(); it != f.pieces().rend(); ++it) {
        p.push_back(poly_compose_affine(*it, 1.0, -1.0));
    }
    return PiecewisePolynomial(std::move(b), std::move(p), true);
}

PiecewisePolynomial pp_monomial_multiply(const PiecewisePolynomial& f, int p, double center,
                                         double scale) {
    if (p < 0) throw InvalidParameter("monomial degree must satisfy p >= 0");
    if (p == 0 || f.empty()) return f;
    const auto& b = f.breakpoints();
    std::vector<Coefficients> out;
    out.reserve(f.num_pieces());
    for (std::size_t i = 0; i < f.num_pieces(); ++i) {
        const double a = b[i].to_double();
        const double h = (b[i + 1] - b[i]).to_double();
        out.push_back(poly_mul(f.pieces()[i], binomial_power((a - center) / scale, h / scale, p)));
    }
    return PiecewisePolynomial(b, std::move(out), f.closed_right());
}

PiecewisePolynomial pp_refine(const PiecewisePolynomial& f, std::span<const Dyadic> breakpoints) {
    if (breakpoints.size() < 2) return {};
    std::vector<Coefficients> out;
    out.reserve(breakpoints.size() - 1);
    const auto& b = f.breakpoints();
    std::size_t piece = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const Dyadic& c = breakpoints[i];
        const Dyadic& d = breakpoints[i + 1];
        if (f.empty() || d <= b.front() || c >= b.back()) {
            out.push_back({0.0});
            continue;
        }
        if (c < b.front() || d > b.back()) {
            throw InvalidParameter("refinement interval straddles the support boundary");
        }
        while (piece + 1 < f.num_pieces() && b[piece + 1] <= c) ++piece;
        if (d > b[piece + 1]) throw InvalidParameter("refinement must contain the original breakpoints");
        const double h = (b[piece + 1] - b[piece]).to_double();
        const double alpha = (c - b[piece]).to_double() / h;
        const double beta = (d - c).to_double() / h;
        if (alpha == 0.0 && beta == 1.0) {
            out.push_back(f.pieces()[piece]);
        } else {
            out.push_back(poly_compose_affine(f.pieces()[piece], alpha, beta));
        }
    }
    const bool closed = f.closed_right() && !f.empty() && breakpoints.back() == b.back();
    return PiecewisePolynomial(std::vector<Dyadic>(breakpoints.begin(), breakpoints.end()),
                               std::move(out), closed);
}

PiecewisePolynomial pp_restrict(const PiecewisePolynomial& f, Dyadic a, Dyadic b) {
    if (f.empty()) return {};
    const Dyadic lo = std::max(a, f.support_begin());
    const Dyadic hi = std::min(b, f.support_end());
    if (!(lo < hi)) return {};
    std::vector<Dyadic> br{lo};
    for (const auto& x : f.breakpoints())
        if (lo < x && x < hi) br.push_back(x);
    br.push_back(hi);
    auto out = pp_refine(f, br);
    out.set_closed_right(f.closed_right() && hi == f.support_end());
    return out;
}

PiecewisePolynomial pp_scale(const PiecewisePolynomial& f, double alpha) {
    std::vector<Coefficients> p = f.pieces();
    for (auto& c : p)
        for (auto& v : c) v *= alpha;
    return PiecewisePolynomial(f.breakpoints(), std::move(p), f.closed_right());
}

PiecewisePolynomial pp_linear_combination(std::span<const double> weights,
                                          std::span<const PiecewisePolynomial> terms) {
    if (weights.size() != terms.size()) {
        throw InvalidParameter("linear combination needs one weight per term");
    }
    std::vector<Dyadic> merged;
    for (const auto& t : terms) {
        if (t.empty()) continue;
        merged = merge_breaks(merged, t.breakpoints());
    }
    if (merged.size() < 2) return {};
    std::vector<Coefficients> acc(merged.size() - 1);
    bool closed = false;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].empty() || weights[i] == 0.0) continue;
        const auto& tb = terms[i].breakpoints();
        // Refine only on the part of the merged grid covering this term.
        const auto lo = std::lower_bound(merged.begin(), merged.end(), tb.front());
        const auto hi = std::lower_bound(merged.begin(), merged.end(), tb.back());
        const std::span<const Dyadic> local(&*lo, static_cast<std::size_t>(hi - lo) + 1);
        const auto refined = pp_refine(terms[i], local);
        const std::size_t offset = static_cast<std::size_t>(lo - merged.begin());
        for (std::size_t k = 0; k < refined.num_pieces(); ++k) {
            add_into(acc[offset + k], refined.pieces()[k], weights[i]);
        }
        if (terms[i].closed_right() && tb.back() == merged.back()) closed = true;
    }
    for (auto& c : acc)
        if (c.empty()) c.push_back(0.0);
    return PiecewisePolynomial(std::move(merged), std::move(acc), closed);
}

PiecewisePolynomial pp_add(const PiecewisePolynomial& f, const PiecewisePolynomial& g) {
    const double w[2] = {1.0, 1.0};
    const PiecewisePolynomial t[2] = {f, g};
    return pp_linear_combination(w, t);
}

PiecewisePolynomial pp_sub(const PiecewisePolynomial& f, const PiecewisePolynomial& g) {
    const double w[2] = {1.0, -1.0};
    const PiecewisePolynomial t[2] = {f, g};
    return pp_linear_combination(w, t);
}

double pp_integral(const PiecewisePolynomial& f) {
    double acc = 0.0;
    const auto& b = f.breakpoints();
    for (std::size_t i = 0; i < f.num_pieces(); ++i) {
        acc += (b[i + 1] - b[i]).to_double() * poly_integral01(f.pieces()[i]);
    }
    return acc;
}

double pp_inner_product(const PiecewisePolynomial& f, const PiecewisePolynomial& g) {
    if (f.empty() || g.empty()) return 0.0;
    const Dyadic lo = std::max(f.support_begin(), g.support_begin());
    const Dyadic hi = std::min(f.support_end(), g.support_end());
    if (!(lo < hi)) return 0.0;
    std::vector<Dyadic> br{lo};
    for (const auto& x : merge_breaks(f.breakpoints(), g.breakpoints()))
        if (lo < x && x < hi) br.push_back(x);
    br.push_back(hi);
    const auto rf = pp_refine(f, br);
    const auto rg = pp_refine(g, br);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        acc += (br[i + 1] - br[i]).to_double() * poly_integral01(poly_mul(rf.pieces()[i], rg.pieces()[i]));
    }
    return acc;
}

double pp_moment(const PiecewisePolynomial& f, int q) {
    if (q < 0) throw InvalidParameter("moment order must satisfy q >= 0");
    double acc = 0.0;
    const auto& b = f.breakpoints();
    for (std::size_t i = 0; i < f.num_pieces(); ++i) {
        const double a = b[i].to_double();
        const double h = (b[i + 1] - b[i]).to_double();
        acc += h * poly_integral01(poly_mul(f.pieces()[i], binomial_power(a, h, q)));
    }
    return acc;
}

namespace {

std::vector<double> real_roots_in_unit_interval(const Coefficients& c) {
    int deg = static_cast<int>(c.size()) - 1;
    while (deg > 0 && c[deg] == 0.0) --deg;
    std::vector<double> roots;
    if (deg < 1) return roots;
    Eigen::VectorXd coeffs(deg + 1);
    for (int i = 0; i <= deg; ++i) coeffs[i] = c[i];
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(coeffs);
    for (const auto& z : solver.roots()) {
        if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real())) && z.real() > 1e-12 &&
            z.real() < 1.0 - 1e-12) {
            roots.push_back(z.real());
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double power_integral(const Coefficients& c, double r, double a, double b, int nodes) {
    const auto& rule = gauss_legendre(nodes);
    double part = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        part += rule.weights[q] * std::pow(std::abs(poly_eval(c, a + (b - a) * rule.nodes[q])), r);
    }
    return (b - a) * part;
}

// Bisects until two rules of different order agree; near-real complex roots make
// |p|^r hard to integrate with a single rule.
double adaptive_power_integral(const Coefficients& c, double r, double a, double b, int nodes, int depth) {
    const double coarse = power_integral(c, r, a, b, nodes);
    const double fine = power_integral(c, r, a, b, 2 * nodes);
    if (depth >= 20 || std::abs(fine - coarse) <= 1e-14 * std::max(1.0, std::abs(fine))) return fine;
    const double mid = 0.5 * (a + b);
    return adaptive_power_integral(c, r, a, mid, nodes, depth + 1) +
           adaptive_power_integral(c, r, mid, b, nodes, depth + 1);
}

}  // namespace

double pp_lr_norm(const PiecewisePolynomial& f, double r) {
    if (!(r > 0.0)) throw InvalidParameter("L_r norm needs r > 0");
    const auto& b = f.breakpoints();
    double acc = 0.0;
    const bool even_integer = r == std::floor(r) && static_cast<long>(r) % 2 == 0;
    for (std::size_t i = 0; i < f.num_pieces(); ++i) {
        const auto& c = f.pieces()[i];
        const double h = (b[i + 1] - b[i]).to_double();
        if (even_integer) {
            Coefficients power{1.0};
            for (long k = 0; k < static_cast<long>(r); ++k) power = poly_mul(power, c);
            acc += h * poly_integral01(power);
            continue;
        }
        if (is_zero(c)) continue;
        std::vector<double> cuts{0.0};
        for (double z : real_roots_in_unit_interval(c)) cuts.push_back(z);
        cuts.push_back(1.0);
        const int deg = std::max(1, static_cast<int>(c.size()) - 1);
        const int nodes = static_cast<int>(std::ceil((deg * r + 8.0) / 2.0));
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            if (cuts[s + 1] > cuts[s]) acc += h * adaptive_power_integral(c, r, cuts[s], cuts[s + 1], nodes, 0);
        }
    }
    return std::pow(acc, 1.0 / r);
}

double pp_sup_norm(const PiecewisePolynomial& f, int samples_per_piece) {
    double best = 0.0;
    for (const auto& c : f.pieces()) {
        for (int s = 0; s <= samples_per_piece; ++s) {
            best = std::max(best, std::abs(poly_eval(c, static_cast<double>(s) / samples_per_piece)));
        }
    }
    return best;
}

}  // namespace quarklet
