#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "quarklet/errors.hpp"
#include "quarklet/interval_system.hpp"

using namespace quarklet;

namespace {

const std::vector<std::pair<int, int>> kOrders{{2, 2}, {2, 4}, {3, 3}, {3, 5}};

// Plain de Boor style evaluation of B_{k} on an explicit knot list, recursion in doubles.
double bspline_oracle(const std::vector<double>& t, int i, int order, double x) {
    if (order == 1) {
        if (t[i] < t[i + 1] && x >= t[i] && (x < t[i + 1] || (x == 1.0 && t[i + 1] == 1.0))) return 1.0;
        return 0.0;
    }
    double v = 0.0;
    if (t[i + order - 1] > t[i]) v += (x - t[i]) / (t[i + order - 1] - t[i]) * bspline_oracle(t, i, order - 1, x);
    if (t[i + order] > t[i + 1]) v += (t[i + order] - x) / (t[i + order] - t[i + 1]) * bspline_oracle(t, i + 1, order - 1, x);
    return v;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("knot examples") {
    const auto params = SplineParams::make(2, 2, 3);
    CHECK(knot(params, 3, -1) == Dyadic(0));
    CHECK(knot(params, 3, 4) == Dyadic::make(1, 1));
    CHECK(knot(params, 3, 9) == Dyadic(1));
    CHECK(knots(params, 3).size() == 11);
    CHECK_THROWS_AS(knot(params, 2, 0), InvalidParameter);
}

TEST_CASE("Schoenberg B-splines") {
    for (int m = 2; m <= 5; ++m) {
        const auto params = SplineParams::make(m, m);
        const int j = params.j0;
        const int n = 1 << j;
        std::vector<double> t;
        for (const auto& d : knots(params, j)) t.push_back(d.to_double());
        const auto nm = cardinal_bspline(m);
        double worst_oracle = 0.0, worst_refl = 0.0, worst_pu = 0.0, worst_inner = 0.0;
        std::vector<PiecewisePolynomial> all;
        for (int k = -m + 1; k <= n - 1; ++k) all.push_back(schoenberg_bspline(params, j, k));
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            double sum = 0.0;
            for (int k = -m + 1; k <= n - 1; ++k) {
                const auto& b = all[k + m - 1];
                sum += b(x);
                worst_oracle = std::max(worst_oracle, std::abs(b(x) - bspline_oracle(t, k + m - 1, m, x)));
                worst_refl = std::max(worst_refl, std::abs(b(x) - all[n - m - k + m - 1](1.0 - x)));
                if (k >= 0 && k <= n - m) worst_inner = std::max(worst_inner, std::abs(b(x) - nm(n * x - k)));
            }
            worst_pu = std::max(worst_pu, std::abs(sum - 1.0));
        }
        INFO("m=" << m);
        CHECK(worst_oracle <= 1e-12);
        CHECK(worst_refl <= 1e-12);
        CHECK(worst_pu <= 1e-12);
        CHECK(worst_inner <= 1e-12);
        CHECK(all.front().support_begin() == Dyadic(0));
        CHECK(all.back().support_end() == Dyadic(1));
    }
    CHECK_THROWS_AS(schoenberg_bspline(SplineParams::make(2, 2), 3, -2), IndexError);
}

TEST_CASE("boundary quark examples") {
    const IntervalSystem sys(SplineParams::make(3, 3), {0, 0});
    const int j = sys.j0();
    const int n = 1 << j;
    for (int k = -2; k <= n - 1; ++k) {
        const auto q0 = sys.boundary_quark(0, j, k);
        const auto b = schoenberg_bspline(sys.params(), j, k);
        for (double x : {0.0, 0.01, 0.3, 0.5, 0.97, 1.0}) CHECK(q0(x) == doctest::Approx(std::sqrt(n) * b(x)));
    }
    CHECK(sys.boundary_quark(1, j, -1)(0.0) == 0.0);
    const auto right = sys.boundary_quark(2, j, n - 1);
    const auto left = sys.boundary_quark(2, j, n - 3 - (n - 1));
    const IntervalSystem hat(SplineParams::make(2, 2), {0, 0});
    const auto hat_right = hat.boundary_quark(2, hat.j0(), (1 << hat.j0()) - 1);
    const auto hat_left = hat.boundary_quark(2, hat.j0(), -1);
    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        CHECK(std::abs(right(x) - left(1.0 - x)) <= 1e-12);
        CHECK(std::abs(hat_right(x) - hat_left(1.0 - x)) <= 1e-12);
    }
    const auto inner = sys.boundary_quark(3, j, 4);
    const auto phi3 = cardinal_quark(sys.params(), 3);
    for (double x : {0.26, 0.3, 0.4}) CHECK(inner(x) == doctest::Approx(std::sqrt(n) * phi3(n * x - 4 - 1)));
}

TEST_CASE("index bookkeeping") {
    for (auto [m, mt] : kOrders) {
        for (int sl : {0, 1}) {
            for (int sr : {0, 2}) {
                const IntervalSystem sys(SplineParams::make(m, mt), {sl, sr});
                for (int j = sys.j0(); j <= sys.j0() + 4; ++j) {
                    CHECK(sys.delta_size(j) == (1 << j) - 1 + m - (sr > 0) - (sl > 0));
                }
                CHECK(sys.nabla_first(sys.j0() - 1) == -m + 1 + (sl > 0));
                CHECK(sys.nabla_last(sys.j0() + 1) == (1 << (sys.j0() + 1)) - 1);
            }
        }
    }
    const IntervalSystem sys(SplineParams::make(2, 2), {0, 1});
    const int j0 = sys.j0();
    CHECK_THROWS_AS(sys.element({0, j0 - 1, (1 << j0) - 1}), IndexError);
    CHECK_NOTHROW(sys.element({0, j0, (1 << j0) - 1}));
    CHECK_THROWS_AS(sys.element({0, j0 - 2, 0}), IndexError);
    CHECK_THROWS_AS(sys.element({0, j0, 1 << j0}), IndexError);
    CHECK(sys.indices(1, j0).size() == 2 * (sys.delta_size(j0) + (1u << j0)));
}

TEST_CASE("inner quarklets match the quark expansion") {
    for (auto [m, mt] : kOrders) {
        const IntervalSystem sys(SplineParams::make(m, mt), {0, 0});
        const int j = sys.j0();
        const auto& b = sys.filters().wavelet;
        for (int p : {0, 2, 5}) {
            for (int k = m - 1; k <= (1 << j) - m; ++k) {
                if (!sys.is_inner(j, k)) continue;
                const auto psi = sys.inner_quarklet(p, j, k);
                std::vector<double> w;
                std::vector<PiecewisePolynomial> terms;
                for (int i = b.first(); i <= b.last(); ++i) {
                    w.push_back(b[i] / std::sqrt(2.0));
                    terms.push_back(sys.boundary_quark(p, j + 1, 2 * k + i - m / 2));
                }
                CHECK(pp_sup_norm(pp_sub(psi, pp_linear_combination(w, terms))) <= 1e-10);
                CHECK(psi.support_begin() >= Dyadic(0));
                CHECK(psi.support_end() <= Dyadic(1));
            }
        }
        const int k = (1 << j) / 2;
        const auto psi0 = sys.inner_quarklet(0, j, k);
        const auto cdf = scaled_element(shift_quarklet(sys.params(), 0), j, k);
        for (double x : {0.4, 0.5, 0.55}) CHECK(psi0(x) == doctest::Approx(cdf(x)));
        const auto base = shift_quarklet(sys.params(), 0);
        CHECK((psi0.support_end() - psi0.support_begin()).to_double() ==
              doctest::Approx((base.support_end() - base.support_begin()).to_double() / (1 << j)));
        CHECK_THROWS_AS(sys.inner_quarklet(0, j, 0), ConstructionError);
    }
}

TEST_CASE("boundary moment matrix") {
    for (auto [m, mt] : kOrders) {
        const IntervalSystem sys(SplineParams::make(m, mt), {1, 1});
        const int j = sys.j0();
        for (int p = 0; p <= 5; ++p) {
            for (int k = 0; k <= m - 2; ++k) {
                const auto left = sys.boundary_moment_matrix(p, j, Side::left, k);
                CHECK(left.rows() == mt);
                CHECK(left.cols() == mt + 1);
                CHECK(kernel_dimension(left) >= 1);
                if (p % 2 == 0) CHECK(left.row(0).minCoeff() > 0.0);
                if (m % 2 == 0) {
                    // x -> 1 - x turns x^q into a binomial combination of lower moments; inner
                    // quarks pick up (-1)^p under reflection, boundary quarks do not.
                    const auto right = sys.boundary_moment_matrix(p, j, Side::right, k);
                    const auto w = sys.window(Side::left, j, k);
                    for (int c = 0; c <= mt; ++c) {
                        const double sign = (w[c] < 0 || p % 2 == 0) ? 1.0 : -1.0;
                        for (int q = 0; q < mt; ++q) {
                            double expected = 0.0;
                            for (int i = 0; i <= q; ++i) expected += binom(q, i) * ((i % 2) ? -1.0 : 1.0) * left(i, c);
                            CHECK(right(q, c) == doctest::Approx(sign * expected).epsilon(1e-9).scale(1e-3));
                        }
                    }
                }
            }
        }
    }
    const IntervalSystem small(SplineParams::make(2, 2), {0, 0});
    const auto mat = small.boundary_moment_matrix(0, small.j0(), Side::left, 0);
    CHECK(kernel_dimension(mat) == 1);
}

TEST_CASE("all elements have vanishing moments and live on the unit interval") {
    for (auto [m, mt] : kOrders) {
        for (BoundaryCondition sigma : {BoundaryCondition{0, 0}, BoundaryCondition{1, 0}, BoundaryCondition{1, 1}}) {
            const IntervalSystem sys(SplineParams::make(m, mt), sigma);
            double worst = 0.0;
            for (int p = 0; p <= 6; ++p) {
                for (int j = sys.j0(); j <= sys.j0() + 1; ++j) {
                    for (int k = 0; k < (1 << j); ++k) {
                        const auto e = sys.element({p, j, k});
                        CHECK(e->support_begin() >= Dyadic(0));
                        CHECK(e->support_end() <= Dyadic(1));
                        const double norm = std::sqrt(pp_inner_product(*e, *e));
                        for (int q = 0; q < mt; ++q) worst = std::max(worst, std::abs(pp_moment(*e, q)) / norm);
                    }
                }
            }
            INFO("m=" << m << " mt=" << mt);
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("boundary conditions hold at the endpoints") {
    for (auto [m, mt] : kOrders) {
        const IntervalSystem sys(SplineParams::make(m, mt), {1, 1});
        for (const auto& idx : sys.indices(4, sys.j0() + 1)) {
            const auto e = sys.element(idx);
            CHECK((*e)(0.0) == 0.0);
            CHECK(std::abs((*e)(1.0)) <= 1e-13);
        }
        const IntervalSystem free(SplineParams::make(m, mt), {0, 0});
        CHECK(std::abs((*free.element({0, free.j0() - 1, -m + 1}))(0.0)) > 0.1);
        CHECK(std::abs((*free.element({0, free.j0() - 1, (1 << free.j0()) - 1}))(1.0)) > 0.1);
    }
}

TEST_CASE("right boundary quarklets mirror the left ones for even m and even p") {
    const IntervalSystem sys(SplineParams::make(2, 4), {1, 1});
    const int j = sys.j0();
    for (int p : {0, 2, 4}) {
        const auto left = sys.element({p, j, 0});
        const auto right = sys.element({p, j, (1 << j) - 1});
        for (int i = 0; i <= 100; ++i) CHECK(std::abs((*right)(i / 100.0) - (*left)(1.0 - i / 100.0)) <= 1e-12);
    }
}

TEST_CASE("element dispatch") {
    const IntervalSystem sys(SplineParams::make(3, 3), {0, 0});
    const int j0 = sys.j0();
    for (int k = -2; k < (1 << j0); ++k) {
        const auto e = sys.element({2, j0 - 1, k});
        const auto q = sys.boundary_quark(2, j0, k);
        for (double x : {0.0, 0.05, 0.5, 0.93}) CHECK((*e)(x) == q(x));
    }
    CHECK(sys.element({0, j0, 5}).get() == sys.element({0, j0, 5}).get());
}

TEST_CASE("elements are bounded with polynomial growth in p") {
    const IntervalSystem sys(SplineParams::make(3, 3), {0, 0});
    double ratio = 0.0;
    for (int p = 0; p <= 8; ++p)
        for (int j = sys.j0() - 1; j <= sys.j0() + 3; ++j)
            for (int k = sys.nabla_first(j); k <= sys.nabla_last(j); k += 3) {
                const auto e = sys.element({p, j, k});
                ratio = std::max(ratio, pp_sup_norm(*e) / (std::pow(p + 1, 3) * std::pow(2.0, j / 2.0)));
            }
    MESSAGE("measured sup-norm constant " << ratio);
    CHECK(std::isfinite(ratio));
    CHECK(ratio < 100.0);
}

TEST_CASE("concurrent element construction") {
    const IntervalSystem sys(SplineParams::make(3, 5), {1, 0});
    const auto idx = sys.indices(3, sys.j0() + 1);
    std::vector<double> a(idx.size()), b(idx.size());
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < idx.size(); i += 4) a[i] = pp_integral(*sys.element(idx[i]));
        });
    }
    for (auto& th : pool) th.join();
    const IntervalSystem fresh(SplineParams::make(3, 5), {1, 0});
    for (std::size_t i = 0; i < idx.size(); ++i) b[i] = pp_integral(*fresh.element(idx[i]));
    CHECK(a == b);
}

#include "quarklet/serialization.hpp"

TEST_CASE("JSON round trip") {
    const IntervalSystem sys(SplineParams::make(2, 2), {1, 0});
    const auto doc = system_to_json(sys, 1, sys.j0());
    CHECK(doc["sigma"][0] == 1);
    CHECK(doc["levels"][0]["nabla_size"] == sys.delta_size(sys.j0()));
    const auto& elems = doc["elements"];
    CHECK(elems.size() == sys.indices(1, sys.j0()).size());
    const auto back = piecewise_from_json(nlohmann::json::parse(elems[3].dump()));
    const auto idx = elems[3]["index"];
    const auto orig = sys.element({idx[0], idx[1], idx[2]});
    for (double x : {0.0, 0.1, 0.37, 1.0}) CHECK(back(x) == (*orig)(x));
}
