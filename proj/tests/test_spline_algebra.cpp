#include <cmath>
#include <random>

#include "doctest.h"
#include "quarklet/errors.hpp"
#include "quarklet/spline_algebra.hpp"

using namespace quarklet;

namespace {

// Truncated-power closed form of N_m; independent of the convolution construction.
double bspline_closed_form(int m, double x) {
    double acc = 0.0;
    double binom = 1.0;
    double fact = 1.0;
    for (int i = 2; i < m; ++i) fact *= i;
    for (int k = 0; k <= m; ++k) {
        const double t = x - k;
        if (t > 0.0) acc += ((k % 2) ? -1.0 : 1.0) * binom * std::pow(t, m - 1);
        binom = binom * (m - k) / (k + 1);
    }
    return acc / fact;
}

double max_coefficient(const PiecewisePolynomial& f) {
    double best = 0.0;
    for (const auto& c : f.pieces())
        for (double v : c) best = std::max(best, std::abs(v));
    return best;
}

}  // namespace

TEST_CASE("cardinal B-spline examples") {
    const auto n1 = cardinal_bspline(1);
    CHECK(n1(0.5) == 1.0);
    CHECK(n1(1.0) == 0.0);
    const auto n3 = cardinal_bspline(3);
    CHECK(n3.support_begin() == Dyadic(0));
    CHECK(n3.support_end() == Dyadic(3));
    CHECK(n3.degree_cap() == 2);
    CHECK(cardinal_bspline(2)(1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(cardinal_bspline(0), InvalidParameter);
}

TEST_CASE("convolution construction matches the truncated-power formula") {
    for (int m = 2; m <= 7; ++m) {
        const auto n = cardinal_bspline(m);
        for (int i = 0; i <= 400; ++i) {
            const double x = -0.5 + (m + 1.0) * i / 400.0;
            CHECK(n(x) == doctest::Approx(bspline_closed_form(m, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("partition of unity") {
    for (int m = 2; m <= 5; ++m) {
        const auto n = cardinal_bspline(m);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = i / 999.0;
            double s = 0.0;
            for (int k = -m; k <= 1; ++k) s += n(x - k);
            worst = std::max(worst, std::abs(s - 1.0));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("recursion and derivative identities") {
    std::mt19937 rng(3);
    for (int m = 2; m <= 6; ++m) {
        const auto nm = cardinal_bspline(m);
        const auto nm1 = cardinal_bspline(m - 1);
        std::uniform_real_distribution<double> dist(-0.5, m + 0.5);
        for (int i = 0; i < 500; ++i) {
            const double x = dist(rng);
            const double rec = x / (m - 1) * nm1(x) + (m - x) / (m - 1) * nm1(x - 1);
            CHECK(std::abs(nm(x) - rec) <= 1e-12);
        }
        if (m >= 3) {
            const auto rhs = pp_sub(nm1, pp_scale_shift(nm1, 0, 1));
            CHECK(max_coefficient(pp_sub(pp_derivative(nm), rhs)) <= 1e-12);
        }
    }
}

TEST_CASE("symmetrized generator and quarks") {
    const auto p2 = SplineParams::make(2, 2);
    const auto p3 = SplineParams::make(3, 3);
    const auto phi2 = symmetrized_generator(p2);
    CHECK(phi2.support_begin() == Dyadic(-1));
    CHECK(phi2.support_end() == Dyadic(1));
    CHECK(phi2(0.0) == doctest::Approx(1.0));
    const auto phi3 = symmetrized_generator(p3);
    CHECK(phi3.support_begin() == Dyadic(-1));
    CHECK(phi3.support_end() == Dyadic(2));

    const auto q0 = cardinal_quark(p3, 0);
    for (double x : {-0.7, 0.2, 1.4}) CHECK(q0(x) == phi3(x));
    CHECK(cardinal_quark(p2, 1)(1.0) == doctest::Approx(0.0));
    CHECK(cardinal_quark(p2, 2)(0.0) == doctest::Approx(0.0));
    CHECK(cardinal_quark(p3, 4).degree_cap() == 2 + 4);
}

TEST_CASE("spline parameter validation") {
    CHECK_THROWS_AS(SplineParams::make(2, 3), InvalidParameter);
    CHECK_THROWS_AS(SplineParams::make(3, 2), InvalidParameter);
    CHECK(SplineParams::make(3, 3).j0 == 4);
    CHECK(SplineParams::make(2, 2).j0 == 3);
    CHECK(SplineParams::make(3, 3, 5).j0 == 5);
}
