#include "quarklet/smoothness_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "quarklet/errors.hpp"
#include "quarklet/parallel.hpp"

namespace quarklet {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool inside(double x) { return x >= -1e-12 && x <= 1.0 + 1e-12; }

// h-range keeping x + tau h inside [0,1] for tau in [0, N], intersected with |h| < t.
std::pair<double, double> h_range(double x, int N, double t) {
    return {std::max(-t, -x / N), std::min(t, (1.0 - x) / N)};
}

double lr_of_samples(const std::vector<double>& values, double r, double cell) {
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v), r);
    return std::pow(acc * cell, 1.0 / r);
}

// Applies the (.)^{2/v} aggregation of an h-integral, given sum or max of |Delta|^v.
double aggregate(double integral_or_max, double t_power, double v) {
    if (std::isinf(v)) return integral_or_max * integral_or_max;
    return std::pow(integral_or_max / t_power, 2.0 / v);
}

}  // namespace

OracleParams OracleParams::defaults(int d, double s, double r) {
    OracleParams p;
    p.s = s;
    p.r = r;
    p.d = d;
    if (d == 2) {
        p.grid_level = 6;
        p.t_levels = 12;
        p.t_nodes = 1;
        p.h_nodes = 12;
    }
    return p;
}

int OracleParams::order() const { return N > 0 ? N : static_cast<int>(std::floor(s)) + 1; }

void OracleParams::validate() const {
    if (d != 1 && d != 2) throw InvalidParameter("oracle dimension must be 1 or 2");
    if (!(r > 0.0)) throw InvalidParameter("oracle needs r > 0");
    if (!(v >= 1.0)) throw InvalidParameter("oracle needs 1 <= v <= infinity");
    const double lower = d * std::max({0.0, 1.0 / r - 1.0 / v, 0.5 - 1.0 / v});
    if (!(s > lower) || !(s < order())) {
        std::ostringstream msg;
        msg << "oracle requires d*max(0, 1/r - 1/v, 1/2 - 1/v) < s < N (lower bound " << lower << ", s=" << s
            << ", N=" << order() << ")";
        throw InvalidParameter(msg.str());
    }
    if (grid_level < 1 || t_levels < 1 || t_nodes < 1 || h_nodes < 1) {
        throw InvalidParameter("oracle resolutions must be positive");
    }
}

double difference(const Function1D& f, int N, double x, double h) {
    if (!inside(x) || !inside(x + N * h)) throw DomainError("difference leaves the unit interval");
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) acc += (((N - n) % 2) ? -1.0 : 1.0) * binomial(N, n) * f(x + n * h);
    return acc;
}

double difference(const Function2D& f, int N, double x, double y, double hx, double hy) {
    if (!inside(x) || !inside(y) || !inside(x + N * hx) || !inside(y + N * hy)) {
        throw DomainError("difference leaves the unit square");
    }
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) acc += (((N - n) % 2) ? -1.0 : 1.0) * binomial(N, n) * f(x + n * hx, y + n * hy);
    return acc;
}

double hsr_norm_oracle(const Function1D& f, const OracleParams& params) {
    auto p = params;
    p.d = 1;
    p.validate();
    const int N = p.order();
    const int n = 1 << p.grid_level;
    std::vector<double> values(n), square(n);
    parallel_for(n, [&](std::size_t i) {
        const double x = (i + 0.5) / n;
        values[i] = f(x);
        double acc = 0.0;
        for (int shell = 0; shell < p.t_levels; ++shell) {
            for (int q = 0; q < p.t_nodes; ++q) {
                const double t = std::pow(2.0, -shell - (q + 0.5) / p.t_nodes);
                const auto [a, b] = h_range(x, N, t);
                if (b <= a) continue;
                const double step = (b - a) / p.h_nodes;
                double inner = 0.0;
                for (int l = 0; l < p.h_nodes; ++l) {
                    const double d = std::abs(difference(f, N, x, a + (l + 0.5) * step));
                    inner = std::isinf(p.v) ? std::max(inner, d) : inner + std::pow(d, p.v) * step;
                }
                acc += std::numbers::ln2 / p.t_nodes * std::pow(t, -2.0 * p.s) * aggregate(inner, t, p.v);
            }
        }
        square[i] = std::sqrt(acc);
    });
    return lr_of_samples(values, p.r, 1.0 / n) + lr_of_samples(square, p.r, 1.0 / n);
}

double hsr_norm_oracle(const Function2D& f, const OracleParams& params) {
    auto p = params;
    p.d = 2;
    p.validate();
    const int N = p.order();
    const int n = 1 << p.grid_level;
    std::vector<double> values(n * n), square(n * n);
    parallel_for(static_cast<std::size_t>(n) * n, [&](std::size_t idx) {
        const double x = (idx / n + 0.5) / n;
        const double y = (idx % n + 0.5) / n;
        values[idx] = f(x, y);
        double acc = 0.0;
        for (int shell = 0; shell < p.t_levels; ++shell) {
            for (int q = 0; q < p.t_nodes; ++q) {
                const double t = std::pow(2.0, -shell - (q + 0.5) / p.t_nodes);
                const auto [ax, bx] = h_range(x, N, t);
                const auto [ay, by] = h_range(y, N, t);
                if (bx <= ax || by <= ay) continue;
                const double sx = (bx - ax) / p.h_nodes;
                const double sy = (by - ay) / p.h_nodes;
                double inner = 0.0;
                for (int u = 0; u < p.h_nodes; ++u) {
                    const double hx = ax + (u + 0.5) * sx;
                    for (int w = 0; w < p.h_nodes; ++w) {
                        const double hy = ay + (w + 0.5) * sy;
                        if (hx * hx + hy * hy >= t * t) continue;
                        const double d = std::abs(difference(f, N, x, y, hx, hy));
                        inner = std::isinf(p.v) ? std::max(inner, d) : inner + std::pow(d, p.v) * sx * sy;
                    }
                }
                acc += std::numbers::ln2 / p.t_nodes * std::pow(t, -2.0 * p.s) * aggregate(inner, t * t, p.v);
            }
        }
        square[idx] = std::sqrt(acc);
    });
    const double cell = 1.0 / (static_cast<double>(n) * n);
    return lr_of_samples(values, p.r, cell) + lr_of_samples(square, p.r, cell);
}

double lr_norm_oracle(const Function1D& f, double r, int grid_level) {
    const int n = 1 << grid_level;
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = f((i + 0.5) / n);
    return lr_of_samples(values, r, 1.0 / n);
}

double lr_norm_oracle(const Function2D& f, double r, int grid_level) {
    const int n = 1 << grid_level;
    std::vector<double> values(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) values[static_cast<std::size_t>(i) * n + k] = f((i + 0.5) / n, (k + 0.5) / n);
    return lr_of_samples(values, r, 1.0 / (static_cast<double>(n) * n));
}

namespace {

TestFunction lookup_1d(const std::string& name) {
    TestFunction t;
    t.name = name;
    t.dim = 1;
    if (name == "one") {
        t.f1 = [](double) { return 1.0; };
    } else if (name == "x") {
        t.f1 = [](double x) { return x; };
        t.zero_left[0] = 1;
    } else if (name == "sinpi") {
        t.f1 = [](double x) { return std::sin(std::numbers::pi * x); };
        t.zero_left[0] = t.zero_right[0] = 1;
    } else if (name == "bubble") {
        t.f1 = [](double x) { return x * (1.0 - x); };
        t.zero_left[0] = t.zero_right[0] = 1;
    } else if (name.rfind("xalpha:", 0) == 0) {
        double alpha = 0.0;
        try {
            alpha = std::stod(name.substr(7));
        } catch (const std::exception&) {
            throw InvalidParameter("cannot parse exponent in '" + name + "'");
        }
        if (!(alpha > 0.0)) throw InvalidParameter("xalpha needs alpha > 0");
        t.f1 = [alpha](double x) { return std::pow(x, alpha) * (1.0 - x); };
        t.zero_left[0] = static_cast<int>(std::ceil(alpha));
        t.zero_right[0] = 1;
    } else {
        throw InvalidParameter("unknown test function '" + name + "'");
    }
    return t;
}

}  // namespace

TestFunction lookup_function(const std::string& name) {
    std::size_t split = name.find('*');
    std::size_t width = 1;
    if (split == std::string::npos) {
        split = name.find("⊗");
        width = std::string("⊗").size();
    }
    if (split == std::string::npos) return lookup_1d(name);
    const auto a = lookup_1d(name.substr(0, split));
    const auto b = lookup_1d(name.substr(split + width));
    TestFunction t;
    t.name = name;
    t.dim = 2;
    t.f2 = [fa = a.f1, fb = b.f1](double x, double y) { return fa(x) * fb(y); };
    t.f1 = nullptr;
    t.zero_left[0] = a.zero_left[0];
    t.zero_right[0] = a.zero_right[0];
    t.zero_left[1] = b.zero_left[0];
    t.zero_right[1] = b.zero_right[0];
    return t;
}

}  // namespace quarklet
