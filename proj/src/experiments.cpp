#include "quarklet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "quarklet/errors.hpp"
#include "quarklet/parallel.hpp"
#include "quarklet/serialization.hpp"
#include "quarklet/spline_algebra.hpp"

namespace quarklet {

SplineParams ExperimentConfig::params() const { return SplineParams::make(m, m_tilde, j0); }

int ExperimentConfig::first_level() const { return j_min > 0 ? j_min : params().j0 + 1; }

int ExperimentConfig::last_level(bool two_d) const {
    if (j_max > 0) return j_max;
    return params().j0 + (two_d ? 3 : 4);
}

void ExperimentConfig::validate(bool two_d) const {
    const SplineParams p = params();
    if (s.empty() || r.empty()) throw InvalidParameter("s and r grids must be non-empty");
    for (double sv : s) validate_smoothness(sv, p.m);
    for (double rv : r) NormParams::make(0.0, rv, delta1, p.m);
    if (two_d) NormParams::make(0.0, 2.0, delta2, p.m);
    if (first_level() < p.j0) throw InvalidParameter("J range violates j_min >= j0 = " + std::to_string(p.j0));
    if (last_level(two_d) < first_level()) throw InvalidParameter("J range violates j_min <= j_max");
    if (p_max < 0) throw InvalidParameter("p_max must be >= 0");
    if (rank < 1) throw InvalidParameter("rank R must be >= 1");
    for (const auto& bc : {sigma, sigma1, sigma2})
        if (bc.sigma_l < 0 || bc.sigma_r < 0) throw InvalidParameter("boundary orders must be >= 0");
    const TestFunction f = lookup_function(fn);
    if (f.dim != (two_d ? 2 : 1))
        throw InvalidParameter("function '" + fn + "' has dimension " + std::to_string(f.dim));
    if (two_d) check_dual_order(p, mode);
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"m", m},
            {"m_tilde", m_tilde},
            {"j0", j0},
            {"sigma", {sigma.sigma_l, sigma.sigma_r}},
            {"sigma1", {sigma1.sigma_l, sigma1.sigma_r}},
            {"sigma2", {sigma2.sigma_l, sigma2.sigma_r}},
            {"s", s},
            {"r", r},
            {"delta1", delta1},
            {"delta2", delta2},
            {"j_min", j_min},
            {"j_max", j_max},
            {"p_max", p_max},
            {"rank", rank},
            {"fn", fn},
            {"mode", mode_name(mode)},
            {"seed", seed}};
}

namespace {

BoundaryCondition sigma_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw InvalidParameter("boundary condition must be [left, right]");
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        c.m = j.value("m", c.m);
        c.m_tilde = j.value("m_tilde", c.m_tilde);
        c.j0 = j.value("j0", c.j0);
        if (j.contains("sigma")) c.sigma = sigma_from_json(j["sigma"]);
        if (j.contains("sigma1")) c.sigma1 = sigma_from_json(j["sigma1"]);
        if (j.contains("sigma2")) c.sigma2 = sigma_from_json(j["sigma2"]);
        if (j.contains("s")) c.s = j["s"].get<std::vector<double>>();
        if (j.contains("r")) c.r = j["r"].get<std::vector<double>>();
        c.delta1 = j.value("delta1", c.delta1);
        c.delta2 = j.value("delta2", c.delta2);
        c.j_min = j.value("j_min", c.j_min);
        c.j_max = j.value("j_max", c.j_max);
        c.p_max = j.value("p_max", c.p_max);
        c.rank = j.value("rank", c.rank);
        c.fn = j.value("fn", c.fn);
        if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("bad config: ") + e.what());
    }
    return c;
}

std::uint64_t ExperimentConfig::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : to_json().dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string mode_name(Mode mode) { return mode == Mode::strict ? "strict" : "exploratory"; }

Mode parse_mode(const std::string& name) {
    if (name == "strict") return Mode::strict;
    if (name == "exploratory") return Mode::exploratory;
    throw InvalidParameter("mode must be strict or exploratory, got '" + name + "'");
}

BoundaryCondition parse_sigma(const std::string& text) {
    BoundaryCondition bc;
    char comma = 0;
    std::istringstream in(text);
    if (!(in >> bc.sigma_l >> comma >> bc.sigma_r) || comma != ',' || !(in >> std::ws).eof())
        throw InvalidParameter("boundary condition must look like L,R, got '" + text + "'");
    return bc;
}

nlohmann::json build_summary(const ExperimentConfig& config, bool with_elements) {
    const SplineParams p = config.params();
    const IntervalSystem sys(p, config.sigma);
    const int j_max = config.j_max > 0 ? config.j_max : p.j0;
    nlohmann::json out = system_to_json(sys, config.p_max, j_max, with_elements);
    bool formula_ok = true;
    for (auto& level : out["levels"]) {
        const int j = level["j"].get<int>() + 1;
        const int expected = (1 << j) + p.m - 1 - config.sigma.sgn_l() - config.sigma.sgn_r();
        level["delta_expected"] = expected;
        formula_ok = formula_ok && level["delta_size"].get<int>() == expected;
    }
    out["delta_formula_ok"] = formula_ok;
    out["element_count"] = sys.indices(config.p_max, j_max).size();
    return out;
}

bool VerifyReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks)
        list.push_back({{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
    return {{"checks", list}, {"pass", pass()}};
}

VerifyReport run_verify(const ExperimentConfig& config, bool corrupt_filter) {
    const SplineParams p = config.params();
    FilterPair filters = cdf_filters(p);
    if (corrupt_filter) filters.wavelet.taps.front() += 0.05;
    const IntervalSystem sys(p, config.sigma, filters);
    const int pv = std::max(2, config.p_max);
    VerifyReport report;
    auto add = [&](std::string name, double measured, double bound, bool at_least = false) {
        const bool ok = std::isfinite(measured) && (at_least ? measured >= bound : measured <= bound);
        report.checks.push_back({std::move(name), measured, bound, ok});
    };

    {
        const auto n = cardinal_bspline(p.m);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = i / 999.0;
            double sum = 0.0;
            for (int k = -p.m; k <= 1; ++k) sum += n(x - k);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        add("partition_of_unity_cardinal", worst, 1e-12);
    }
    {
        double pu = 0.0, refl = 0.0;
        for (int j = p.j0; j <= p.j0 + 2; ++j) {
            const int n = 1 << j;
            std::vector<PiecewisePolynomial> b;
            for (int k = -p.m + 1; k <= n - 1; ++k) b.push_back(schoenberg_bspline(p, j, k));
            for (int i = 0; i <= 200; ++i) {
                const double x = i / 200.0;
                double sum = 0.0;
                for (int k = -p.m + 1; k <= n - 1; ++k) {
                    sum += b[k + p.m - 1](x);
                    refl = std::max(refl, std::abs(b[k + p.m - 1](x) - b[n - p.m - k + p.m - 1](1.0 - x)));
                }
                pu = std::max(pu, std::abs(sum - 1.0));
            }
        }
        add("partition_of_unity_schoenberg", pu, 1e-12);
        add("schoenberg_reflection", refl, 1e-12);
    }
    {
        int mismatches = 0;
        for (int j = p.j0; j <= p.j0 + 4; ++j)
            if (sys.delta_size(j) != (1 << j) + p.m - 1 - config.sigma.sgn_l() - config.sigma.sgn_r()) ++mismatches;
        add("index_cardinality_mismatches", mismatches, 0);
    }
    add("filter_biorthogonality_defect", biorthogonality_defect(filters.primal, filters.dual), 1e-12);
    {
        double worst = 0.0, outside = 0.0, endpoint = 0.0;
        for (int q = 0; q <= pv; ++q) {
            for (int j = p.j0; j <= p.j0 + 1; ++j) {
                for (int k = 0; k < (1 << j); ++k) {
                    const auto e = sys.element({q, j, k});
                    const double norm = std::sqrt(pp_inner_product(*e, *e));
                    for (int i = 0; i < p.m_tilde; ++i) worst = std::max(worst, std::abs(pp_moment(*e, i)) / norm);
                    if (e->support_begin() < Dyadic(0) || e->support_end() > Dyadic(1)) outside += 1;
                    if (config.sigma.sigma_l > 0) endpoint = std::max(endpoint, std::abs((*e)(0.0)) / norm);
                    if (config.sigma.sigma_r > 0) endpoint = std::max(endpoint, std::abs((*e)(1.0)) / norm);
                }
            }
        }
        add("vanishing_moments_relative", worst, 1e-10);
        add("elements_outside_unit_interval", outside, 0);
        add("boundary_values_relative", endpoint, 1e-12);
    }
    {
        int min_dim = std::numeric_limits<int>::max();
        for (int q = 0; q <= pv; ++q)
            for (int k = 0; k <= p.m - 2; ++k)
                for (Side side : {Side::left, Side::right})
                    min_dim = std::min(min_dim, kernel_dimension(sys.boundary_moment_matrix(q, p.j0, side, k)));
        if (min_dim == std::numeric_limits<int>::max()) min_dim = 1;
        add("moment_matrix_kernel_dimension", min_dim, 1, true);
    }
    return report;
}

namespace {

struct GridPoint {
    double s;
    double r;
};

std::vector<GridPoint> grid(const ExperimentConfig& c) {
    std::vector<GridPoint> g;
    for (double s : c.s)
        for (double r : c.r) g.push_back({s, r});
    std::sort(g.begin(), g.end(), [](const GridPoint& a, const GridPoint& b) {
        return a.s != b.s ? a.s < b.s : a.r < b.r;
    });
    g.erase(std::unique(g.begin(), g.end(), [](const GridPoint& a, const GridPoint& b) {
                return a.s == b.s && a.r == b.r;
            }),
            g.end());
    return g;
}

std::string clean(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::vector<Row1D> run_norms_1d(const ExperimentConfig& config) {
    config.validate(false);
    const SplineParams p = config.params();
    const IntervalSystem sys(p, config.sigma);
    const TestFunction fn = lookup_function(config.fn);
    const bool bc_ok = fn.zero_left[0] >= config.sigma.sigma_l && fn.zero_right[0] >= config.sigma.sigma_r;
    const auto points = grid(config);
    const int first = config.first_level(), last = config.last_level(false);
    const int levels = last - first + 1;

    std::vector<double> oracle(points.size());
    std::vector<std::string> point_error(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        try {
            validate_boundary_condition(config.sigma, points[i].s, points[i].r, 1);
            oracle[i] = hsr_norm_oracle(fn.f1, OracleParams::defaults(1, points[i].s, points[i].r));
        } catch (const Error& e) {
            point_error[i] = e.what();
        }
    });

    std::vector<Row1D> rows(points.size() * levels);
    parallel_for(rows.size(), [&](std::size_t t) {
        const std::size_t i = t / levels;
        Row1D& row = rows[t];
        row.J = first + static_cast<int>(t % levels);
        row.p_max = config.p_max;
        row.s = points[i].s;
        row.r = points[i].r;
        row.bc_ok = bc_ok;
        row.oracle = oracle[i];
        if (!point_error[i].empty()) {
            row.error = point_error[i];
            return;
        }
        try {
            row.estimate = quarklet_norm_estimate(sys, fn.f1, {row.J, 0}, NormParams::make(row.s, row.r, config.delta1, p.m));
            row.ratio = row.estimate / row.oracle;
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return rows;
}

std::vector<Row2D> run_norms_2d(const ExperimentConfig& config) {
    config.validate(true);
    const SplineParams p = config.params();
    const IntervalSystem sys1(p, config.sigma1), sys2(p, config.sigma2);
    const TestFunction fn = lookup_function(config.fn);
    const auto points = grid(config);
    const int first = config.first_level(), last = config.last_level(true);
    const int levels = last - first + 1;

    std::vector<double> oracle(points.size());
    std::vector<std::string> point_error(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        try {
            validate_boundary_condition(config.sigma1, points[i].s, points[i].r, 2);
            validate_boundary_condition(config.sigma2, points[i].s, points[i].r, 2);
            oracle[i] = hsr_norm_oracle(fn.f2, OracleParams::defaults(2, points[i].s, points[i].r));
        } catch (const Error& e) {
            point_error[i] = e.what();
        }
    });

    std::vector<TensorAnalysis> analyses(levels);
    for (int l = 0; l < levels; ++l) {
        const Projector p1(sys1, first + l), p2(sys2, first + l);
        analyses[l] = tensor_analyze(p1, p2, fn.f2);
    }

    std::vector<std::vector<Row2D>> blocks(points.size() * levels);
    parallel_for(blocks.size(), [&](std::size_t t) {
        const std::size_t i = t / levels;
        const int l = static_cast<int>(t % levels);
        Row2D base;
        base.J = first + l;
        base.s = points[i].s;
        base.r = points[i].r;
        base.oracle = oracle[i];
        base.mode = config.mode;
        if (!point_error[i].empty()) {
            base.error = point_error[i];
            blocks[t].push_back(base);
            return;
        }
        try {
            const auto est = bivariate_norm_estimate(analyses[l], p, base.s, base.r, config.delta1, config.delta2,
                                                     config.rank);
            for (int R = 1; R <= config.rank; ++R) {
                Row2D row = base;
                row.R = R;
                row.estimate = est.by_rank[R - 1];
                row.ratio = row.estimate / row.oracle;
                blocks[t].push_back(row);
            }
        } catch (const Error& e) {
            base.error = e.what();
            blocks[t].push_back(base);
        }
    });
    std::vector<Row2D> rows;
    for (auto& b : blocks) rows.insert(rows.end(), b.begin(), b.end());
    return rows;
}

namespace {

void write_metadata(std::ostream& out, const ExperimentConfig& config) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
    out << "# quarklet " << kVersion << ", config " << hash << ", mode " << mode_name(config.mode) << ", seed "
        << config.seed << "\n";
}

// estimate, oracle and ratio; empty for rows that carry an error
template <class Row>
std::string values(const Row& row) {
    if (!row.error.empty()) return ",,";
    return num(row.estimate) + ',' + num(row.oracle) + ',' + num(row.ratio);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<Row1D>& rows, const ExperimentConfig& config) {
    write_metadata(out, config);
    out << "J,p_max,s,r,estimate,oracle,ratio,bc_ok,error\n";
    for (const auto& row : rows) {
        out << row.J << ',' << row.p_max << ',' << num(row.s) << ',' << num(row.r) << ',' << values(row) << ','
            << (row.bc_ok ? "true" : "false") << ',' << clean(row.error) << "\n";
    }
}

void write_csv(std::ostream& out, const std::vector<Row2D>& rows, const ExperimentConfig& config) {
    write_metadata(out, config);
    out << "J,R,s,r,estimate,oracle,ratio,mode,error\n";
    for (const auto& row : rows) {
        out << row.J << ',' << row.R << ',' << num(row.s) << ',' << num(row.r) << ',' << values(row) << ','
            << mode_name(row.mode) << ',' << clean(row.error) << "\n";
    }
}

namespace {

using Series = std::map<std::string, std::vector<std::pair<int, double>>>;

void svg_chart(std::ostream& out, const Series& series) {
    const double width = 640, height = 400, margin = 50;
    int jlo = std::numeric_limits<int>::max(), jhi = std::numeric_limits<int>::min();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [name, pts] : series)
        for (const auto& [j, v] : pts) {
            jlo = std::min(jlo, j);
            jhi = std::max(jhi, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (jlo > jhi) jlo = jhi = 0;
    if (!(lo <= hi)) lo = hi = 0.0;
    lo = std::min(lo, 0.0);
    if (hi <= lo) hi = lo + 1.0;
    const int jspan = std::max(1, jhi - jlo);
    auto px = [&](int j) { return margin + (width - 2 * margin) * (j - jlo) / jspan; };
    auto py = [&](double v) { return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\">J</text>\n";
    out << "<text x=\"5\" y=\"" << margin - 10 << "\">ratio (max " << num(hi) << ")</text>\n";
    for (int j = jlo; j <= jhi; ++j)
        out << "<text x=\"" << px(j) << "\" y=\"" << height - margin + 15 << "\">" << j << "</text>\n";
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    int c = 0;
    for (const auto& [name, pts] : series) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[c % 6] << "\" points=\"";
        for (const auto& [j, v] : pts) out << num(px(j)) << ',' << num(py(v)) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - margin + 5 << "\" y=\"" << margin + 15 * c << "\" fill=\"" << colors[c % 6]
            << "\">" << name << "</text>\n";
        ++c;
    }
    out << "</svg>\n";
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<Row1D>& rows) {
    Series series;
    for (const auto& row : rows)
        if (row.error.empty()) series["s=" + num(row.s) + " r=" + num(row.r)].push_back({row.J, row.ratio});
    svg_chart(out, series);
}

void write_svg(std::ostream& out, const std::vector<Row2D>& rows) {
    Series series;
    for (const auto& row : rows)
        if (row.error.empty())
            series["s=" + num(row.s) + " r=" + num(row.r) + " R=" + std::to_string(row.R)].push_back({row.J, row.ratio});
    svg_chart(out, series);
}

}  // namespace quarklet
