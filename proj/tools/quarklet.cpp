#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "quarklet/errors.hpp"
#include "quarklet/experiments.hpp"

using namespace quarklet;

namespace {

struct Flags {
    std::optional<int> m, m_tilde, j0, j_min, j_max, p_max, rank;
    std::optional<std::string> sigma, sigma1, sigma2, fn, mode;
    std::optional<std::vector<double>> s, r;
    std::optional<double> delta1, delta2;
    std::optional<std::uint64_t> seed;
    std::string config_path, out, svg;
    bool elements = false;
    bool corrupt_filter = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--m", f.m, "spline order m");
    cmd->add_option("--mtilde", f.m_tilde, "dual order m_tilde");
    cmd->add_option("--j0", f.j0, "coarsest level override");
    cmd->add_option("--sigma", f.sigma, "boundary condition L,R (1D)");
    cmd->add_option("--sigma1", f.sigma1, "boundary condition L,R for direction 1");
    cmd->add_option("--sigma2", f.sigma2, "boundary condition L,R for direction 2");
    cmd->add_option("--s", f.s, "smoothness list")->delimiter(',');
    cmd->add_option("--r", f.r, "integrability list")->delimiter(',');
    cmd->add_option("--delta1", f.delta1, "degree weight exponent, direction 1");
    cmd->add_option("--delta2", f.delta2, "degree weight exponent, direction 2");
    cmd->add_option("--jmin", f.j_min, "first truncation level");
    cmd->add_option("--jmax", f.j_max, "last truncation level");
    cmd->add_option("--pmax", f.p_max, "largest polynomial degree");
    cmd->add_option("--rank", f.rank, "rank R of the bivariate representation");
    cmd->add_option("--fn", f.fn, "test function name");
    cmd->add_option("--mode", f.mode, "strict or exploratory");
    cmd->add_option("--seed", f.seed, "seed for randomized checks");
    cmd->add_option("--config", f.config_path, "JSON config file; flags override it");
    cmd->add_option("--out", f.out, "output path (stdout when absent)");
}

ExperimentConfig make_config(const Flags& f) {
    ExperimentConfig c;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw InvalidParameter("cannot open config '" + f.config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidParameter(std::string("bad config JSON: ") + e.what());
        }
        c = ExperimentConfig::from_json(j);
    }
    if (f.m) c.m = *f.m;
    if (f.m_tilde) c.m_tilde = *f.m_tilde;
    if (f.j0) c.j0 = *f.j0;
    if (f.sigma) c.sigma = parse_sigma(*f.sigma);
    if (f.sigma1) c.sigma1 = parse_sigma(*f.sigma1);
    if (f.sigma2) c.sigma2 = parse_sigma(*f.sigma2);
    if (f.s) c.s = *f.s;
    if (f.r) c.r = *f.r;
    if (f.delta1) c.delta1 = *f.delta1;
    if (f.delta2) c.delta2 = *f.delta2;
    if (f.j_min) c.j_min = *f.j_min;
    if (f.j_max) c.j_max = *f.j_max;
    if (f.p_max) c.p_max = *f.p_max;
    if (f.rank) c.rank = *f.rank;
    if (f.fn) c.fn = *f.fn;
    if (f.mode) c.mode = parse_mode(*f.mode);
    if (f.seed) c.seed = *f.seed;
    c.params();
    return c;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidParameter("cannot write '" + path + "'");
    out << text;
}

template <class Rows>
void emit_rows(const Flags& f, const Rows& rows, const ExperimentConfig& c) {
    std::ostringstream csv;
    write_csv(csv, rows, c);
    emit(f.out, csv.str());
    if (!f.svg.empty()) {
        std::ostringstream svg;
        write_svg(svg, rows);
        emit(f.svg, svg.str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-adapted quarklet frames: construction, verification and norm experiments"};
    app.require_subcommand(1);
    Flags f;
    auto* build = app.add_subcommand("build", "construct an interval system and print its summary as JSON");
    auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 1 on failure");
    auto* norms1d = app.add_subcommand("norms1d", "univariate norm experiment (CSV)");
    auto* norms2d = app.add_subcommand("norms2d", "bivariate norm experiment (CSV)");
    for (auto* cmd : {build, verify, norms1d, norms2d}) add_flags(cmd, f);
    build->add_flag("--elements", f.elements, "include serialized elements");
    verify->add_flag("--corrupt-filter", f.corrupt_filter, "perturb the wavelet mask (negative control)");
    for (auto* cmd : {norms1d, norms2d}) cmd->add_option("--svg", f.svg, "also write a ratio chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const ExperimentConfig c = make_config(f);
        if (build->parsed()) {
            emit(f.out, build_summary(c, f.elements).dump(2) + "\n");
            return 0;
        }
        if (verify->parsed()) {
            const VerifyReport report = run_verify(c, f.corrupt_filter);
            for (const auto& check : report.checks)
                std::printf("%s %-32s measured %.3e bound %.3e\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                            check.measured, check.bound);
            if (!f.out.empty()) emit(f.out, report.to_json().dump(2) + "\n");
            return report.pass() ? 0 : 1;
        }
        if (norms1d->parsed()) {
            emit_rows(f, run_norms_1d(c), c);
            return 0;
        }
        if (norms2d->parsed()) {
            c.validate(true);
            const std::string warning = check_dual_order(c.params(), c.mode);
            if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
            emit_rows(f, run_norms_2d(c), c);
            return 0;
        }
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IndexError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
