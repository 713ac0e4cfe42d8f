#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "quarklet/tensor.hpp"

namespace quarklet {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
    int m = 3;
    int m_tilde = 3;
    int j0 = 0;  // 0 selects the default
    BoundaryCondition sigma{0, 0};
    BoundaryCondition sigma1{0, 0};
    BoundaryCondition sigma2{0, 0};
    std::vector<double> s{0.5};
    std::vector<double> r{2.0};
    double delta1 = 1.5;
    double delta2 = 1.5;
    int j_min = 0;  // 0 selects j0 + 1
    int j_max = 0;  // 0 selects j0 + 4 (1D) or j0 + 3 (2D)
    int p_max = 0;
    int rank = 2;
    std::string fn = "sinpi";
    Mode mode = Mode::exploratory;
    std::uint64_t seed = 0;

    SplineParams params() const;
    int first_level() const;
    int last_level(bool two_d) const;

    /// Throws InvalidParameter naming the violated constraint.
    void validate(bool two_d) const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    /// FNV-1a of the canonical JSON dump.
    std::uint64_t hash() const;
};

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& name);
BoundaryCondition parse_sigma(const std::string& text);

/// Summary of the interval system (index set sizes, optional serialized elements).
nlohmann::json build_summary(const ExperimentConfig& config, bool with_elements);

struct Check {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<Check> checks;
    bool pass() const;
    nlohmann::json to_json() const;
};

/// Invariant suite of one system; corrupt_filter perturbs the wavelet mask before construction.
VerifyReport run_verify(const ExperimentConfig& config, bool corrupt_filter = false);

struct Row1D {
    int J = 0;
    int p_max = 0;
    double s = 0.0;
    double r = 0.0;
    double estimate = 0.0;
    double oracle = 0.0;
    double ratio = 0.0;
    bool bc_ok = false;
    std::string error;
};

struct Row2D {
    int J = 0;
    int R = 0;
    double s = 0.0;
    double r = 0.0;
    double estimate = 0.0;
    double oracle = 0.0;
    double ratio = 0.0;
    Mode mode = Mode::exploratory;
    std::string error;
};

/// Rows sorted by (s, r, J).
std::vector<Row1D> run_norms_1d(const ExperimentConfig& config);
/// Rows sorted by (s, r, J, R), one per rank 1..config.rank.
std::vector<Row2D> run_norms_2d(const ExperimentConfig& config);

void write_csv(std::ostream& out, const std::vector<Row1D>& rows, const ExperimentConfig& config);
void write_csv(std::ostream& out, const std::vector<Row2D>& rows, const ExperimentConfig& config);

/// Ratio against J, one polyline per (s, r) series.
void write_svg(std::ostream& out, const std::vector<Row1D>& rows);
void write_svg(std::ostream& out, const std::vector<Row2D>& rows);

}  // namespace quarklet
