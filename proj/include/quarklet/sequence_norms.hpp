#pragma once

#include <map>

#include "quarklet/interval_system.hpp"

namespace quarklet {

/// Sparse coefficient sequence indexed by (p, j, k).
struct CoefficientField {
    std::map<QuarkletIndex, double> entries;

    bool empty() const { return entries.empty(); }
    double& operator[](const QuarkletIndex& idx) { return entries[idx]; }
    double get(const QuarkletIndex& idx) const {
        const auto it = entries.find(idx);
        return it == entries.end() ? 0.0 : it->second;
    }
    int max_level() const;
    int max_degree() const;
    CoefficientField scaled(double alpha) const;
};

struct NormParams {
    double s = 0.0;
    double r = 2.0;
    double delta = 1.5;
    int m = 3;

    /// Checks s >= 0, r > 1, delta > 1, m >= 2.
    static NormParams make(double s, double r, double delta, int m);
};

/// Throws unless 0 < s < m - 1.
void validate_smoothness(double s, int m);

/// Indicator of the dyadic cell [k 2^-j, (k+1) 2^-j) with k clamped to {0, ..., 2^j - 1}.
int chi_tilde(int j, int k, double x);

/// (p+1)^{sgn(s) 4m + 2 delta} 2^{2js} 2^j
double weight(int p, int j, const NormParams& params);

/// || [sum weight |c|^2 chi~]^{1/2} | L_r(0,1) ||, evaluated exactly on the finest dyadic grid.
double seq_norm_1d(const CoefficientField& coeffs, const NormParams& params);

}  // namespace quarklet
