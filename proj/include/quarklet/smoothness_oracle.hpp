#pragma once

#include <functional>
#include <limits>
#include <string>

namespace quarklet {

using Function1D = std::function<double(double)>;
using Function2D = std::function<double(double, double)>;

/// Quadrature setup for the difference-based H^s_r norm on (0,1)^d.
struct OracleParams {
    double s = 0.5;
    double r = 2.0;
    double v = 1.0;  // infinity allowed
    int N = 0;       // 0 selects floor(s) + 1
    int d = 1;
    int grid_level = 10;  // outer midpoint grid 2^-grid_level per dimension
    int t_levels = 20;    // shells [2^-i-1, 2^-i], i < t_levels
    int t_nodes = 2;      // midpoint nodes per shell in log t
    int h_nodes = 32;     // midpoint nodes per dimension for the h integral

    static OracleParams defaults(int d, double s, double r);
    int order() const;
    /// Throws InvalidParameter naming the violated inequality.
    void validate() const;
};

/// N-th difference sum_n (-1)^{N-n} C(N,n) f(x + n h); throws DomainError when x + N h leaves [0,1].
double difference(const Function1D& f, int N, double x, double h);
double difference(const Function2D& f, int N, double x, double y, double hx, double hy);

double hsr_norm_oracle(const Function1D& f, const OracleParams& params);
double hsr_norm_oracle(const Function2D& f, const OracleParams& params);

/// Tensor midpoint rule for ||f | L_r((0,1)^d)||.
double lr_norm_oracle(const Function1D& f, double r, int grid_level = 12);
double lr_norm_oracle(const Function2D& f, double r, int grid_level = 9);

/// Named test functions with their vanishing orders at the endpoints.
struct TestFunction {
    std::string name;
    int dim = 1;
    Function1D f1;
    Function2D f2;
    // Number of derivatives (starting with the value) vanishing at 0 and 1, per direction.
    int zero_left[2] = {0, 0};
    int zero_right[2] = {0, 0};
};

/// "one", "x", "sinpi", "bubble", "xalpha:A"; bivariate products "F*G" (or "F⊗G").
TestFunction lookup_function(const std::string& name);

}  // namespace quarklet
