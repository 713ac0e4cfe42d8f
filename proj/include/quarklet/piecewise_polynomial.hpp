#pragma once

#include <span>
#include <vector>

#include "quarklet/dyadic.hpp"

namespace quarklet {

/// Compactly supported piecewise polynomial with dyadic breakpoints.
///
/// Piece i lives on [b_i, b_{i+1}) and stores the coefficients of a polynomial
/// in the normalized local variable u = (x - b_i) / (b_{i+1} - b_i), ascending
/// powers. Outside [b_0, b_n] the function is zero. When closed_right() is set
/// the last piece also covers its right endpoint, which is what functions on the
/// closed interval [0, 1] need at x = 1.
class PiecewisePolynomial {
public:
    using Coefficients = std::vector<double>;

    PiecewisePolynomial() = default;
    PiecewisePolynomial(std::vector<Dyadic> breakpoints, std::vector<Coefficients> pieces,
                        bool closed_right = false);

    static PiecewisePolynomial constant(Dyadic a, Dyadic b, double value);

    const std::vector<Dyadic>& breakpoints() const { return breaks_; }
    const std::vector<Coefficients>& pieces() const { return pieces_; }
    std::size_t num_pieces() const { return pieces_.size(); }
    bool empty() const { return pieces_.empty(); }
    bool closed_right() const { return closed_right_; }
    void set_closed_right(bool v) { closed_right_ = v; }

    /// Support hull [first breakpoint, last breakpoint]; (0, 0) when empty.
    Dyadic support_begin() const { return empty() ? Dyadic{} : breaks_.front(); }
    Dyadic support_end() const { return empty() ? Dyadic{} : breaks_.back(); }

    /// Highest polynomial degree over all pieces.
    int degree_cap() const;

    double operator()(double x) const;

    /// Drops all-zero pieces at both ends.
    PiecewisePolynomial trimmed() const;

private:
    std::vector<Dyadic> breaks_;
    std::vector<double> breaks_d_;
    std::vector<Coefficients> pieces_;
    bool closed_right_ = false;
};

// Evaluation and calculus.
double pp_eval(const PiecewisePolynomial& f, double x);
PiecewisePolynomial pp_derivative(const PiecewisePolynomial& f);
/// Primitive vanishing at the left end of the support, defined up to the right end.
PiecewisePolynomial pp_antiderivative(const PiecewisePolynomial& f);

// Argument transforms.
/// normalization * f(2^j x - k).
PiecewisePolynomial pp_scale_shift(const PiecewisePolynomial& f, int j, Dyadic k,
                                   double normalization = 1.0);
/// f(1 - x).
PiecewisePolynomial pp_reflect(const PiecewisePolynomial& f);
/// f(x) * ((x - center) / scale)^p.
PiecewisePolynomial pp_monomial_multiply(const PiecewisePolynomial& f, int p, double center,
                                         double scale);
/// f restricted to [a, b] (zero elsewhere).
PiecewisePolynomial pp_restrict(const PiecewisePolynomial& f, Dyadic a, Dyadic b);

// Linear algebra.
PiecewisePolynomial pp_scale(const PiecewisePolynomial& f, double alpha);
PiecewisePolynomial pp_add(const PiecewisePolynomial& f, const PiecewisePolynomial& g);
PiecewisePolynomial pp_sub(const PiecewisePolynomial& f, const PiecewisePolynomial& g);
PiecewisePolynomial pp_linear_combination(std::span<const double> weights,
                                          std::span<const PiecewisePolynomial> terms);
/// Re-expands f on a finer breakpoint set containing f's breakpoints inside f's support.
PiecewisePolynomial pp_refine(const PiecewisePolynomial& f, std::span<const Dyadic> breakpoints);

// Integrals. All exact up to rounding except pp_lr_norm for non-even r.
double pp_integral(const PiecewisePolynomial& f);
double pp_inner_product(const PiecewisePolynomial& f, const PiecewisePolynomial& g);
/// Integral of x^q f(x).
double pp_moment(const PiecewisePolynomial& f, int q);
double pp_lr_norm(const PiecewisePolynomial& f, double r);
/// Sup norm, estimated by dense sampling of every piece.
double pp_sup_norm(const PiecewisePolynomial& f, int samples_per_piece = 64);

}  // namespace quarklet
