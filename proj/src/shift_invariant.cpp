#include "quarklet/shift_invariant.hpp"

#include <cmath>
#include <limits>

#include "quarklet/errors.hpp"

namespace quarklet {

namespace {

Mask convolve(const Mask& a, const Mask& b) {
    Mask out;
    out.offset = a.offset + b.offset;
    out.taps.assign(a.taps.size() + b.taps.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.taps.size(); ++i)
        for (std::size_t k = 0; k < b.taps.size(); ++k) out.taps[i + k] += a.taps[i] * b.taps[k];
    return out;
}

Mask add(const Mask& a, const Mask& b) {
    if (a.taps.empty()) return b;
    const int lo = std::min(a.first(), b.first());
    const int hi = std::max(a.last(), b.last());
    Mask out{lo, std::vector<double>(hi - lo + 1, 0.0)};
    for (int k = lo; k <= hi; ++k) out.taps[k - lo] = a[k] + b[k];
    return out;
}

Mask scaled(Mask a, double s) {
    for (double& v : a.taps) v *= s;
    return a;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Mask alternating_flip(const Mask& a) {
    Mask out;
    out.offset = 1 - a.last();
    out.taps.resize(a.taps.size());
    for (int k = out.first(); k <= out.last(); ++k) out.taps[k - out.offset] = ((k % 2 == 0) ? 1.0 : -1.0) * a[1 - k];
    return out;
}

Mask subdivide(const Mask& c, const Mask& a) {
    Mask out;
    out.offset = 2 * c.first() + a.first();
    out.taps.assign(2 * (c.taps.size() - 1) + a.taps.size(), 0.0);
    for (int k = c.first(); k <= c.last(); ++k) {
        const double ck = c[k];
        if (ck == 0.0) continue;
        for (int t = a.first(); t <= a.last(); ++t) out.taps[2 * k + t - out.offset] += a[t] * ck;
    }
    return out;
}

double sup_abs(const Mask& c) {
    double s = 0.0;
    for (double v : c.taps) s = std::max(s, std::abs(v));
    return s;
}

// Subdivision is run from `start`; sup growth of the iterates beyond what any bounded
// or mildly singular limit would produce is reported as divergence.
SampledFunction run_subdivision(Mask c, const Mask& a, int steps, int level) {
    if (level < 1) throw InvalidParameter("cascade level must satisfy L >= 1");
    if (a.trimmed().taps.size() < 2) throw InvalidParameter("cascade mask needs at least two nonzero taps");
    if (std::abs(a.sum() - 2.0) > 1e-10) throw InvalidParameter("cascade mask must sum to 2");
    for (int n = 1; n <= steps; ++n) {
        c = subdivide(c, a);
        const double s = sup_abs(c);
        if (!std::isfinite(s) || s > std::pow(2.0, 0.5 * n) * 1e3)
            throw DivergenceError("cascade iteration diverges at step " + std::to_string(n));
    }
    double moment = 0.0;
    for (int k = a.first(); k <= a.last(); ++k) moment += k * a[k];
    return SampledFunction{level, c.offset, 0.5 * moment, std::move(c.taps)};
}

}  // namespace

double Mask::sum() const {
    double s = 0.0;
    for (double v : taps) s += v;
    return s;
}

Mask Mask::trimmed() const {
    std::size_t lo = 0;
    std::size_t hi = taps.size();
    while (lo < hi && taps[lo] == 0.0) ++lo;
    while (hi > lo && taps[hi - 1] == 0.0) --hi;
    return Mask{offset + static_cast<int>(lo), std::vector<double>(taps.begin() + lo, taps.begin() + hi)};
}

double SampledFunction::x(int n) const { return std::ldexp(first_index + n + centre, -level); }

double biorthogonality_defect(const Mask& primal, const Mask& dual) {
    double worst = 0.0;
    const int span = static_cast<int>(primal.taps.size() + dual.taps.size());
    for (int n = -span; n <= span; ++n) {
        double acc = 0.0;
        for (int k = primal.first(); k <= primal.last(); ++k) acc += primal[k] * dual[k + 2 * n];
        worst = std::max(worst, std::abs(acc - (n == 0 ? 2.0 : 0.0)));
    }
    return worst;
}

FilterPair cdf_filters(const SplineParams& params) {
    const auto checked = SplineParams::make(params.m, params.m_tilde, params.j0);
    const int m = checked.m;
    const int mt = checked.m_tilde;

    FilterPair f;
    f.primal.offset = -checked.floor_half();
    for (int k = 0; k <= m; ++k) f.primal.taps.push_back(std::ldexp(binomial(m, k), 1 - m));

    // 2 ((1+z)/2)^mt z^{-floor(mt/2)} sum_{n<l} C(l-1+n, n) ((2 - z - 1/z)/4)^n
    const int ell = (m + mt) / 2;
    Mask half{0, {0.5, 0.5}};
    Mask factor{0, {1.0}};
    for (int i = 0; i < mt; ++i) factor = convolve(factor, half);
    factor.offset -= mt / 2;
    const Mask sine{-1, {-0.25, 0.5, -0.25}};
    Mask series;
    Mask power{0, {1.0}};
    for (int n = 0; n < ell; ++n) {
        series = add(series, scaled(power, binomial(ell - 1 + n, n)));
        power = convolve(power, sine);
    }
    Mask dual = scaled(convolve(factor, series), 2.0);

    // The centring of the dual is fixed by requiring discrete biorthogonality.
    const int width = static_cast<int>(dual.taps.size());
    bool found = false;
    for (int shift = 0; shift <= width && !found; ++shift) {
        for (int sgn : {1, -1}) {
            Mask trial = dual;
            trial.offset += sgn * shift;
            if (biorthogonality_defect(f.primal, trial) < 1e-12) {
                dual = trial;
                found = true;
                break;
            }
        }
    }
    if (!found) throw ConstructionError("no biorthogonal alignment of the dual mask found");
    f.dual = dual.trimmed();
    f.wavelet = alternating_flip(f.dual);
    f.dual_wavelet = alternating_flip(f.primal);
    return f;
}

PiecewisePolynomial shift_quarklet(const SplineParams& params, int p) {
    return shift_quarklet(params, cdf_filters(params), p);
}

PiecewisePolynomial shift_quarklet(const SplineParams& params, const FilterPair& filters, int p) {
    const auto quark = cardinal_quark(params, p);
    std::vector<double> weights;
    std::vector<PiecewisePolynomial> terms;
    for (int k = filters.wavelet.first(); k <= filters.wavelet.last(); ++k) {
        if (filters.wavelet[k] == 0.0) continue;
        weights.push_back(filters.wavelet[k]);
        terms.push_back(pp_scale_shift(quark, 1, k));
    }
    return pp_linear_combination(weights, terms);
}

PiecewisePolynomial scaled_element(const PiecewisePolynomial& f, int j, int k) {
    if (j < -1) throw InvalidParameter("level must satisfy j >= -1");
    if (j == -1) return pp_scale_shift(f, 0, k);
    return pp_scale_shift(f, j, k, std::ldexp(1.0, j / 2) * ((j % 2) ? std::sqrt(2.0) : 1.0));
}

SampledFunction cascade(const Mask& mask, int level) {
    return run_subdivision(Mask{0, {1.0}}, mask, level, level);
}

SampledFunction cascade_wavelet(const Mask& wavelet, const Mask& scaling, int level) {
    if (level < 1) throw InvalidParameter("cascade level must satisfy L >= 1");
    return run_subdivision(wavelet.trimmed(), scaling, level - 1, level);
}

double sampled_inner_product(const std::function<double(double)>& g, const SampledFunction& s) {
    double acc = 0.0;
    for (std::size_t n = 0; n < s.samples.size(); ++n) {
        if (s.samples[n] != 0.0) acc += g(s.x(static_cast<int>(n))) * s.samples[n];
    }
    return std::ldexp(acc, -s.level);
}

}  // namespace quarklet
