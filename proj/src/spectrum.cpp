#include "floerlab/spectrum.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace floerlab {

using mp50 = boost::multiprecision::cpp_bin_float_50;

std::vector<double> eigenvalues(const ModelSpec& spec, const ModeSet& modes) {
    std::vector<double> lam(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        double a2 = modes.abs2[i];
        double v = (spec.kind == ModelKind::wave) ? std::sqrt(a2 + double(spec.a)) : a2;
        if (v <= 0.0)
            throw ValidationError("lattice", "zero eigenvalue on the lattice (zero-mean rule violated)");
        lam[i] = v;
    }
    return lam;
}

namespace {

// Put eps into (-pi/T, pi/T], ties to +pi/T.
double clamp_representative(double eps, double half_width, double full_width) {
    if (eps > half_width) eps -= full_width;
    if (eps <= -half_width) eps += full_width;
    return eps;
}

template <class Real>
Real round_half_even(const Real& x) {
    Real fl = floor(x);
    Real frac = x - fl;
    if (frac > Real(0.5)) return fl + 1;
    if (frac < Real(0.5)) return fl;
    // tie: pick the even integer
    Real half = fl / 2;
    return (floor(half) == half) ? fl : fl + 1;
}

}  // namespace

double small_divisor(double lambda, double T) {
    // Compensated double-precision reduction: the multiple count is formed in
    // long double, the subtraction via fma against a split 2pi/T.
    const long double w = 2.0L * 3.141592653589793238462643383279503L / (long double)T;
    long double m = nearbyintl((long double)lambda / w);  // FE_TONEAREST = half-to-even
    long double eps = (long double)lambda - m * w;
    double half = (double)(w / 2.0L), full = (double)w;
    return clamp_representative((double)eps, half, full);
}

std::vector<double> small_divisors(const std::vector<double>& lambda, double T) {
    if (T <= 0.0) throw ValidationError("T", "period must be positive");
    std::vector<double> out(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) out[i] = small_divisor(lambda[i], T);
    return out;
}

std::vector<double> small_divisors_extended(const ModelSpec& spec, const ModeSet& modes) {
    const mp50 two_pi = 2 * boost::math::constants::pi<mp50>();
    const mp50 w = two_pi / mp50(spec.T);
    std::vector<double> out(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        mp50 lam = (spec.kind == ModelKind::wave)
                       ? sqrt(mp50(modes.abs2[i]) + mp50(spec.a))
                       : mp50(modes.abs2[i]);
        mp50 m = round_half_even(lam / w);
        mp50 eps = lam - m * w;
        double half = (double)(w / 2), full = (double)w;
        out[i] = clamp_representative((double)eps, half, full);
    }
    return out;
}

namespace {

// Least squares y = b0 + b1 x; returns (b0, b1, stderr_b1, r2).
struct LinFit {
    double b0 = 0, b1 = 0, se1 = 0, r2 = 0;
};

LinFit linfit(const std::vector<double>& x, const std::vector<double>& y) {
    LinFit f;
    std::size_t n = x.size();
    if (n < 2) return f;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0) return f;
    f.b1 = sxy / sxx;
    f.b0 = my - f.b1 * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.b0 + f.b1 * x[i]);
        ss_res += r * r;
    }
    f.r2 = (syy > 0) ? 1.0 - ss_res / syy : 1.0;
    if (n > 2) f.se1 = std::sqrt(ss_res / double(n - 2) / sxx);
    return f;
}

}  // namespace

SpectrumReport admissibility_profile(const ModelSpec& spec, const ModeSet& modes,
                                     const std::vector<double>& h_values) {
    SpectrumReport rep;
    rep.h_values = h_values;
    rep.theta = modes.theta;
    rep.lambda = eigenvalues(spec, modes);

    // Extended precision whenever the lattice reaches beyond |n| = 10^3.
    bool big = false;
    for (double a2 : modes.abs2)
        if (a2 > 1.0e6) big = true;
    rep.eps = big ? small_divisors_extended(spec, modes)
                  : small_divisors(rep.lambda, spec.T);

    // Dyadic shells theta in [2^j, 2^{j+1}).
    int jmax = 0;
    std::vector<int> shell_of(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        int j = (int)std::floor(std::log2(modes.theta[i]));
        shell_of[i] = j;
        jmax = std::max(jmax, j);
    }
    rep.shells.assign(jmax + 1, ShellStat{});
    for (int j = 0; j <= jmax; ++j) rep.shells[j].j = j;
    const double resonance_tol = 1e-13;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        ShellStat& sh = rep.shells[shell_of[i]];
        double ae = std::abs(rep.eps[i]);
        if (ae <= resonance_tol * std::max(1.0, rep.lambda[i])) rep.resonant = true;
        if (sh.empty || ae < sh.eps_min) {
            sh.empty = false;
            sh.eps_min = ae;
            sh.theta_at_min = modes.theta[i];
            sh.argmin = i;
        }
    }
    for (auto& sh : rep.shells) {
        sh.eps_min_theta_pow_h.assign(h_values.size(), 0.0);
        if (sh.empty) continue;
        for (std::size_t hi = 0; hi < h_values.size(); ++hi)
            sh.eps_min_theta_pow_h[hi] = sh.eps_min * std::pow(sh.theta_at_min, h_values[hi]);
    }
    rep.overall_min_eps_theta_pow_h.assign(h_values.size(),
                                           std::numeric_limits<double>::infinity());
    for (std::size_t hi = 0; hi < h_values.size(); ++hi) {
        for (const auto& sh : rep.shells)
            if (!sh.empty)
                rep.overall_min_eps_theta_pow_h[hi] =
                    std::min(rep.overall_min_eps_theta_pow_h[hi], sh.eps_min_theta_pow_h[hi]);
        if (!std::isfinite(rep.overall_min_eps_theta_pow_h[hi]))
            rep.overall_min_eps_theta_pow_h[hi] = 0.0;
    }

    // Fit log|eps_min| = log(c) - h0 * log(theta) over nonempty, nonresonant shells.
    std::vector<double> lx, ly;
    for (const auto& sh : rep.shells)
        if (!sh.empty && sh.eps_min > 0.0) {
            lx.push_back(std::log(sh.theta_at_min));
            ly.push_back(std::log(sh.eps_min));
        }
    LinFit f = linfit(lx, ly);
    rep.fitted_h0 = -f.b1;
    rep.fitted_h0_stderr = f.se1;
    rep.fitted_c = std::exp(f.b0);
    rep.fit_r2 = f.r2;
    rep.h0_floor = std::max(rep.fitted_h0, 2.0 * spec.d());

    bool positive = true;
    for (double v : rep.overall_min_eps_theta_pow_h)
        if (!(v > 0.0)) positive = false;
    rep.admissible = positive && !rep.resonant;
    return rep;
}

std::vector<std::pair<std::int64_t, std::int64_t>>
continued_fraction_convergents(double x, int depth) {
    if (depth < 1) throw ValidationError("depth", "must be >= 1");
    if (!(x > 0.0)) throw ValidationError("x", "must be positive");
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    long double r = (long double)x;
    std::int64_t p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    std::int64_t p = 0, q = 1;            // will be overwritten by the first step
    bool first = true;
    for (int i = 0; i < depth; ++i) {
        long double fl = floorl(r);
        if (fl > 9.0e17L) break;  // partial quotient blew up: rational at precision
        std::int64_t a = (std::int64_t)fl;
        std::int64_t pn, qn;
        if (first) {
            pn = a; qn = 1;
            p_prev = 1; q_prev = 0;
            first = false;
        } else {
            pn = a * p + p_prev;
            qn = a * q + q_prev;
            p_prev = p; q_prev = q;
        }
        p = pn; q = qn;
        out.emplace_back(p, q);
        long double frac = r - fl;
        if (frac < 1e-12L) break;  // rational at working precision
        r = 1.0L / frac;
    }
    return out;
}

}  // namespace floerlab
