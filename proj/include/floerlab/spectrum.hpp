#pragma once
// Eigenvalues lambda_n, small divisors eps_n = lambda_n mod 2pi/T reduced into
// (-pi/T, pi/T], admissibility diagnostics at finite truncation, and
// continued-fraction convergents of period ratios.

#include <cstdint>
#include <utility>
#include <vector>

#include "floerlab/model.hpp"

namespace floerlab {

// lambda_n per model; rejects lattices that contain a mode with lambda = 0.
std::vector<double> eigenvalues(const ModelSpec& spec, const ModeSet& modes);

// One reduction: unique representative in (-pi/T, pi/T], ties to +pi/T,
// round-half-to-even multiple of 2pi/T.
double small_divisor(double lambda, double T);

// Double-precision path with compensated reduction.
std::vector<double> small_divisors(const std::vector<double>& lambda, double T);

// Extended-precision path (>= 50 significant digits) used for |n| > 10^3 where
// the reduction lambda_n*T/(2pi) suffers catastrophic cancellation.  Computes
// lambda internally from the lattice so that e.g. n^2 stays exact.
std::vector<double> small_divisors_extended(const ModelSpec& spec, const ModeSet& modes);

struct ShellStat {
    int j = 0;                 // dyadic band theta in [2^j, 2^{j+1})
    bool empty = true;
    double theta_at_min = 0.0; // theta of the argmin mode
    double eps_min = 0.0;      // min |eps_n| over the shell
    std::size_t argmin = 0;    // index into the lattice enumeration
    std::vector<double> eps_min_theta_pow_h;  // per requested h
};

struct SpectrumReport {
    // Per-mode data in lattice enumeration order.
    std::vector<double> lambda, eps, theta;
    std::vector<double> h_values;
    std::vector<ShellStat> shells;
    std::vector<double> overall_min_eps_theta_pow_h;  // per requested h
    double fitted_h0 = 0.0;     // slope of -log|eps_min| vs log(theta) on shell minima
    double fitted_h0_stderr = 0.0;
    double fitted_c = 0.0;      // exp(intercept)
    double fit_r2 = 0.0;
    double h0_floor = 0.0;      // max(fitted_h0, 2d): Def-2.1 floor, reported alongside
    bool resonant = false;      // an exact resonance was detected
    bool admissible = false;    // finite-truncation surrogate flag
    // Always states the theta normalization and the surrogate character.
    std::string theta_normalization = "theta_n=(1+|n|^2)^(1/2)";
    std::string marker = "finite-truncation surrogate";
};

// Shell-wise minima, log-log fit of the decay exponent, resonance flags.
// Uses the extended-precision path automatically for |n| > 10^3.
SpectrumReport admissibility_profile(const ModelSpec& spec, const ModeSet& modes,
                                     const std::vector<double>& h_values);

// Standard convergents p_i/q_i of x > 0; stops early when x is rational at
// working precision.
std::vector<std::pair<std::int64_t, std::int64_t>>
continued_fraction_convergents(double x, int depth);

}  // namespace floerlab
