#pragma once
// Verification suites for the quantitative norm/operator estimates: isometry,
// inclusion and compact-embedding constants, tail decay of finite-rank
// Hessian truncations, the (*)/(**)/(***) block inequalities, the
// semi-Fredholm constant on strips, kernel/cokernel counts, and a
// random-perturbation nondegeneracy probe.  Everything here is explicit
// finite-truncation evidence; no infinite-dimensional claim is certified.

#include <string>
#include <utility>
#include <vector>

#include "floerlab/floer.hpp"
#include "floerlab/orbits.hpp"

namespace floerlab {

struct VerifyCase {
    std::string label;
    double value = 0.0;   // measured quantity
    double bound = 0.0;   // threshold it is compared against (0 if none)
    double margin = 0.0;  // signed distance to the bound, positive = pass
    bool pass = true;
};

struct TrendFit {
    double slope = 0.0, r2 = 0.0;
    bool valid = false;
};

struct VerificationReport {
    std::string suite;
    std::string norm_pair;  // the pair every constant below is measured in
    std::vector<VerifyCase> cases;
    std::vector<std::pair<std::string, double>> metrics;
    TrendFit trend;
    bool pass = true;
};

// max |mod_k(xi) - std_{k-1}(i d/dt xi)| / norm over random loops + basis
// closed forms.
VerificationReport verify_isometry(const OrbitContext& ctx, int k, double h_prime, int samples,
                                   unsigned seed);

// Inclusion constant standard-k >= c * modified-k, the per-mode small-divisor
// inequality |z|_{h'} |eps| > c |z|_{h'-h''} over an h'' grid, and the
// per-mode compact-embedding bound with the derived constant
// max(2, 2/c^2, 2(T/pi)^2).
VerificationReport verify_inclusions(const OrbitContext& ctx, int k, double h, double h_prime,
                                     const std::vector<double>& h_pp_grid);

// ||S - S Pi_ell|| * ell^{2h-1} over an ell sweep, measured both as an
// endomorphism of standard-k and as modified-k -> standard-(k-1).
VerificationReport tail_decay_profile(const OrbitContext& ctx, const Eigen::VectorXd& orbit_x,
                                      const std::vector<int>& ells, double h, int k,
                                      double h_prime);

// (*) sigma_min(D_ell) > 0, (**) 2||S^off D_ell^{-1}|| <= 1,
// (***) 2||S_lh (i d/dt)_hi^{-1}|| + 2||S_hh (i d/dt)_hi^{-1}|| <= 1, per ell;
// the loop form at s-frequency 0 dominates the strip symbol (i sigma + mu),
// so it covers the strip version.  Reports the smallest passing ell.
VerificationReport verify_star_inequalities(const OrbitContext& ctx,
                                            const Eigen::VectorXd& orbit_x,
                                            const std::vector<int>& ells, int k, double h_prime);

// C^2 piecewise-quintic plateau: 1 on [-S0+1, S0-1], 0 at |s| >= S0.
double beta_cutoff(double s, double s_half_width);

// Best constant c4 in ||xi||_{k,~} <= c4 (||D xi||_{k-1} + ||beta xi_ell||_{k-1})
// over random and adversarial (translation-mode) strip variations.
VerificationReport semifredholm_constant(const OrbitContext& ctx, const FloerCurve& curve,
                                         int ell, int k, double h_prime, int trials,
                                         unsigned seed);

struct KernelReport {
    int dim_ker = 0, dim_coker = 0;
    std::string method;  // "s-diagonalization" | "dense-svd" | "skipped"
    double threshold = 0.0;
    std::vector<double> smallest;  // smallest singular values / eigen distances
};

// Numerical kernel/cokernel dimensions of D (and its weighted adjoint) at the
// curve.  Constant-in-s curves use the exact s-diagonalization (the centered
// skew difference commutes with the constant loop operator); small systems use
// a dense weighted SVD; anything else is reported as skipped.
KernelReport adjoint_kernel_dim(const OrbitContext& ctx, const FloerCurve& curve, int k,
                                double h_prime, double rel_tol = 1e-8, int dense_limit = 3000);

// Random small coupling perturbations; fraction of re-solved orbits whose
// nondegeneracy margin clears the threshold.
VerificationReport genericity_probe(const OrbitContext& base, double delta, int trials,
                                    unsigned seed, int k, double h_prime, double threshold);

}  // namespace floerlab
