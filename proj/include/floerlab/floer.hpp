#pragma once
// Strip machinery: the twisted dbar operator d/ds + i d/dt with its exact
// per-mode exponential-kernel inverse, strip norms, the nonlinear Floer
// residual, and a dbar-preconditioned Newton solver for curves connecting two
// nondegenerate orbits.
//
// Grid: s_j = -S0 + j*ds, j = 0..ns-1, columns of a dim x ns matrix of loop
// coefficients.  Boundary columns are clamped to the asymptotic orbits; decay
// variations use zero ghost slices.

#include <vector>

#include <Eigen/Dense>

#include "floerlab/orbits.hpp"

namespace floerlab {

struct StripField {
    Eigen::MatrixXd slices;  // loop dim x ns
    double s_half_width = 10.0;
    bool decaying = true;  // asymptotic tag: zero clamps at both ends

    int ns() const { return int(slices.cols()); }
    double ds() const { return ns() > 1 ? 2.0 * s_half_width / (ns() - 1) : 0.0; }
};

struct FloerCurve {
    StripField u;
    Eigen::VectorXd u_minus, u_plus;  // asymptotic loop vectors (s -> -/+ inf)
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int kernel_dim = -1;  // numerical dim ker D at the solution; -1 = not computed
    std::vector<double> trail;
};

// i d/dt in coefficient space without forming the dense matrix.
Eigen::VectorXd apply_idt(const LoopBasis& b, const Eigen::VectorXd& xi);

// How dbar_solve treats the particle slot-0 dofs, whose i d/dt eigenvalue
// vanishes identically (the field block never does, by admissibility).
enum class ZeroModePolicy { reject, identity };

// Solves (d/ds + i d/dt) f = g columnwise-in-modes: per eigendirection the
// scalar ODE (d/ds + lam) f = g integrated exactly over cells (piecewise
// linear g), causally for lam > 0 and anticausally for lam < 0, with zero
// inflow data.  Particle m >= 1 blocks are handled in the +/-omega eigenbasis.
Eigen::MatrixXd dbar_solve(const LoopBasis& b, const Eigen::MatrixXd& g, double ds,
                           ZeroModePolicy policy = ZeroModePolicy::reject);

// d/ds (centered differences, zero ghosts) + i d/dt on a decaying strip.
Eigen::MatrixXd dbar_apply(const LoopBasis& b, const Eigen::MatrixXd& f, double ds);

// Discrete anisotropic H^k strip norm: per-slice loop norm of order k plus the
// k-fold centered s-difference measured in the order-0 loop norm, both summed
// with weight ds.  Ghost slices are zero (decaying data).
double strip_norm_standard(const LoopBasis& b, const Eigen::MatrixXd& g, double ds, int k,
                           double h_prime);

// Modified strip norm: standard (k-1)-norm of dbar_apply(xi) by definition.
double strip_norm_modified(const LoopBasis& b, const Eigen::MatrixXd& xi, double ds, int k,
                           double h_prime);

// Cached pointwise linearization data for one strip slice (all collocation
// nodes), enough to apply the Hessian multiplication operator matrix-free.
struct SliceCache {
    Eigen::MatrixXd q;          // N x nt
    std::vector<Eigen::MatrixXd> Aqq;  // per node, N x N
    std::vector<Eigen::MatrixXd> G1;   // per node, N x L
    std::vector<Eigen::VectorXd> u1, g;
    std::vector<double> fp, fpp;
};

SliceCache make_slice_cache(const OrbitContext& ctx, const Eigen::VectorXd& slice);

// S_u(slice) applied to a loop vector through the cache (matches
// hessian_matrix * v up to roundoff).
Eigen::VectorXd apply_hessian_cached(const OrbitContext& ctx, const SliceCache& c,
                                     const Eigen::VectorXd& v);

// Pointwise Floer residual d/ds u + J(d/dt u - X^G(u)) at every slice;
// centered s-differences with the asymptotic orbits as ghost slices.
Eigen::MatrixXd floer_residual(const OrbitContext& ctx, const FloerCurve& curve);

// Linearization D = d/ds + i d/dt - S_u applied to a decaying variation
// (zero ghosts), slice caches supplied by the caller.
Eigen::MatrixXd floer_linearization_apply(const OrbitContext& ctx,
                                          const std::vector<SliceCache>& caches,
                                          const Eigen::MatrixXd& v, double ds);

// Newton with GMRES on the dbar-right-preconditioned linearization; interior
// slices are unknowns, boundary slices stay clamped to u^-/u^+.  When the
// total interior dimension is <= dense_limit the numerical kernel dimension
// of D at the solution is reported (singular values < 1e-8 * sigma_max).
FloerCurve floer_newton(const OrbitContext& ctx, const Eigen::VectorXd& u_minus,
                        const Eigen::VectorXd& u_plus, const FloerCurve& initial, double tol,
                        int max_iter, int k, double h_prime, int dense_limit = 3000);

// Dense assembly of the weighted linearization on the interior grid (columns
// = unit variations); intended for kernel counts at modest sizes.
Eigen::MatrixXd dense_linearization(const OrbitContext& ctx, const FloerCurve& curve, int k,
                                    double h_prime);

}  // namespace floerlab
