#pragma once
// Twisted periodic orbits over the e_{n,m} basis: collocation residual of
// d/dt u = X^G_t(u) (G_t the twisted generator), the Hessian multiplication
// operator S_u, the linearization i d/dt + S_u with its ell-block views,
// damped Newton, nondegeneracy margins, and the linearized return map.

#include <vector>

#include <Eigen/Dense>

#include "floerlab/basis.hpp"
#include "floerlab/dynamics.hpp"
#include "floerlab/linalg.hpp"

namespace floerlab {

// Everything the orbit/floer solvers need, bundled once.
struct OrbitContext {
    ModelSpec spec;
    ModeSet modes;
    LoopBasis basis;
    CouplingSpec coupling;
    ShapeFunction rho;
    std::vector<double> lambda;

    // phase-space layout: (q[N], p[N], then per mode (X_i, Y_i)); P = 2N + 2L
    int phase_dim() const { return 2 * spec.N + 2 * int(modes.size()); }
};

OrbitContext make_context(const ModelSpec& spec, int n_max, int m_max,
                          const CouplingSpec& coupling, double sigma);

struct Orbit {
    Eigen::VectorXd x;  // loop coefficients of the orbit in the twisted frame
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool used_tikhonov = false;
    std::vector<double> trail;  // residual norms per iteration
};

struct OperatorMatrix {
    Eigen::MatrixXd A;
    NormProfile in_profile, out_profile;
    Eigen::VectorXd w_in, w_out;  // squared per-dof weights
    int ell = -1;
    std::vector<int> low_idx, high_idx;  // ell-splitting (particle lives in "low")

    Eigen::MatrixXd weighted() const;
    Eigen::MatrixXd weighted_block(const std::vector<int>& rows,
                                   const std::vector<int>& cols) const;
};

// Loop coefficients of d/dt u - X^G_t(u); collocation on nt uniform nodes
// (default 4*(2 m_max+1)), projection after removing the e^{-i eps t} twist.
Eigen::VectorXd orbit_residual(const OrbitContext& ctx, const Eigen::VectorXd& x);

// Twisted-frame Hessian S_u(t) = dPhi^A_t^T Hess F(Phi^A_t u(t), t) dPhi^A_t
// as a dense symmetric matrix over the loop basis.
Eigen::MatrixXd hessian_matrix(const OrbitContext& ctx, const Eigen::VectorXd& x);

// S_u as an OperatorMatrix in the declared pair (modified-k -> standard-(k-1)).
OperatorMatrix hessian_operator(const OrbitContext& ctx, const Eigen::VectorXd& x, int k,
                                double h_prime);

// J(d/dt - DX^G) = i d/dt - S_u with ell-block index views.  With the J
// orientation used here (J = +i, Hamiltonian flow -J grad) the Hessian enters
// with a minus sign; the operator's structure (diagonal mu plus a bounded
// symmetric multiplication term) is orientation independent.
OperatorMatrix assemble_linearization(const OrbitContext& ctx, const Eigen::VectorXd& x,
                                      int ell, int k, double h_prime);

// The ell-splitting alone (particle + field modes |n|_inf <= ell vs the rest).
void ell_split(const OrbitContext& ctx, int ell, std::vector<int>& low, std::vector<int>& high);

Orbit newton_orbit(const OrbitContext& ctx, const Eigen::VectorXd& init, double tol,
                   int max_iter, int k, double h_prime);

struct NondegeneracyReport {
    double sigma_min = 0.0;                      // full weighted linearization
    std::vector<std::pair<int, double>> ell_sweep;  // sigma_min(D_ell) per ell
    std::vector<double> kh_variants;             // sigma_min across (k,h') choices
    std::vector<double> return_distances;        // |mu_i - 1|, ascending
    std::vector<double> field_baseline;          // 2|sin(eps_n T/2)| per mode
    double min_return_distance = 0.0;
    double symplectic_defect = 0.0;
    double threshold = 1e-6;
    bool verdict = false;
};

NondegeneracyReport nondegeneracy_margin(const OrbitContext& ctx, const Orbit& u, int k,
                                         double h_prime, const std::vector<int>& ell_sweep,
                                         double threshold);

// Variational flow over [0,T] in the twisted frame, composed with Phi^A_T.
struct ReturnMap {
    Eigen::MatrixXd M;  // phase_dim x phase_dim
    std::vector<std::complex<double>> eigenvalues;
    std::vector<double> distances;  // |mu - 1|, ascending
    double symplectic_defect = 0.0;
};

ReturnMap linearized_return_map(const OrbitContext& ctx, const Orbit& u, int n_steps = 4000);

}  // namespace floerlab
