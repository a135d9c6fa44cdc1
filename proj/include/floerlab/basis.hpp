#pragma once
// Twisted loop basis e_{n,m}(t) = e^{-i(2pi m/T - eps_n)t} z_n over the field
// modes, plus a real Fourier block for the particle factor (dq, dp).
//
// Real degree-of-freedom layout (everything downstream is real linear
// algebra; complex structures act as explicit 2x2 blocks):
//   particle: component c in [0, 2N)  (q_0..q_{N-1}, p_0..p_{N-1}),
//             harmonic slot s in [0, 2*m_max]:
//               s = 0      -> basis function 1
//               s = 2m-1   -> sqrt(2) cos(2pi m t/T)
//               s = 2m     -> sqrt(2) sin(2pi m t/T)
//   field:    per lattice mode i and m in [-m_max, m_max], the complex
//             coefficient c_{i,m} stored as (Re, Im).
//
// Field coefficients refer to the H-orthonormal complex coordinate
// u_hat = sqrt(lambda)(a + ib) per mode, so the Hessian of any scalar
// Hamiltonian term is a symmetric matrix in these coordinates.  All basis
// functions have unit discrete L^2(dt)/T norm, which keeps multiplication
// operators symmetric after projection.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "floerlab/model.hpp"
#include "floerlab/spectrum.hpp"

namespace floerlab {

using Cplx = std::complex<double>;

struct LoopBasis {
    ModelSpec spec;
    ModeSet modes;
    int m_max = 4;
    std::vector<double> lambda;  // per lattice mode
    std::vector<double> eps;     // small divisors

    int n_harm() const { return 2 * m_max + 1; }
    int particle_dim() const { return 2 * spec.N * n_harm(); }
    int n_field_pairs() const { return int(modes.size()) * n_harm(); }
    int dim() const { return particle_dim() + 2 * n_field_pairs(); }

    // particle dof index; comp in [0, 2N), slot in [0, 2*m_max]
    int pidx(int comp, int slot) const { return comp * n_harm() + slot; }
    // field dof index; m in [-m_max, m_max], reim in {0, 1}
    int fidx(int i, int m, int reim) const {
        return particle_dim() + 2 * (i * n_harm() + (m + m_max)) + reim;
    }
    static int slot_m(int slot) { return (slot + 1) / 2; }  // harmonic of a slot

    double omega(int m) const { return 2.0 * kPi * m / spec.T; }
    double mu(int i, int m) const { return omega(m) - eps[i]; }

    int default_nt() const { return 4 * n_harm(); }
};

LoopBasis make_loop_basis(const ModelSpec& spec, const ModeSet& modes, int m_max);

// ---- norm machinery ---------------------------------------------------------

enum class WeightKind { standard, modified };

struct NormProfile {
    WeightKind kind = WeightKind::standard;
    int k = 2;
    double h_prime = 0.0;
};

// Squared per-dof weights; norm(xi)^2 = sum_i w_i xi_i^2.
Eigen::VectorXd weight_vector(const LoopBasis& b, const NormProfile& prof);

double weighted_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& xi);

double loop_norm_standard(const LoopBasis& b, const Eigen::VectorXd& xi, int k, double h_prime);
double loop_norm_modified(const LoopBasis& b, const Eigen::VectorXd& xi, int k, double h_prime);

// Diagonal map realizing the isometry (H^k, modified) -> (H^{k-1}, standard):
// literal i d/dt (multiplication by mu_{n,m}) on the field block; on the finite
// particle factor a diagonal rescaling that identifies the standard k- and
// (k-1)-weighted sequence spaces (the two norms are equivalent there).
Eigen::VectorXd idt_isometry_diagonal(const LoopBasis& b, int k);

// Complex structure J applied slot-wise: field (x,y) -> (-y,x); particle
// (dq, dp) -> (-dp, dq).
Eigen::VectorXd apply_J(const LoopBasis& b, const Eigen::VectorXd& xi);

// The operator i d/dt as a (symmetric) dense matrix: diagonal mu_{n,m} on the
// field block, 2pi m/T couplings on the particle factor.
Eigen::MatrixXd idt_matrix(const LoopBasis& b);

// ---- collocation ------------------------------------------------------------

// Values of a loop vector on nt uniform nodes t_j = j T/nt.
struct NodeValues {
    Eigen::MatrixXd part;    // 2N x nt (dq, dp values)
    Eigen::MatrixXcd field;  // L x nt (u_hat values)
};

NodeValues loop_eval_nodes(const LoopBasis& b, const Eigen::VectorXd& xi, int nt);

// Adjoint/inverse of loop_eval_nodes on the represented band (nt > 2*m_max
// required): per-mode twist removal followed by plain DFT truncation.
Eigen::VectorXd loop_project_nodes(const LoopBasis& b, const NodeValues& nv);

// Analytic time derivative in coefficient space (d/dt, not i d/dt).
Eigen::VectorXd loop_time_derivative(const LoopBasis& b, const Eigen::VectorXd& xi);

// Deterministic random loop vector (standard normal dofs).
Eigen::VectorXd random_loop(const LoopBasis& b, std::mt19937_64& rng);

// Pairwise (cascade) summation: deterministic independent of threading.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace floerlab
