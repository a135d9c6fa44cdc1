#pragma once
// Dense/matrix-free linear algebra: LAPACK-backed SVD and eigenvalues, seeded
// power iteration for operator norms, GMRES, and regularized least squares.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace floerlab {

using ApplyFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Singular values, descending (LAPACK dgesdd).
Eigen::VectorXd singular_values(const Eigen::MatrixXd& A);

// Eigenvalues of a general real matrix (LAPACK dgeev).
std::vector<std::complex<double>> dense_eigenvalues(const Eigen::MatrixXd& A);

// Largest singular value by power iteration on A^T A; deterministic seeded
// start; stops after max_iter iterations or relative change < tol.
double operator_norm_power(const ApplyFn& A, const ApplyFn& At, int dim, int max_iter = 200,
                           double tol = 1e-10, unsigned seed = 12345);
double operator_norm_power(const Eigen::MatrixXd& A, int max_iter = 200, double tol = 1e-10,
                           unsigned seed = 12345);

// Least squares min |Ax - b| via QR; if A is numerically rank deficient the
// solve falls back to Tikhonov-regularized normal equations with
// tau = tikhonov_scale * trace(A^T A)/dim.
struct LstsqResult {
    Eigen::VectorXd x;
    bool regularized = false;
};
LstsqResult solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                double tikhonov_scale = 1e-10);

struct GmresResult {
    Eigen::VectorXd x;
    bool converged = false;
    int iterations = 0;
    double rel_residual = 0.0;
};

// Restarted GMRES on A x = b (A through the preconditioned apply).
GmresResult gmres(const ApplyFn& A, const Eigen::VectorXd& b, int restart = 60,
                  int max_iter = 600, double tol = 1e-10);

}  // namespace floerlab
