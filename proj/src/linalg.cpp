#include "floerlab/linalg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <lapacke.h>

namespace floerlab {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd work = A;  // destroyed by LAPACK
    lapack_int m = lapack_int(A.rows()), n = lapack_int(A.cols());
    Eigen::VectorXd s(std::min(m, n));
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(),
                                     nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("dgesdd failed, info=" + std::to_string(info));
    return s;
}

std::vector<std::complex<double>> dense_eigenvalues(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::runtime_error("dense_eigenvalues: square input required");
    Eigen::MatrixXd work = A;
    lapack_int n = lapack_int(A.rows());
    std::vector<double> wr(std::size_t(n), 0.0), wi(std::size_t(n), 0.0);
    lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(),
                                    wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("dgeev failed, info=" + std::to_string(info));
    std::vector<std::complex<double>> ev(std::size_t(n), 0.0);
    for (std::size_t i = 0; i < std::size_t(n); ++i) ev[i] = {wr[i], wi[i]};
    return ev;
}

double operator_norm_power(const ApplyFn& A, const ApplyFn& At, int dim, int max_iter,
                           double tol, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = g(rng);
    double nv = v.norm();
    if (nv == 0.0) return 0.0;
    v /= nv;
    double est = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = At(A(v));
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        double next = std::sqrt(nw);  // |A|^2 estimate is |w|
        v = w / nw;
        if (it > 0 && std::abs(next - est) <= tol * std::max(1.0, est)) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

double operator_norm_power(const Eigen::MatrixXd& A, int max_iter, double tol, unsigned seed) {
    return operator_norm_power([&](const Eigen::VectorXd& x) { return (A * x).eval(); },
                               [&](const Eigen::VectorXd& x) {
                                   return (A.transpose() * x).eval();
                               },
                               int(A.cols()), max_iter, tol, seed);
}

LstsqResult solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                double tikhonov_scale) {
    LstsqResult r;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-12);
    if (qr.rank() == std::min(A.rows(), A.cols())) {
        r.x = qr.solve(b);
        return r;
    }
    // Singular Jacobian: Tikhonov-regularized normal equations.
    Eigen::MatrixXd AtA = A.transpose() * A;
    double tau = tikhonov_scale * AtA.trace() / double(AtA.rows());
    AtA.diagonal().array() += tau;
    r.x = AtA.ldlt().solve(A.transpose() * b);
    r.regularized = true;
    return r;
}

GmresResult gmres(const ApplyFn& A, const Eigen::VectorXd& b, int restart, int max_iter,
                  double tol) {
    GmresResult res;
    const int n = int(b.size());
    res.x = Eigen::VectorXd::Zero(n);
    double bn = b.norm();
    if (bn == 0.0) {
        res.converged = true;
        return res;
    }
    int total = 0;
    while (total < max_iter) {
        Eigen::VectorXd r = b - A(res.x);
        double beta = r.norm();
        res.rel_residual = beta / bn;
        if (res.rel_residual < tol) {
            res.converged = true;
            return res;
        }
        int m = std::min(restart, max_iter - total);
        Eigen::MatrixXd V(n, m + 1);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        V.col(0) = r / beta;
        int j = 0;
        for (; j < m; ++j) {
            Eigen::VectorXd w = A(V.col(j));
            for (int i = 0; i <= j; ++i) {
                H(i, j) = V.col(i).dot(w);
                w -= H(i, j) * V.col(i);
            }
            // one re-orthogonalization pass for stability
            for (int i = 0; i <= j; ++i) {
                double c = V.col(i).dot(w);
                H(i, j) += c;
                w -= c * V.col(i);
            }
            H(j + 1, j) = w.norm();
            if (H(j + 1, j) < 1e-14) {
                ++j;
                break;
            }
            V.col(j + 1) = w / H(j + 1, j);
        }
        // small least squares: min |beta e1 - H y|
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(j + 1);
        e1[0] = beta;
        Eigen::VectorXd y =
            H.topLeftCorner(j + 1, j).colPivHouseholderQr().solve(e1);
        res.x += V.leftCols(j) * y;
        total += j;
        res.iterations = total;
        if (j == 0) break;
    }
    Eigen::VectorXd r = b - A(res.x);
    res.rel_residual = r.norm() / bn;
    res.converged = res.rel_residual < tol;
    return res;
}

}  // namespace floerlab
