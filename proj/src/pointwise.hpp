#pragma once
// Internal pointwise machinery shared by the orbit and strip solvers: loop
// evaluation at arbitrary times and the coupling data entering Hess F.
// In the physical frame Hess F acts only on (q, X = Re u_hat); the p block is
// the identity and the Y rows vanish.

#include <cmath>

#include "floerlab/orbits.hpp"

namespace floerlab {

// Loop values at an arbitrary time (same conventions as loop_eval_nodes).
struct LoopValue {
    Eigen::VectorXd part;    // 2N
    Eigen::VectorXcd field;  // u_hat in the twisted frame, per lattice mode
};

inline LoopValue eval_at(const LoopBasis& b, const Eigen::VectorXd& xi, double t) {
    LoopValue v;
    const int N = b.spec.N;
    const std::size_t L = b.modes.size();
    v.part.resize(2 * N);
    v.field.resize(Eigen::Index(L));
    for (int comp = 0; comp < 2 * N; ++comp) {
        double acc = xi[b.pidx(comp, 0)];
        for (int m = 1; m <= b.m_max; ++m) {
            double ph = b.omega(m) * t;
            acc += std::sqrt(2.0) * (xi[b.pidx(comp, 2 * m - 1)] * std::cos(ph) +
                                     xi[b.pidx(comp, 2 * m)] * std::sin(ph));
        }
        v.part[comp] = acc;
    }
    for (std::size_t i = 0; i < L; ++i) {
        Cplx acc(0.0, 0.0);
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            Cplx c(xi[b.fidx(int(i), m, 0)], xi[b.fidx(int(i), m, 1)]);
            double ph = -b.omega(m) * t;
            acc += c * Cplx(std::cos(ph), std::sin(ph));
        }
        double pe = b.eps[i] * t;
        v.field[Eigen::Index(i)] = acc * Cplx(std::cos(pe), std::sin(pe));
    }
    return v;
}

// Pointwise coupling data at a physical-frame point (q, X = Re u_hat).
struct CouplingData {
    double r = 0.0, fp = 0.0, fpp = 0.0;
    Eigen::VectorXd u1;   // rho_hat xi_n(q)/sqrt(lambda), per mode
    Eigen::MatrixXd G1;   // columns rho_hat grad xi_n(q)/sqrt(lambda)
    Eigen::VectorXd g;    // grad_q r = sum X_i G1_i
    Eigen::MatrixXd Aqq;  // full qq Hessian block (only when with_hess)
};

inline CouplingData coupling_at(const OrbitContext& ctx, double t, const Eigen::VectorXd& q,
                                const Eigen::VectorXd& Xw, bool with_hess) {
    const int N = ctx.spec.N;
    const std::size_t L = ctx.modes.size();
    CouplingData cd;
    cd.u1.resize(Eigen::Index(L));
    cd.G1.resize(N, Eigen::Index(L));
    cd.g = Eigen::VectorXd::Zero(N);
    Eigen::MatrixXd Hxx;
    if (with_hess) Hxx = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t i = 0; i < L; ++i) {
        double sc = ctx.rho.rho_hat[i] / std::sqrt(ctx.lambda[i]);
        cd.u1[Eigen::Index(i)] = sc * xi_value(ctx.modes.lattice[i], N, q);
        cd.G1.col(Eigen::Index(i)) = sc * xi_grad(ctx.modes.lattice[i], N, q);
        cd.r += Xw[Eigen::Index(i)] * cd.u1[Eigen::Index(i)];
        cd.g += Xw[Eigen::Index(i)] * cd.G1.col(Eigen::Index(i));
        if (with_hess) Hxx += (Xw[Eigen::Index(i)] * sc) * xi_hess(ctx.modes.lattice[i], N, q);
    }
    cd.fp = ctx.coupling.df(cd.r, t, ctx.spec.T);
    if (with_hess) {
        cd.fpp = ctx.coupling.d2f(cd.r, t, ctx.spec.T);
        cd.Aqq = ctx.coupling.v_ext_hess(t, q, N, ctx.spec.T) + cd.fp * Hxx +
                 cd.fpp * (cd.g * cd.g.transpose());
    }
    return cd;
}

// Hess F restricted to its active coordinates (q[0..N), X[0..L)).
inline Eigen::MatrixXd active_hessian(const OrbitContext& ctx, const CouplingData& cd) {
    const int N = ctx.spec.N;
    const int L = int(ctx.modes.size());
    Eigen::MatrixXd H(N + L, N + L);
    H.topLeftCorner(N, N) = cd.Aqq;
    for (int i = 0; i < L; ++i) {
        Eigen::VectorXd col = cd.fp * cd.G1.col(i) + (cd.fpp * cd.u1[i]) * cd.g;
        H.block(0, N + i, N, 1) = col;
        H.block(N + i, 0, 1, N) = col.transpose();
    }
    H.bottomRightCorner(L, L) = cd.fpp * (cd.u1 * cd.u1.transpose());
    return H;
}

}  // namespace floerlab
