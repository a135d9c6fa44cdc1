#include "floerlab/floer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "floerlab/linalg.hpp"
#include "pointwise.hpp"

namespace floerlab {

Eigen::VectorXd apply_idt(const LoopBasis& b, const Eigen::VectorXd& xi) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(b.dim());
    const int N = b.spec.N;
    for (int j = 0; j < N; ++j)
        for (int m = 1; m <= b.m_max; ++m) {
            double om = b.omega(m);
            int qc = b.pidx(j, 2 * m - 1), qs = b.pidx(j, 2 * m);
            int pc = b.pidx(N + j, 2 * m - 1), ps = b.pidx(N + j, 2 * m);
            out[qc] = -om * xi[ps];
            out[qs] = om * xi[pc];
            out[pc] = om * xi[qs];
            out[ps] = -om * xi[qc];
        }
    for (std::size_t i = 0; i < b.modes.size(); ++i)
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            double mu = b.mu(int(i), m);
            out[b.fidx(int(i), m, 0)] = mu * xi[b.fidx(int(i), m, 0)];
            out[b.fidx(int(i), m, 1)] = mu * xi[b.fidx(int(i), m, 1)];
        }
    return out;
}

namespace {

// Exact-exponential cell coefficients for (d/ds + lam) f = g with piecewise
// linear g; z = lam*ds > 0, E = e^{-z}:
//   f_{j+1} = E f_j + ds (A g_j + B g_{j+1}).
void cell_coeffs(double z, double& E, double& A, double& B) {
    E = std::exp(-z);
    if (std::abs(z) < 1e-3) {
        // series forms, stable for small z
        A = 0.5 - z / 3.0 + z * z / 8.0;
        B = 0.5 - z / 6.0 + z * z / 24.0;
    } else {
        A = (1.0 - (1.0 + z) * E) / (z * z);
        B = (z - 1.0 + E) / (z * z);
    }
}

// Causal (lam > 0) or anticausal (lam < 0) scalar solve with zero inflow.
Eigen::VectorXd scalar_solve(double lam, const Eigen::VectorXd& g, double ds) {
    const int M = int(g.size());
    Eigen::VectorXd f(M);
    if (lam > 0.0) {
        double E, A, B;
        cell_coeffs(lam * ds, E, A, B);
        f[0] = ds * B * g[0];  // ghost g_{-1} = 0
        for (int j = 1; j < M; ++j) f[j] = E * f[j - 1] + ds * (A * g[j - 1] + B * g[j]);
        return f;
    }
    // reverse s: (d/dsigma + (-lam)) fr = -gr with gr the reversed rhs
    double E, A, B;
    cell_coeffs(-lam * ds, E, A, B);
    f[M - 1] = ds * B * (-g[M - 1]);
    for (int j = M - 2; j >= 0; --j) f[j] = E * f[j + 1] + ds * (A * (-g[j + 1]) + B * (-g[j]));
    return f;
}

}  // namespace

Eigen::MatrixXd dbar_solve(const LoopBasis& b, const Eigen::MatrixXd& g, double ds,
                           ZeroModePolicy policy) {
    const int N = b.spec.N;
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    // particle slot 0: i d/dt vanishes identically
    for (int comp = 0; comp < 2 * N; ++comp) {
        int d = b.pidx(comp, 0);
        if (policy == ZeroModePolicy::reject) {
            if (g.row(d).cwiseAbs().maxCoeff() > 0.0)
                throw ValidationError("dbar_solve",
                                      "zero-frequency particle component in the right side");
        } else {
            f.row(d) = g.row(d);
        }
    }
    // particle m >= 1: diagonalize the 4-block in the +/-omega eigenbasis
    const double is2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < N; ++j)
        for (int m = 1; m <= b.m_max; ++m) {
            double om = b.omega(m);
            int qc = b.pidx(j, 2 * m - 1), qs = b.pidx(j, 2 * m);
            int pc = b.pidx(N + j, 2 * m - 1), ps = b.pidx(N + j, 2 * m);
            Eigen::VectorXd g1 = is2 * (g.row(qc) - g.row(ps)).transpose();  // eig +omega
            Eigen::VectorXd g2 = is2 * (g.row(qs) + g.row(pc)).transpose();  // eig +omega
            Eigen::VectorXd g3 = is2 * (g.row(qc) + g.row(ps)).transpose();  // eig -omega
            Eigen::VectorXd g4 = is2 * (g.row(qs) - g.row(pc)).transpose();  // eig -omega
            Eigen::VectorXd y1 = scalar_solve(om, g1, ds);
            Eigen::VectorXd y2 = scalar_solve(om, g2, ds);
            Eigen::VectorXd y3 = scalar_solve(-om, g3, ds);
            Eigen::VectorXd y4 = scalar_solve(-om, g4, ds);
            f.row(qc) = (is2 * (y1 + y3)).transpose();
            f.row(qs) = (is2 * (y2 + y4)).transpose();
            f.row(pc) = (is2 * (y2 - y4)).transpose();
            f.row(ps) = (is2 * (-y1 + y3)).transpose();
        }
    for (std::size_t i = 0; i < b.modes.size(); ++i)
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            double mu = b.mu(int(i), m);
            for (int reim = 0; reim < 2; ++reim) {
                int d = b.fidx(int(i), m, reim);
                f.row(d) = scalar_solve(mu, g.row(d).transpose(), ds).transpose();
            }
        }
    return f;
}

Eigen::MatrixXd dbar_apply(const LoopBasis& b, const Eigen::MatrixXd& f, double ds) {
    const int ns = int(f.cols());
    Eigen::MatrixXd out(f.rows(), ns);
    for (int j = 0; j < ns; ++j) {
        Eigen::VectorXd left = (j > 0) ? f.col(j - 1).eval() : Eigen::VectorXd::Zero(f.rows());
        Eigen::VectorXd right =
            (j + 1 < ns) ? f.col(j + 1).eval() : Eigen::VectorXd::Zero(f.rows());
        out.col(j) = (right - left) / (2.0 * ds) + apply_idt(b, f.col(j));
    }
    return out;
}

namespace {

Eigen::MatrixXd centered_diff(const Eigen::MatrixXd& f, double ds) {
    const int ns = int(f.cols());
    Eigen::MatrixXd out(f.rows(), ns);
    for (int j = 0; j < ns; ++j) {
        Eigen::VectorXd left = (j > 0) ? f.col(j - 1).eval() : Eigen::VectorXd::Zero(f.rows());
        Eigen::VectorXd right =
            (j + 1 < ns) ? f.col(j + 1).eval() : Eigen::VectorXd::Zero(f.rows());
        out.col(j) = (right - left) / (2.0 * ds);
    }
    return out;
}

}  // namespace

double strip_norm_standard(const LoopBasis& b, const Eigen::MatrixXd& g, double ds, int k,
                           double h_prime) {
    Eigen::VectorXd w0 = weight_vector(b, {WeightKind::standard, 0, h_prime});
    const int ns = int(g.cols());
    std::vector<double> terms;
    terms.reserve(std::size_t(2 * ns));
    if (k == 0) {
        for (int j = 0; j < ns; ++j) {
            double nj = weighted_norm(w0, g.col(j));
            terms.push_back(ds * nj * nj);
        }
        return std::sqrt(pairwise_sum(terms.data(), terms.size()));
    }
    Eigen::VectorXd wk = weight_vector(b, {WeightKind::standard, k, h_prime});
    Eigen::MatrixXd Dk = g;
    for (int r = 0; r < k; ++r) Dk = centered_diff(Dk, ds);
    for (int j = 0; j < ns; ++j) {
        double a = weighted_norm(wk, g.col(j));
        double c = weighted_norm(w0, Dk.col(j));
        terms.push_back(ds * a * a);
        terms.push_back(ds * c * c);
    }
    return std::sqrt(pairwise_sum(terms.data(), terms.size()));
}

double strip_norm_modified(const LoopBasis& b, const Eigen::MatrixXd& xi, double ds, int k,
                           double h_prime) {
    return strip_norm_standard(b, dbar_apply(b, xi, ds), ds, k - 1, h_prime);
}

SliceCache make_slice_cache(const OrbitContext& ctx, const Eigen::VectorXd& slice) {
    const LoopBasis& b = ctx.basis;
    const int N = ctx.spec.N;
    const std::size_t L = ctx.modes.size();
    const int nt = b.default_nt();
    const double T = ctx.spec.T;
    NodeValues nv = loop_eval_nodes(b, slice, nt);
    SliceCache c;
    c.q = nv.part.topRows(N);
    c.Aqq.reserve(std::size_t(nt));
    c.G1.reserve(std::size_t(nt));
    for (int jt = 0; jt < nt; ++jt) {
        double t = T * jt / nt;
        Eigen::VectorXd Xw = Eigen::VectorXd::Zero(Eigen::Index(L));
        for (std::size_t i = 0; i < L; ++i) {
            double la = ctx.lambda[i];
            Xw[Eigen::Index(i)] =
                (nv.field(Eigen::Index(i), jt) * Cplx(std::cos(la * t), -std::sin(la * t)))
                    .real();
        }
        CouplingData cd = coupling_at(ctx, t, c.q.col(jt), Xw, true);
        c.Aqq.push_back(std::move(cd.Aqq));
        c.G1.push_back(std::move(cd.G1));
        c.u1.push_back(std::move(cd.u1));
        c.g.push_back(std::move(cd.g));
        c.fp.push_back(cd.fp);
        c.fpp.push_back(cd.fpp);
    }
    return c;
}

Eigen::VectorXd apply_hessian_cached(const OrbitContext& ctx, const SliceCache& c,
                                     const Eigen::VectorXd& v) {
    const LoopBasis& b = ctx.basis;
    const int N = ctx.spec.N;
    const std::size_t L = ctx.modes.size();
    const int nt = b.default_nt();
    const double T = ctx.spec.T;
    NodeValues nv = loop_eval_nodes(b, v, nt);
    NodeValues out;
    out.part.resize(2 * N, nt);
    out.field.resize(Eigen::Index(L), nt);
    for (int jt = 0; jt < nt; ++jt) {
        double t = T * jt / nt;
        Eigen::VectorXd vq = nv.part.col(jt).head(N);
        Eigen::VectorXd vp = nv.part.col(jt).segment(N, N);
        Eigen::VectorXd vX = Eigen::VectorXd::Zero(Eigen::Index(L));
        for (std::size_t i = 0; i < L; ++i) {
            double la = ctx.lambda[i];
            vX[Eigen::Index(i)] =
                (nv.field(Eigen::Index(i), jt) * Cplx(std::cos(la * t), -std::sin(la * t)))
                    .real();
        }
        double su = c.u1[std::size_t(jt)].dot(vX);
        double gv = c.g[std::size_t(jt)].dot(vq);
        Eigen::VectorXd out_q = c.Aqq[std::size_t(jt)] * vq +
                                c.fp[std::size_t(jt)] * (c.G1[std::size_t(jt)] * vX) +
                                (c.fpp[std::size_t(jt)] * su) * c.g[std::size_t(jt)];
        Eigen::VectorXd out_X = c.fp[std::size_t(jt)] * (c.G1[std::size_t(jt)].transpose() * vq) +
                                (c.fpp[std::size_t(jt)] * (gv + su)) * c.u1[std::size_t(jt)];
        out.part.col(jt).head(N) = out_q;
        out.part.col(jt).segment(N, N) = vp;  // identity pp block
        for (std::size_t i = 0; i < L; ++i) {
            double la = ctx.lambda[i];
            out.field(Eigen::Index(i), jt) =
                Cplx(std::cos(la * t), std::sin(la * t)) * Cplx(out_X[Eigen::Index(i)], 0.0);
        }
    }
    return loop_project_nodes(b, out);
}

Eigen::MatrixXd floer_residual(const OrbitContext& ctx, const FloerCurve& curve) {
    const LoopBasis& b = ctx.basis;
    const Eigen::MatrixXd& u = curve.u.slices;
    const int ns = int(u.cols());
    const double ds = curve.u.ds();
    Eigen::MatrixXd R(u.rows(), ns);
    for (int j = 0; j < ns; ++j) {
        Eigen::VectorXd left = (j > 0) ? Eigen::VectorXd(u.col(j - 1)) : curve.u_minus;
        Eigen::VectorXd right = (j + 1 < ns) ? Eigen::VectorXd(u.col(j + 1)) : curve.u_plus;
        R.col(j) = (right - left) / (2.0 * ds) + apply_J(b, orbit_residual(ctx, u.col(j)));
    }
    return R;
}

Eigen::MatrixXd floer_linearization_apply(const OrbitContext& ctx,
                                          const std::vector<SliceCache>& caches,
                                          const Eigen::MatrixXd& v, double ds) {
    const LoopBasis& b = ctx.basis;
    const int M = int(v.cols());
    Eigen::MatrixXd out(v.rows(), M);
    for (int j = 0; j < M; ++j) {
        Eigen::VectorXd left = (j > 0) ? v.col(j - 1).eval() : Eigen::VectorXd::Zero(v.rows());
        Eigen::VectorXd right =
            (j + 1 < M) ? v.col(j + 1).eval() : Eigen::VectorXd::Zero(v.rows());
        out.col(j) = (right - left) / (2.0 * ds) + apply_idt(b, v.col(j)) -
                     apply_hessian_cached(ctx, caches[std::size_t(j)], v.col(j));
    }
    return out;
}

namespace {

std::vector<SliceCache> interior_caches(const OrbitContext& ctx, const Eigen::MatrixXd& u) {
    std::vector<SliceCache> caches;
    const int ns = int(u.cols());
    caches.reserve(std::size_t(ns - 2));
    for (int j = 1; j + 1 < ns; ++j) caches.push_back(make_slice_cache(ctx, u.col(j)));
    return caches;
}

}  // namespace

Eigen::MatrixXd dense_linearization(const OrbitContext& ctx, const FloerCurve& curve, int k,
                                    double h_prime) {
    const LoopBasis& b = ctx.basis;
    const int dim = b.dim();
    const int M = curve.u.ns() - 2;
    const double ds = curve.u.ds();
    std::vector<SliceCache> caches = interior_caches(ctx, curve.u.slices);
    Eigen::VectorXd sq_out = weight_vector(b, {WeightKind::standard, k - 1, h_prime}).cwiseSqrt();
    Eigen::VectorXd isq_in =
        weight_vector(b, {WeightKind::modified, k, h_prime}).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd B(dim * M, dim * M);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(dim, M);
    for (int jc = 0; jc < M; ++jc)
        for (int dc = 0; dc < dim; ++dc) {
            E(dc, jc) = isq_in[dc];
            Eigen::MatrixXd col = floer_linearization_apply(ctx, caches, E, ds);
            for (int j = 0; j < M; ++j)
                B.block(j * dim, jc * dim + dc, dim, 1) =
                    sq_out.array() * col.col(j).array();
            E(dc, jc) = 0.0;
        }
    return B;
}

FloerCurve floer_newton(const OrbitContext& ctx, const Eigen::VectorXd& u_minus,
                        const Eigen::VectorXd& u_plus, const FloerCurve& initial, double tol,
                        int max_iter, int k, double h_prime, int dense_limit) {
    const LoopBasis& b = ctx.basis;
    const int dim = b.dim();
    FloerCurve curve = initial;
    curve.u_minus = u_minus;
    curve.u_plus = u_plus;
    const int ns = curve.u.ns();
    if (ns < 3) throw ValidationError("floer_newton", "need at least 3 strip slices");
    const double ds = curve.u.ds();
    curve.u.slices.col(0) = u_minus;
    curve.u.slices.col(ns - 1) = u_plus;
    const int M = ns - 2;
    auto flatten = [&](const Eigen::MatrixXd& X) {
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(X.data(), dim * M));
    };
    auto unflatten = [&](const Eigen::VectorXd& y) {
        return Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(y.data(), dim, M));
    };
    for (int it = 0;; ++it) {
        Eigen::MatrixXd F = floer_residual(ctx, curve);
        double rn = strip_norm_standard(b, F, ds, k - 1, h_prime);
        curve.trail.push_back(rn);
        curve.residual_norm = rn;
        curve.iterations = it;
        if (rn < tol) {
            curve.converged = true;
            break;
        }
        if (it >= max_iter) break;
        std::vector<SliceCache> caches = interior_caches(ctx, curve.u.slices);
        // right-preconditioned GMRES: (D dbar^{-1}) y = -F, delta = dbar^{-1} y
        auto A = [&](const Eigen::VectorXd& y) {
            Eigen::MatrixXd X = dbar_solve(b, unflatten(y), ds, ZeroModePolicy::identity);
            return flatten(floer_linearization_apply(ctx, caches, X, ds));
        };
        Eigen::VectorXd rhs = -flatten(F.middleCols(1, M));
        GmresResult gm = gmres(A, rhs, 60, 400, 1e-10);
        Eigen::MatrixXd delta = dbar_solve(b, unflatten(gm.x), ds, ZeroModePolicy::identity);
        double alpha = 1.0, best_rn = std::numeric_limits<double>::infinity(), best_alpha = 1.0;
        for (int hv = 0; hv <= 20; ++hv) {
            FloerCurve trial = curve;
            trial.u.slices.middleCols(1, M) += alpha * delta;
            double rt =
                strip_norm_standard(b, floer_residual(ctx, trial), ds, k - 1, h_prime);
            if (rt < best_rn) {
                best_rn = rt;
                best_alpha = alpha;
            }
            if (rt <= (1.0 - 1e-4 * alpha) * rn) {
                best_alpha = alpha;
                break;
            }
            alpha *= 0.5;
        }
        // never accept a step that worsens the residual (a stalled iterate is
        // a diagnostic failure, not an excuse to drift away)
        if (best_rn >= rn) break;
        curve.u.slices.middleCols(1, M) += best_alpha * delta;
    }
    if (dim * M <= dense_limit) {
        Eigen::MatrixXd B = dense_linearization(ctx, curve, k, h_prime);
        Eigen::VectorXd sv = singular_values(B);
        double cut = 1e-8 * sv[0];
        curve.kernel_dim = int((sv.array() < cut).count());
    }
    return curve;
}

}  // namespace floerlab
