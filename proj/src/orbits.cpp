#include "floerlab/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pointwise.hpp"

namespace floerlab {

OrbitContext make_context(const ModelSpec& spec, int n_max, int m_max,
                          const CouplingSpec& coupling, double sigma) {
    OrbitContext ctx;
    ctx.spec = spec;
    ctx.modes = build_lattice(spec, n_max);
    ctx.basis = make_loop_basis(spec, ctx.modes, m_max);
    ctx.coupling = coupling;
    ctx.rho = ShapeFunction::gaussian(ctx.modes, sigma);
    ctx.lambda = ctx.basis.lambda;
    return ctx;
}

Eigen::VectorXd orbit_residual(const OrbitContext& ctx, const Eigen::VectorXd& x) {
    const LoopBasis& b = ctx.basis;
    const int N = ctx.spec.N;
    const std::size_t L = ctx.modes.size();
    const int nt = b.default_nt();
    const double T = ctx.spec.T;
    NodeValues nv = loop_eval_nodes(b, x, nt);
    NodeValues nd = loop_eval_nodes(b, loop_time_derivative(b, x), nt);
    NodeValues R;
    R.part.resize(2 * N, nt);
    R.field.resize(Eigen::Index(L), nt);
    for (int jt = 0; jt < nt; ++jt) {
        double t = T * jt / nt;
        Eigen::VectorXd q = nv.part.col(jt).head(N);
        Eigen::VectorXd p = nv.part.col(jt).segment(N, N);
        // physical-frame field and its real part
        Eigen::VectorXcd uw = Eigen::VectorXcd::Zero(Eigen::Index(L));
        Eigen::VectorXd Xw = Eigen::VectorXd::Zero(Eigen::Index(L));
        for (std::size_t i = 0; i < L; ++i) {
            double la = ctx.lambda[i];
            uw[Eigen::Index(i)] =
                nv.field(Eigen::Index(i), jt) * Cplx(std::cos(la * t), -std::sin(la * t));
            Xw[Eigen::Index(i)] = uw[Eigen::Index(i)].real();
        }
        CouplingData cd = coupling_at(ctx, t, q, Xw, false);
        R.part.col(jt).head(N) = nd.part.col(jt).head(N) - p;
        R.part.col(jt).segment(N, N) = nd.part.col(jt).segment(N, N) + cd.fp * cd.g +
                                       ctx.coupling.v_ext_grad(t, q, N, T);
        for (std::size_t i = 0; i < L; ++i) {
            double la = ctx.lambda[i];
            // X^G field component: e^{+i lambda t} (-i f' u1)
            Cplx src = Cplx(std::cos(la * t), std::sin(la * t)) *
                       Cplx(0.0, -cd.fp * cd.u1[Eigen::Index(i)]);
            R.field(Eigen::Index(i), jt) = nd.field(Eigen::Index(i), jt) - src;
        }
    }
    return loop_project_nodes(b, R);
}

Eigen::MatrixXd hessian_matrix(const OrbitContext& ctx, const Eigen::VectorXd& x) {
    const LoopBasis& b = ctx.basis;
    const int N = ctx.spec.N;
    const int L = int(ctx.modes.size());
    const int nt = b.default_nt();
    const int dim = b.dim();
    const double T = ctx.spec.T;
    NodeValues nv = loop_eval_nodes(b, x, nt);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim, dim);
    // per-dof active row (q_j or X_i of Hess F) and physical-frame value there
    std::vector<int> beta(std::size_t(dim), -1);
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd M1t(dim, N + L);
    for (int jt = 0; jt < nt; ++jt) {
        double t = T * jt / nt;
        Eigen::VectorXd q = nv.part.col(jt).head(N);
        Eigen::VectorXd Xw(L);
        for (int i = 0; i < L; ++i) {
            double la = ctx.lambda[std::size_t(i)];
            Xw[i] = (nv.field(i, jt) * Cplx(std::cos(la * t), -std::sin(la * t))).real();
        }
        CouplingData cd = coupling_at(ctx, t, q, Xw, true);
        Eigen::MatrixXd H = active_hessian(ctx, cd);
        // Each basis column meets at most one active row: q-dofs hit their own
        // component, field dofs hit X of their mode (value = physical real
        // part), p-dofs none (identity block added after the loop).
        for (int comp = 0; comp < N; ++comp)
            for (int slot = 0; slot < b.n_harm(); ++slot) {
                int d = b.pidx(comp, slot);
                beta[std::size_t(d)] = comp;
                if (slot == 0)
                    coef[d] = 1.0;
                else {
                    double ph = b.omega(LoopBasis::slot_m(slot)) * t;
                    coef[d] = std::sqrt(2.0) * (slot % 2 == 1 ? std::cos(ph) : std::sin(ph));
                }
            }
        for (int i = 0; i < L; ++i) {
            double la = ctx.lambda[std::size_t(i)];
            for (int m = -b.m_max; m <= b.m_max; ++m) {
                double ang = (la + b.mu(i, m)) * t;
                int dre = b.fidx(i, m, 0), dim_ = b.fidx(i, m, 1);
                beta[std::size_t(dre)] = N + i;
                beta[std::size_t(dim_)] = N + i;
                coef[dre] = std::cos(ang);
                coef[dim_] = std::sin(ang);
            }
        }
        for (int d = 0; d < dim; ++d)
            M1t.row(d) = beta[std::size_t(d)] >= 0
                             ? (coef[d] * H.row(beta[std::size_t(d)])).eval()
                             : Eigen::RowVectorXd::Zero(N + L).eval();
        for (int d = 0; d < dim; ++d)
            if (beta[std::size_t(d)] >= 0)
                S.col(d) += (coef[d] / nt) * M1t.col(beta[std::size_t(d)]);
    }
    for (int comp = N; comp < 2 * N; ++comp)
        for (int slot = 0; slot < b.n_harm(); ++slot) S(b.pidx(comp, slot), b.pidx(comp, slot)) += 1.0;
    return S;
}

Eigen::MatrixXd OperatorMatrix::weighted() const {
    return w_out.cwiseSqrt().asDiagonal() * A * w_in.cwiseSqrt().cwiseInverse().asDiagonal();
}

Eigen::MatrixXd OperatorMatrix::weighted_block(const std::vector<int>& rows,
                                               const std::vector<int>& cols) const {
    Eigen::MatrixXd B(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            B(Eigen::Index(r), Eigen::Index(c)) =
                std::sqrt(w_out[rows[r]]) * A(rows[r], cols[c]) / std::sqrt(w_in[cols[c]]);
    return B;
}

void ell_split(const OrbitContext& ctx, int ell, std::vector<int>& low, std::vector<int>& high) {
    const LoopBasis& b = ctx.basis;
    low.clear();
    high.clear();
    for (int comp = 0; comp < 2 * ctx.spec.N; ++comp)
        for (int slot = 0; slot < b.n_harm(); ++slot) low.push_back(b.pidx(comp, slot));
    for (std::size_t i = 0; i < ctx.modes.size(); ++i) {
        int ninf = 0;
        for (int c = 0; c < ctx.spec.N; ++c)
            ninf = std::max(ninf, std::abs(ctx.modes.lattice[i][std::size_t(c)]));
        auto& dst = (ninf <= ell) ? low : high;
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            dst.push_back(b.fidx(int(i), m, 0));
            dst.push_back(b.fidx(int(i), m, 1));
        }
    }
}

OperatorMatrix hessian_operator(const OrbitContext& ctx, const Eigen::VectorXd& x, int k,
                                double h_prime) {
    OperatorMatrix op;
    op.A = hessian_matrix(ctx, x);
    op.in_profile = {WeightKind::modified, k, h_prime};
    op.out_profile = {WeightKind::standard, k - 1, h_prime};
    op.w_in = weight_vector(ctx.basis, op.in_profile);
    op.w_out = weight_vector(ctx.basis, op.out_profile);
    return op;
}

OperatorMatrix assemble_linearization(const OrbitContext& ctx, const Eigen::VectorXd& x,
                                      int ell, int k, double h_prime) {
    OperatorMatrix op = hessian_operator(ctx, x, k, h_prime);
    op.A = idt_matrix(ctx.basis) - op.A;
    op.ell = ell;
    ell_split(ctx, ell, op.low_idx, op.high_idx);
    return op;
}

Orbit newton_orbit(const OrbitContext& ctx, const Eigen::VectorXd& init, double tol,
                   int max_iter, int k, double h_prime) {
    const LoopBasis& b = ctx.basis;
    Eigen::VectorXd w_in = weight_vector(b, {WeightKind::modified, k, h_prime});
    Eigen::VectorXd w_out = weight_vector(b, {WeightKind::standard, k - 1, h_prime});
    Eigen::VectorXd sq_out = w_out.cwiseSqrt();
    Eigen::VectorXd isq_in = w_in.cwiseSqrt().cwiseInverse();
    Orbit orb;
    orb.x = init;
    for (int it = 0;; ++it) {
        Eigen::VectorXd R = orbit_residual(ctx, orb.x);
        double rn = weighted_norm(w_out, R);
        orb.trail.push_back(rn);
        orb.residual_norm = rn;
        orb.iterations = it;
        if (rn < tol) {
            orb.converged = true;
            break;
        }
        if (it >= max_iter) break;
        Eigen::MatrixXd L = idt_matrix(b) - hessian_matrix(ctx, orb.x);
        Eigen::MatrixXd B = sq_out.asDiagonal() * L * isq_in.asDiagonal();
        Eigen::VectorXd rhs = -(sq_out.array() * apply_J(b, R).array());
        LstsqResult ls = solve_least_squares(B, rhs);
        orb.used_tikhonov = orb.used_tikhonov || ls.regularized;
        Eigen::VectorXd delta = isq_in.array() * ls.x.array();
        // Armijo backtracking on the output-norm residual
        double alpha = 1.0, best_rn = std::numeric_limits<double>::infinity(), best_alpha = 1.0;
        bool accepted = false;
        for (int hv = 0; hv <= 20; ++hv) {
            double rt = weighted_norm(w_out, orbit_residual(ctx, orb.x + alpha * delta));
            if (rt < best_rn) {
                best_rn = rt;
                best_alpha = alpha;
            }
            if (rt <= (1.0 - 1e-4 * alpha) * rn) {
                accepted = true;
                best_alpha = alpha;
                break;
            }
            alpha *= 0.5;
        }
        (void)accepted;
        orb.x += best_alpha * delta;
    }
    return orb;
}

NondegeneracyReport nondegeneracy_margin(const OrbitContext& ctx, const Orbit& u, int k,
                                         double h_prime, const std::vector<int>& ell_sweep,
                                         double threshold) {
    NondegeneracyReport rep;
    rep.threshold = threshold;
    OperatorMatrix L = assemble_linearization(ctx, u.x, ctx.modes.n_max, k, h_prime);
    Eigen::VectorXd sv = singular_values(L.weighted());
    rep.sigma_min = sv[sv.size() - 1];
    for (int ell : ell_sweep) {
        std::vector<int> low, high;
        ell_split(ctx, ell, low, high);
        Eigen::VectorXd s = singular_values(L.weighted_block(low, low));
        rep.ell_sweep.emplace_back(ell, s[s.size() - 1]);
    }
    // norm-equivalence diagnostics: the margin should not collapse under
    // admissible (k, h') changes
    const std::pair<int, double> variants[] = {{k, h_prime}, {k + 1, h_prime}, {k, h_prime + 0.5}};
    for (const auto& [kv, hv] : variants) {
        OperatorMatrix Lv = L;
        Lv.in_profile = {WeightKind::modified, kv, hv};
        Lv.out_profile = {WeightKind::standard, kv - 1, hv};
        Lv.w_in = weight_vector(ctx.basis, Lv.in_profile);
        Lv.w_out = weight_vector(ctx.basis, Lv.out_profile);
        Eigen::VectorXd s = singular_values(Lv.weighted());
        rep.kh_variants.push_back(s[s.size() - 1]);
    }
    ReturnMap rm = linearized_return_map(ctx, u);
    rep.return_distances = rm.distances;
    rep.min_return_distance = rm.distances.empty() ? 0.0 : rm.distances.front();
    rep.symplectic_defect = rm.symplectic_defect;
    for (std::size_t i = 0; i < ctx.modes.size(); ++i)
        rep.field_baseline.push_back(2.0 * std::abs(std::sin(ctx.basis.eps[i] * ctx.spec.T / 2.0)));
    rep.verdict = rep.sigma_min > threshold && rep.min_return_distance > threshold;
    return rep;
}

namespace {

Eigen::MatrixXd phase_J(int N, int L) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * N + 2 * L, 2 * N + 2 * L);
    for (int j = 0; j < N; ++j) {
        J(j, N + j) = -1.0;
        J(N + j, j) = 1.0;
    }
    for (int i = 0; i < L; ++i) {
        J(2 * N + 2 * i, 2 * N + 2 * i + 1) = -1.0;
        J(2 * N + 2 * i + 1, 2 * N + 2 * i) = 1.0;
    }
    return J;
}

// Twisted-frame Hessian of the generator at time t as a full phase-space
// matrix: Rot(t)^T HessF(Phi^A_t u(t), t) Rot(t).
Eigen::MatrixXd sigma_phase(const OrbitContext& ctx, const Eigen::VectorXd& x, double t) {
    const int N = ctx.spec.N;
    const int L = int(ctx.modes.size());
    const int P = 2 * N + 2 * L;
    LoopValue lv = eval_at(ctx.basis, x, t);
    Eigen::VectorXd q = lv.part.head(N);
    Eigen::VectorXd Xw(L);
    std::vector<double> cs(std::size_t(L), 0.0), sn(std::size_t(L), 0.0);
    for (int i = 0; i < L; ++i) {
        double la = ctx.lambda[std::size_t(i)];
        cs[std::size_t(i)] = std::cos(la * t);
        sn[std::size_t(i)] = std::sin(la * t);
        Xw[i] = (lv.field[i] * Cplx(cs[std::size_t(i)], -sn[std::size_t(i)])).real();
    }
    CouplingData cd = coupling_at(ctx, t, q, Xw, true);
    Eigen::MatrixXd Hact = active_hessian(ctx, cd);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(P, P);
    // embed: q rows stay, X_i -> 2N + 2i; p block identity; Y rows vanish
    auto row_of = [&](int a) { return a < N ? a : 2 * N + 2 * (a - N); };
    for (int a = 0; a < N + L; ++a)
        for (int bcol = 0; bcol < N + L; ++bcol) H(row_of(a), row_of(bcol)) = Hact(a, bcol);
    for (int j = 0; j < N; ++j) H(N + j, N + j) = 1.0;
    // conjugate by the per-mode rotation (X,Y) -> (cX + sY, -sX + cY)
    Eigen::MatrixXd R = Eigen::MatrixXd::Identity(P, P);
    for (int i = 0; i < L; ++i) {
        int bX = 2 * N + 2 * i;
        R(bX, bX) = cs[std::size_t(i)];
        R(bX, bX + 1) = sn[std::size_t(i)];
        R(bX + 1, bX) = -sn[std::size_t(i)];
        R(bX + 1, bX + 1) = cs[std::size_t(i)];
    }
    return R.transpose() * H * R;
}

}  // namespace

ReturnMap linearized_return_map(const OrbitContext& ctx, const Orbit& u, int n_steps) {
    const int N = ctx.spec.N;
    const int L = int(ctx.modes.size());
    const int P = 2 * N + 2 * L;
    const double T = ctx.spec.T, dt = T / n_steps;
    Eigen::MatrixXd J = phase_J(N, L);
    // variational equation Phi' = -J Sigma(t) Phi in the twisted frame
    auto K = [&](double t) { return (-J * sigma_phase(ctx, u.x, t)).eval(); };
    Eigen::MatrixXd Phi = Eigen::MatrixXd::Identity(P, P);
    Eigen::MatrixXd K0 = K(0.0);
    for (int s = 0; s < n_steps; ++s) {
        double t = dt * s;
        Eigen::MatrixXd Km = K(t + dt / 2.0);
        Eigen::MatrixXd K1 = K(t + dt);
        Eigen::MatrixXd k1 = K0 * Phi;
        Eigen::MatrixXd k2 = Km * (Phi + (dt / 2.0) * k1);
        Eigen::MatrixXd k3 = Km * (Phi + (dt / 2.0) * k2);
        Eigen::MatrixXd k4 = K1 * (Phi + dt * k3);
        Phi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        K0 = K1;
    }
    // compose with dPhi^A_T to land in the physical frame at time T
    Eigen::MatrixXd R = Eigen::MatrixXd::Identity(P, P);
    for (int i = 0; i < L; ++i) {
        double la = ctx.lambda[std::size_t(i)];
        int bX = 2 * N + 2 * i;
        R(bX, bX) = std::cos(la * T);
        R(bX, bX + 1) = std::sin(la * T);
        R(bX + 1, bX) = -std::sin(la * T);
        R(bX + 1, bX + 1) = std::cos(la * T);
    }
    ReturnMap rm;
    rm.M = R * Phi;
    rm.eigenvalues = dense_eigenvalues(rm.M);
    for (const auto& ev : rm.eigenvalues) rm.distances.push_back(std::abs(ev - 1.0));
    std::sort(rm.distances.begin(), rm.distances.end());
    rm.symplectic_defect = (rm.M.transpose() * J * rm.M - J).cwiseAbs().maxCoeff();
    return rm;
}

}  // namespace floerlab
