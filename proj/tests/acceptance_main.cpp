// Acceptance suite: one pass/fail line per criterion, exit nonzero if any
// criterion fails.  Each check is written against independently derived
// oracles (closed forms, perturbation theory, number-theoretic envelopes) or
// the documented quantitative thresholds.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <lapacke.h>

#include "floerlab/fredholm.hpp"
#include "floerlab/io.hpp"

using namespace floerlab;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%-22s] %s  %s\n", num, name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

ModelSpec wave_spec(double h = 6.0, double hp = 4.0, int k = 2) {
    ModelSpec s;
    s.kind = ModelKind::wave;
    s.a = 1;
    s.N = 1;
    s.T = 2.0 * kPi * 0.6180339887498949;
    s.h = h;
    s.h_prime = hp;
    s.k = k;
    return s;
}

CouplingSpec confined(double kappa, double amp = -0.5, int n_ext = 1) {
    CouplingSpec c = CouplingSpec::linear(kappa);
    CouplingSpec::ExtTerm e;
    e.n = {n_ext, 0, 0, 0};
    e.amp = amp;
    c.external.push_back(e);
    return c;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---- 1: isometry ------------------------------------------------------------

void criterion_1() {
    OrbitContext ctx = make_context(wave_spec(), 8, 32, confined(1e-2), 1.0);
    double worst = 0.0;
    bool pass = true;
    int idx = 0;
    for (auto [k, hp] : std::vector<std::pair<int, double>>{{2, 3.0}, {2, 4.5}, {3, 4.0}}) {
        VerificationReport r = verify_isometry(ctx, k, hp, 334, 100u + unsigned(idx++));
        pass = pass && r.pass;
        for (const auto& c : r.cases) worst = std::max(worst, c.value);
    }
    report(1, "isometry", pass && worst < 1e-12, "max rel deviation " + fmt(worst));
}

// ---- 2: small divisors ------------------------------------------------------

void criterion_2() {
    ModelSpec res;
    res.kind = ModelKind::schrodinger;
    res.N = 1;
    res.T = 2.0 * kPi;
    res.h = 6.0;
    res.h_prime = 4.0;
    ModeSet ms_res = build_lattice(res, 16);
    bool resonant = admissibility_profile(res, ms_res, {}).resonant;

    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    ModelSpec gm = res;
    gm.T = 2.0 * kPi * golden;
    ModeSet ms = build_lattice(gm, 2000);
    std::vector<double> eps = small_divisors_extended(gm, ms);
    double bound = 0.5 * (2.0 * kPi / gm.T) / std::sqrt(5.0);
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ms.size(); ++i)
        min_ratio = std::min(min_ratio, std::abs(eps[i]) * ms.abs2[i]);
    report(2, "small-divisors", resonant && min_ratio >= bound,
           "resonance@2pi " + std::string(resonant ? "detected" : "MISSED") +
               ", min |eps| n^2 = " + fmt(min_ratio) + " >= " + fmt(bound));
}

// ---- 3: wave Diophantine envelope -------------------------------------------

void criterion_3() {
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    ModelSpec w;
    w.kind = ModelKind::wave;
    w.a = 0;
    w.N = 1;
    w.T = 2.0 * kPi * std::sqrt(golden);  // T^2/(2pi)^2 golden
    w.h = 6.0;
    w.h_prime = 4.0;
    ModeSet ms = build_lattice(w, 1024);
    SpectrumReport rep = admissibility_profile(w, ms, {});
    // fitted exponent of shell-min |eps| vs theta is -fitted_h0
    report(3, "wave-envelope", !rep.resonant && rep.fitted_h0 <= 3.5,
           "fitted exponent " + fmt(-rep.fitted_h0) + " >= -3.5");
}

// ---- 4: unitarity and energy ------------------------------------------------

void criterion_4() {
    ModelSpec spec = wave_spec();
    ModeSet modes = build_lattice(spec, 8);
    std::vector<double> lambda = eigenvalues(spec, modes);
    ShapeFunction rho = ShapeFunction::gaussian(modes, 1.0);
    CouplingSpec coupling = confined(0.3);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    FieldVector v = FieldVector::zero(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        v.a[Eigen::Index(i)] = g(rng) * std::pow(modes.theta[i], -7.0);
        v.b[Eigen::Index(i)] = g(rng) * std::pow(modes.theta[i], -7.0);
    }
    double unit_dev = 0.0;
    for (double h : {0.5, 2.0, 6.0})
        for (double t : {0.3, 7.7, 123.0}) {
            double n0 = scale_norm(v, h, modes, lambda);
            double nt = scale_norm(linear_flow(v, t, lambda), h, modes, lambda);
            unit_dev = std::max(unit_dev, std::abs(nt - n0) / std::max(1e-300, n0));
        }

    PhasePoint u0;
    u0.q = Eigen::VectorXd::Constant(1, 0.4);
    u0.p = Eigen::VectorXd::Constant(1, 0.2);
    u0.field = v;
    const double t_end = 100.0 * spec.T;
    auto drift = [&](double dt) {
        PhasePoint u = u0;
        double e0 = hamiltonian(u, 0.0, coupling, spec, modes, lambda, rho);
        double worst = 0.0;
        int n = int(std::lround(t_end / dt));
        for (int s = 0; s < n; ++s) {
            u = strang_step(u, s * dt, dt, coupling, spec, modes, lambda, rho);
            worst = std::max(worst,
                             std::abs(hamiltonian(u, 0.0, coupling, spec, modes, lambda, rho) -
                                      e0));
        }
        return worst;
    };
    double d1 = drift(spec.T / 64.0), d2 = drift(spec.T / 128.0);
    double slope = std::log2(d1 / d2);
    report(4, "unitarity+energy",
           unit_dev < 1e-12 && std::abs(slope - 2.0) <= 0.2,
           "norm drift " + fmt(unit_dev) + ", Richardson slope " + fmt(slope));
}

// ---- 5: per-mode compact embedding ------------------------------------------

void criterion_5() {
    // h' = h0 + 1, h = h' + 2 with the Definition-2.1 floor h0 = 2d = 2
    ModelSpec spec = wave_spec(5.0, 3.0, 2);
    OrbitContext ctx = make_context(spec, 16, 64, confined(0.1), 1.0);
    VerificationReport rep = verify_inclusions(ctx, 2, 5.0, 3.0, {});
    bool pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& c : rep.cases)
        if (c.label.rfind("compact_embedding", 0) == 0) {
            pass = pass && c.pass;
            worst_margin = std::min(worst_margin, c.margin);
        }
    report(5, "compact-embedding", pass && rep.pass,
           "all lattice pairs bounded, worst margin " + fmt(worst_margin));
}

// ---- 6: orbit solver + perturbation oracle ----------------------------------

void criterion_6() {
    OrbitContext dec = make_context(wave_spec(), 8, 32, confined(0.0), 1.0);
    Orbit od = newton_orbit(dec, Eigen::VectorXd::Zero(dec.basis.dim()), 1e-11, 30, 2, 4.0);
    bool dec_ok = od.converged && od.residual_norm < 1e-10;

    const double kappa = 1e-2;
    OrbitContext ctx = make_context(wave_spec(), 8, 32, confined(kappa), 1.0);
    Orbit o = newton_orbit(ctx, Eigen::VectorXd::Zero(ctx.basis.dim()), 1e-11, 30, 2, 4.0);
    double worst_rel = 0.0;
    bool oracle_ok = o.converged;
    if (o.converged) {
        Eigen::VectorXd q(1);
        q[0] = o.x[ctx.basis.pidx(0, 0)];
        for (std::size_t i = 0; i < ctx.modes.size(); ++i) {
            double la = ctx.lambda[i];
            int M = int(std::lround(la * ctx.spec.T / (2.0 * kPi)));
            double predict = -kappa * ctx.rho.rho_hat[i] *
                             xi_value(ctx.modes.lattice[i], 1, q) / std::pow(la, 1.5);
            if (std::abs(predict) < 1e-14) continue;
            double got = o.x[ctx.basis.fidx(int(i), -M, 0)];
            worst_rel = std::max(worst_rel, std::abs(got - predict) / std::abs(predict));
        }
        oracle_ok = worst_rel <= 0.05;
    }
    report(6, "orbit-solver", dec_ok && oracle_ok,
           "decoupled residual " + fmt(od.residual_norm) + ", oracle rel error " +
               fmt(worst_rel));
}

// ---- 7: nondegeneracy equivalence -------------------------------------------

void criterion_7() {
    int cases = 0, agree = 0;
    double worst_baseline_dev = 0.0;
    bool saw_degenerate_control = false;
    const double thr = 1e-6;

    auto run_case = [&](const CouplingSpec& coupling, double T_scale, bool expect_degenerate) {
        ModelSpec spec = wave_spec();
        spec.T *= T_scale;
        OrbitContext ctx = make_context(spec, 3, 8, coupling, 1.0);
        Orbit o = newton_orbit(ctx, Eigen::VectorXd::Zero(ctx.basis.dim()), 1e-10, 30, 2, 4.0);
        if (!o.converged) return;
        NondegeneracyReport nd = nondegeneracy_margin(ctx, o, 2, 4.0, {2}, thr);
        ++cases;
        bool sigma_verdict = nd.sigma_min > thr;
        bool return_verdict = nd.min_return_distance > thr;
        if (sigma_verdict == return_verdict) ++agree;
        if (expect_degenerate && !sigma_verdict && !return_verdict)
            saw_degenerate_control = true;
        // decoupled cases: field return distances vs 2|sin(eps T/2)|
        if (coupling.kappa == 0.0)
            for (std::size_t i = 0; i < ctx.modes.size(); ++i) {
                double base = 2.0 * std::abs(std::sin(ctx.basis.eps[i] * spec.T / 2.0));
                double best = std::numeric_limits<double>::infinity();
                for (double d : nd.return_distances) best = std::min(best, std::abs(d - base));
                worst_baseline_dev = std::max(worst_baseline_dev, best);
            }
    };

    for (double amp : {-0.7, -0.5, -0.3, 0.5}) {
        run_case(confined(0.0, amp, 1), 1.0, false);
        run_case(confined(0.0, amp, 2), 1.0, false);
    }
    run_case(confined(0.0, -0.5, 1), 1.13, false);
    run_case(confined(1e-2, -0.5, 1), 1.0, false);
    run_case(CouplingSpec::linear(0.0), 1.0, true);  // free particle: degenerate

    report(7, "nondegeneracy-equiv",
           cases >= 10 && agree == cases && saw_degenerate_control &&
               worst_baseline_dev < 1e-8,
           std::to_string(agree) + "/" + std::to_string(cases) +
               " verdicts agree, baseline dev " + fmt(worst_baseline_dev));
}

// ---- 8: dbar kernel solver --------------------------------------------------

void criterion_8() {
    OrbitContext ctx = make_context(wave_spec(), 2, 3, confined(0.1), 1.0);
    const LoopBasis& b = ctx.basis;
    const int ns = 33;
    const double S0 = 4.0, ds = 2.0 * S0 / (ns - 1);
    std::mt19937_64 rng(8);
    double worst_res = 0.0, worst_young = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd g(b.dim(), ns);
        for (int j = 0; j < ns; ++j) {
            double s = -S0 + j * ds;
            g.col(j) = std::exp(-0.5 * s * s) * random_loop(b, rng);
        }
        for (int comp = 0; comp < 2; ++comp) g.row(b.pidx(comp, 0)).setZero();
        Eigen::MatrixXd f0 = dbar_solve(b, g, ds, ZeroModePolicy::reject);
        auto A = [&](const Eigen::VectorXd& y) {
            Eigen::MatrixXd Y = Eigen::Map<const Eigen::MatrixXd>(y.data(), b.dim(), ns);
            Eigen::MatrixXd X = dbar_solve(b, Y, ds, ZeroModePolicy::identity);
            Eigen::MatrixXd R = dbar_apply(b, X, ds);
            return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(R.data(), R.size()));
        };
        GmresResult gm =
            gmres(A, Eigen::Map<Eigen::VectorXd>(g.data(), g.size()), 120, 1200, 1e-10);
        Eigen::MatrixXd f =
            dbar_solve(b, Eigen::Map<const Eigen::MatrixXd>(gm.x.data(), b.dim(), ns), ds,
                       ZeroModePolicy::identity);
        worst_res = std::max(worst_res, (dbar_apply(b, f, ds) - g).norm() / g.norm());
        for (std::size_t i = 0; i < ctx.modes.size(); ++i)
            for (int m = -b.m_max; m <= b.m_max; ++m) {
                double mu = b.mu(int(i), m);
                double fn = std::sqrt(ds * (f0.row(b.fidx(int(i), m, 0)).squaredNorm() +
                                            f0.row(b.fidx(int(i), m, 1)).squaredNorm()));
                double gn = std::sqrt(ds * (g.row(b.fidx(int(i), m, 0)).squaredNorm() +
                                            g.row(b.fidx(int(i), m, 1)).squaredNorm()));
                if (gn > 0.0) worst_young = std::max(worst_young, std::abs(mu) * fn / gn);
            }
    }
    report(8, "dbar-solver", worst_res < 1e-8 && worst_young <= 1.0 + 1e-9,
           "worst refined residual " + fmt(worst_res) + ", worst Young ratio " +
               fmt(worst_young));
}

// ---- 9: tail decay ----------------------------------------------------------

void criterion_9() {
    // Gaussian rho sigma=0.5, linear coupling, h = h0 + 2 = 4
    ModelSpec spec = wave_spec(4.0, 3.0, 2);
    OrbitContext ctx = make_context(spec, 40, 8, CouplingSpec::linear(1.0), 0.5);
    Orbit o = newton_orbit(ctx, Eigen::VectorXd::Zero(ctx.basis.dim()), 1e-10, 30, 2, 3.0);
    bool pass = o.converged;
    std::string detail = "orbit diverged";
    if (pass) {
        VerificationReport rep = tail_decay_profile(ctx, o.x, {4, 8, 16, 32}, 4.0, 2, 3.0);
        std::vector<double> seq;
        for (const auto& c : rep.cases)
            if (c.label.find("endo_k_scaled") != std::string::npos) seq.push_back(c.value);
        pass = seq.size() == 4;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) pass = pass && seq[i + 1] < seq[i];
        std::ostringstream os;
        os << "scaled sequence";
        for (double v : seq) os << " " << fmt(v);
        detail = os.str();
    }
    report(9, "tail-decay", pass, detail);
}

// ---- 10: stars, semi-Fredholm stability, kernels ----------------------------

FloerCurve constant_curve(const Eigen::VectorXd& x, int ns, double S0) {
    FloerCurve c;
    c.u.s_half_width = S0;
    c.u.slices = x.replicate(1, ns);
    c.u_minus = x;
    c.u_plus = x;
    return c;
}

void criterion_10() {
    const double kappa = 1e-2;
    ModelSpec spec = wave_spec();
    std::ostringstream detail;

    // (a) star inequalities at some ell <= n_max/2
    OrbitContext ctx = make_context(spec, 8, 32, confined(kappa), 1.0);
    Orbit o = newton_orbit(ctx, Eigen::VectorXd::Zero(ctx.basis.dim()), 1e-11, 30, 2, 4.0);
    bool stars_ok = o.converged;
    if (stars_ok) {
        VerificationReport rep = verify_star_inequalities(ctx, o.x, {1, 2, 3, 4}, 2, 4.0);
        double smallest = -1.0;
        for (const auto& m : rep.metrics)
            if (m.first == "smallest_passing_ell") smallest = m.second;
        stars_ok = rep.pass && smallest >= 1.0 && smallest <= 4.0;
        detail << "stars ell=" << smallest;
    }

    // (b) c4 stability under ds and m_max halving (same seed throughout)
    auto c4_of = [&](int m_max, double ds) {
        OrbitContext c = make_context(spec, 8, m_max, confined(kappa), 1.0);
        Orbit ob = newton_orbit(c, Eigen::VectorXd::Zero(c.basis.dim()), 1e-11, 30, 2, 4.0);
        if (!ob.converged) return -1.0;
        int half = int(std::lround(8.0 / ds));
        VerificationReport rep = semifredholm_constant(
            c, constant_curve(ob.x, 2 * half + 1, 8.0), 4, 2, 4.0, 8, 77u);
        for (const auto& m : rep.metrics)
            if (m.first == "c4") return m.second;
        return -1.0;
    };
    double c4_base = c4_of(32, 0.25);      // 64 interior s-nodes
    double c4_fine = c4_of(32, 0.125);     // ds halved
    double c4_half_m = c4_of(16, 0.25);    // m_max halved
    bool c4_ok = c4_base > 0.0 && c4_fine > 0.0 && c4_half_m > 0.0 &&
                 std::abs(c4_fine - c4_base) <= 0.05 * c4_base &&
                 std::abs(c4_half_m - c4_base) <= 0.05 * c4_base;
    detail << ", c4 " << fmt(c4_base) << "/" << fmt(c4_fine) << "/" << fmt(c4_half_m);

    // (c) trivial kernel at the nondegenerate constant curve
    KernelReport kr = adjoint_kernel_dim(ctx, constant_curve(o.x, 65, 8.0), 2, 4.0);
    bool ker0_ok = kr.dim_ker == 0 && kr.dim_coker == 0;
    detail << ", ker(const)=(" << kr.dim_ker << "," << kr.dim_coker << ")";

    // (d) translation kernel along a particle heteroclinic between the two
    // wells of V = 0.3 cos 2q (orbits at q* = pi/2 and q* = 0).  Zero
    // coupling keeps the field frozen; the t-independent Floer equation
    // reduces to ds q = -0.6 sin 2q with the exact connecting profile
    // q(s) = atan(exp(-1.2 s)).  Dense SVD cannot resolve the translation
    // mode below the 1e-8 * sigma_max kernel threshold at coarse ds, so the
    // claim is certified constructively on a fine grid: the q-sector of the
    // linearization is the scalar tridiagonal operator
    // (v_{j+1} - v_{j-1})/(2 ds) + 1.2 cos(2 q_j) v_j, whose smallest
    // singular vector comes from inverse iteration with dgtsv solves (the
    // coefficient is exactly odd in s, so the symmetric grid retains an
    // exact discrete kernel); the vector is then re-measured through the
    // library operator in the declared weighted norms.  Exhibiting a unit
    // vector with ||D v|| <= cut proves dim ker >= 1 at that threshold.
    CouplingSpec hc = CouplingSpec::linear(0.0);
    {
        CouplingSpec::ExtTerm e;
        e.n = {2, 0, 0, 0};
        e.amp = 0.3;
        hc.external.push_back(e);
    }
    OrbitContext hx = make_context(spec, 1, 1, hc, 1.0);
    const LoopBasis& hb = hx.basis;
    Orbit top = newton_orbit(hx, Eigen::VectorXd::Zero(hb.dim()), 1e-12, 30, 2, 4.0);
    Eigen::VectorXd init1 = Eigen::VectorXd::Zero(hb.dim());
    init1[hb.pidx(0, 0)] = kPi / 2.0;
    Orbit bottom = newton_orbit(hx, init1, 1e-12, 30, 2, 4.0);
    bool het_ok = top.converged && bottom.converged;
    int het_ker = 0;
    double het_res = -1.0, het_ratio = -1.0, het_cut = 0.0;
    if (het_ok) {
        const double S0 = 24.0, hds = 5e-4;
        const int ns = 2 * int(std::lround(S0 / hds)) + 1;
        const int M = ns - 2, Dh = hb.dim();
        FloerCurve cur;
        cur.u.s_half_width = S0;
        cur.u.slices = Eigen::MatrixXd::Zero(Dh, ns);
        cur.u_minus = bottom.x;
        cur.u_plus = top.x;
        Eigen::VectorXd acoef(M), x(M);
        for (int j = 0; j < ns; ++j) {
            double q = std::atan(std::exp(-1.2 * (-S0 + j * hds)));
            cur.u.slices(hb.pidx(0, 0), j) = q;
            if (j >= 1 && j <= M) {
                acoef[j - 1] = 1.2 * std::cos(2.0 * q);
                x[j - 1] = -0.6 * std::sin(2.0 * q);
            }
        }
        het_res = strip_norm_standard(hb, floer_residual(hx, cur), hds, 1, 4.0);
        // inverse iteration on T^T T via two tridiagonal solves per sweep
        const double off = 1.0 / (2.0 * hds);
        auto trisolve = [&](double lo, double hi, Eigen::VectorXd rhs) {
            Eigen::VectorXd dl = Eigen::VectorXd::Constant(M - 1, lo);
            Eigen::VectorXd dd = acoef;
            Eigen::VectorXd du = Eigen::VectorXd::Constant(M - 1, hi);
            LAPACKE_dgtsv(LAPACK_COL_MAJOR, M, 1, dl.data(), dd.data(), du.data(),
                          rhs.data(), M);
            return rhs;
        };
        x.normalize();
        for (int it = 0; it < 15; ++it)
            x = trisolve(-off, off, trisolve(off, -off, x)).normalized();
        std::vector<SliceCache> caches;
        caches.reserve(M);
        for (int j = 1; j <= M; ++j)
            caches.push_back(make_slice_cache(hx, cur.u.slices.col(j)));
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(Dh, M);
        for (int j = 0; j < M; ++j) v(hb.pidx(0, 0), j) = x[j];
        Eigen::MatrixXd Dv = floer_linearization_apply(hx, caches, v, hds);
        het_ratio = strip_norm_standard(hb, Dv, hds, 1, 4.0) /
                    strip_norm_modified(hb, v, hds, 2, 4.0);
        // sigma_max lower bound from random decaying strip variations
        std::mt19937_64 rng(99);
        double smax_lb = 0.0;
        for (int t = 0; t < 12; ++t) {
            Eigen::MatrixXd w = Eigen::MatrixXd::Zero(Dh, M);
            Eigen::VectorXd dir = random_loop(hb, rng);
            for (int j = 0; j < M; ++j) {
                double s = -S0 + (j + 1) * hds;
                w.col(j) = dir * std::exp(-0.5 * s * s);
            }
            double r =
                strip_norm_standard(hb, floer_linearization_apply(hx, caches, w, hds),
                                    hds, 1, 4.0) /
                strip_norm_modified(hb, w, hds, 2, 4.0);
            smax_lb = std::max(smax_lb, r);
        }
        het_cut = 1e-8 * smax_lb;
        double midq = cur.u.slices(hb.pidx(0, 0), ns / 2);
        bool nontrivial = midq > 0.1 && midq < kPi / 2.0 - 0.1;
        het_ker = (het_ratio < het_cut) ? 1 : 0;
        het_ok = het_res < 1e-6 && nontrivial && het_ker >= 1;
    }
    detail << ", heteroclinic res=" << fmt(het_res) << " ratio=" << fmt(het_ratio)
           << " cut=" << fmt(het_cut) << " ker>=" << het_ker;

    report(10, "stars+semifredholm", stars_ok && c4_ok && ker0_ok && het_ok, detail.str());
}

// ---- 11: determinism --------------------------------------------------------

void criterion_11() {
    const char* bin = std::getenv("FLOERLAB_BIN");
    namespace fs = std::filesystem;
    bool pass = false;
    std::string detail;
    if (bin) {
        fs::path dir = fs::temp_directory_path() / "floerlab_accept";
        fs::create_directories(dir);
        fs::path cfg = dir / "cfg.json";
        std::ofstream(cfg) << R"({"model":"wave","N":1,"a":1,"n_max":4,"m_max":8,"h":6.0,)"
                              R"("h_prime":4.0,"k":2,"sigma":1.0,)"
                              R"("coupling":{"kappa":0.01,"poly":[{"c0":0.0},{"c0":1.0}],)"
                              R"("external":[{"n":[1],"m":0,"amp":-0.5}]}})";
        auto run = [&](const std::string& out) {
            std::string cmd = std::string(bin) + " verify --suite stars --seed 7 --config " +
                              cfg.string() + " --out " + (dir / out).string() +
                              " >/dev/null 2>&1";
            return std::system(cmd.c_str());
        };
        int r1 = run("a"), r2 = run("b");
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream os;
            os << in.rdbuf();
            return os.str();
        };
        std::string ja = slurp(dir / "a" / "verify_stars.json");
        std::string jb = slurp(dir / "b" / "verify_stars.json");
        std::string ca = slurp(dir / "a" / "verify_stars_trend.csv");
        std::string cb = slurp(dir / "b" / "verify_stars_trend.csv");
        pass = r1 == 0 && r2 == 0 && !ja.empty() && ja == jb && ca == cb;
        detail = "CLI reruns byte-identical: " + std::string(pass ? "yes" : "NO");
    } else {
        // fall back to in-process byte comparison of serialized reports
        OrbitContext ctx = make_context(wave_spec(), 4, 8, confined(1e-2), 1.0);
        Orbit o = newton_orbit(ctx, Eigen::VectorXd::Zero(ctx.basis.dim()), 1e-10, 30, 2, 4.0);
        auto once = [&]() {
            return verification_to_json(verify_star_inequalities(ctx, o.x, {1, 2}, 2, 4.0),
                                        nlohmann::json::object())
                .dump();
        };
        std::string a = once(), b = once();
        pass = !a.empty() && a == b;
        detail = "in-process reruns byte-identical: " + std::string(pass ? "yes" : "NO");
    }
    report(11, "determinism", pass, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}
