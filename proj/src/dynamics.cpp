#include "floerlab/dynamics.hpp"

#include <cmath>

namespace floerlab {

namespace {
double dotq(const Mode& n, int N, const Eigen::VectorXd& q) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += n[i] * q[i];
    return s;
}
}  // namespace

Eigen::VectorXcd u_hat(const FieldVector& v, const std::vector<double>& lambda) {
    Eigen::VectorXcd u(v.a.size());
    for (Eigen::Index i = 0; i < v.a.size(); ++i)
        u[i] = std::sqrt(lambda[std::size_t(i)] / 2.0) * Cplx(v.a[i], v.b[i]);
    return u;
}

double scale_norm(const FieldVector& v, double h, const ModeSet& modes,
                  const std::vector<double>& lambda) {
    std::vector<double> terms(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        double u2 = lambda[i] / 2.0 * (v.a[Eigen::Index(i)] * v.a[Eigen::Index(i)] +
                                       v.b[Eigen::Index(i)] * v.b[Eigen::Index(i)]);
        terms[i] = std::pow(modes.theta[i], 2.0 * h) * u2;
    }
    return std::sqrt(pairwise_sum(terms.data(), terms.size()));
}

// ---- real basis -------------------------------------------------------------

double xi_value(const Mode& n, int N, const Eigen::VectorXd& q) {
    const double vol = std::pow(2.0 * kPi, 0.5 * N);
    int s = mode_sign(n, N);
    if (s == 0) return 1.0 / vol;
    const double c = std::sqrt(2.0) / vol;
    if (s > 0) return c * std::cos(dotq(n, N, q));
    Mode m = n;
    for (int i = 0; i < N; ++i) m[i] = -m[i];
    return c * std::sin(dotq(m, N, q));
}

Eigen::VectorXd xi_grad(const Mode& n, int N, const Eigen::VectorXd& q) {
    const double vol = std::pow(2.0 * kPi, 0.5 * N);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
    int s = mode_sign(n, N);
    if (s == 0) return g;
    const double c = std::sqrt(2.0) / vol;
    if (s > 0) {
        double d = -c * std::sin(dotq(n, N, q));
        for (int i = 0; i < N; ++i) g[i] = d * n[i];
    } else {
        Mode m = n;
        for (int i = 0; i < N; ++i) m[i] = -m[i];
        double d = c * std::cos(dotq(m, N, q));
        for (int i = 0; i < N; ++i) g[i] = d * m[i];
    }
    return g;
}

Eigen::MatrixXd xi_hess(const Mode& n, int N, const Eigen::VectorXd& q) {
    // second derivative multiplies by -(n n^T) for either trig branch
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    int s = mode_sign(n, N);
    if (s == 0) return H;
    double v = xi_value(n, N, q);
    const Mode& m = n;  // n n^T is sign-invariant
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) H(i, j) = -v * m[i] * m[j];
    return H;
}

// ---- shape function ---------------------------------------------------------

ShapeFunction ShapeFunction::gaussian(const ModeSet& modes, double sigma) {
    ShapeFunction s;
    s.sigma = sigma;
    s.rho_hat.resize(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        s.rho_hat[i] = std::exp(-sigma * sigma * modes.abs2[i] / 2.0);
    return s;
}

// ---- coupling ---------------------------------------------------------------

double FourierCoeff::eval(double t, double T) const {
    double v = c0;
    for (std::size_t m = 0; m < harm.size(); ++m) {
        double ph = 2.0 * kPi * double(m + 1) * t / T;
        v += harm[m].first * std::cos(ph) + harm[m].second * std::sin(ph);
    }
    return v;
}

double CouplingSpec::f(double r, double t, double T) const {
    double v = 0.0, rp = 1.0;
    for (const auto& c : poly) {
        v += c.eval(t, T) * rp;
        rp *= r;
    }
    if (atan_amp != 0.0) v += atan_amp * std::atan(r);
    return kappa * v;
}

double CouplingSpec::df(double r, double t, double T) const {
    double v = 0.0, rp = 1.0;
    for (std::size_t j = 1; j < poly.size(); ++j) {
        v += double(j) * poly[j].eval(t, T) * rp;
        rp *= r;
    }
    if (atan_amp != 0.0) v += atan_amp / (1.0 + r * r);
    return kappa * v;
}

double CouplingSpec::d2f(double r, double t, double T) const {
    double v = 0.0, rp = 1.0;
    for (std::size_t j = 2; j < poly.size(); ++j) {
        v += double(j) * double(j - 1) * poly[j].eval(t, T) * rp;
        rp *= r;
    }
    if (atan_amp != 0.0) v -= atan_amp * 2.0 * r / ((1.0 + r * r) * (1.0 + r * r));
    return kappa * v;
}

double CouplingSpec::v_ext(double t, const Eigen::VectorXd& q, int N, double T) const {
    double v = 0.0;
    for (const auto& e : external) {
        double phx = dotq(e.n, N, q);
        double pht = 2.0 * kPi * e.m * t / T;
        v += e.amp * (e.cos_x ? std::cos(phx) : std::sin(phx)) *
             (e.cos_t ? std::cos(pht) : std::sin(pht));
    }
    return v;
}

Eigen::VectorXd CouplingSpec::v_ext_grad(double t, const Eigen::VectorXd& q, int N,
                                         double T) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
    for (const auto& e : external) {
        double phx = dotq(e.n, N, q);
        double pht = 2.0 * kPi * e.m * t / T;
        double d = e.amp * (e.cos_x ? -std::sin(phx) : std::cos(phx)) *
                   (e.cos_t ? std::cos(pht) : std::sin(pht));
        for (int i = 0; i < N; ++i) g[i] += d * e.n[i];
    }
    return g;
}

Eigen::MatrixXd CouplingSpec::v_ext_hess(double t, const Eigen::VectorXd& q, int N,
                                         double T) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    for (const auto& e : external) {
        double phx = dotq(e.n, N, q);
        double pht = 2.0 * kPi * e.m * t / T;
        double d = -e.amp * (e.cos_x ? std::cos(phx) : std::sin(phx)) *
                   (e.cos_t ? std::cos(pht) : std::sin(pht));
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) H(i, j) += d * e.n[i] * e.n[j];
    }
    return H;
}

bool CouplingSpec::autonomous() const {
    for (const auto& c : poly)
        for (const auto& hm : c.harm)
            if (hm.first != 0.0 || hm.second != 0.0) return false;
    for (const auto& e : external)
        if (e.m != 0 || !e.cos_t) return false;
    return true;
}

CouplingSpec CouplingSpec::linear(double kappa) {
    CouplingSpec c;
    c.kappa = kappa;
    c.poly.resize(2);
    c.poly[1].c0 = 1.0;
    return c;
}

// ---- operations -------------------------------------------------------------

FieldVector linear_flow(const FieldVector& v, double t, const std::vector<double>& lambda) {
    FieldVector out;
    out.a.resize(v.a.size());
    out.b.resize(v.b.size());
    for (Eigen::Index i = 0; i < v.a.size(); ++i) {
        double c = std::cos(lambda[std::size_t(i)] * t), s = std::sin(lambda[std::size_t(i)] * t);
        out.a[i] = c * v.a[i] + s * v.b[i];
        out.b[i] = -s * v.a[i] + c * v.b[i];
    }
    return out;
}

ConvolutionValue shape_convolution(const FieldVector& field, const ShapeFunction& rho,
                                   const Eigen::VectorXd& q, const ModeSet& modes,
                                   bool with_hess) {
    ConvolutionValue cv;
    cv.grad = Eigen::VectorXd::Zero(modes.N);
    if (with_hess) cv.hess = Eigen::MatrixXd::Zero(modes.N, modes.N);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        double w = field.a[Eigen::Index(i)] * rho.rho_hat[i];
        if (w == 0.0) continue;
        cv.r += w * xi_value(modes.lattice[i], modes.N, q);
        cv.grad += w * xi_grad(modes.lattice[i], modes.N, q);
        if (with_hess) cv.hess += w * xi_hess(modes.lattice[i], modes.N, q);
    }
    return cv;
}

double hamiltonian(const PhasePoint& u, double t, const CouplingSpec& coupling,
                   const ModelSpec& spec, const ModeSet& modes,
                   const std::vector<double>& lambda, const ShapeFunction& rho) {
    std::vector<double> terms(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        terms[i] = 0.5 * lambda[i] * lambda[i] *
                   (u.field.a[Eigen::Index(i)] * u.field.a[Eigen::Index(i)] +
                    u.field.b[Eigen::Index(i)] * u.field.b[Eigen::Index(i)]);
    double e = pairwise_sum(terms.data(), terms.size());
    e += 0.5 * u.p.squaredNorm();
    e += coupling.v_ext(t, u.q, spec.N, spec.T);
    ConvolutionValue cv = shape_convolution(u.field, rho, u.q, modes);
    e += coupling.f(cv.r, t, spec.T);
    return e;
}

Tangent vector_field(const PhasePoint& u, double t, const CouplingSpec& coupling,
                     const ModelSpec& spec, const ModeSet& modes,
                     const std::vector<double>& lambda, const ShapeFunction& rho) {
    Tangent v;
    ConvolutionValue cv = shape_convolution(u.field, rho, u.q, modes);
    double fp = coupling.df(cv.r, t, spec.T);
    v.dq = u.p;
    v.dp = -fp * cv.grad - coupling.v_ext_grad(t, u.q, spec.N, spec.T);
    v.dfield.a.resize(u.field.a.size());
    v.dfield.b.resize(u.field.b.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        double la = lambda[i];
        v.dfield.a[Eigen::Index(i)] = la * u.field.b[Eigen::Index(i)];
        v.dfield.b[Eigen::Index(i)] =
            -la * u.field.a[Eigen::Index(i)] -
            fp * rho.rho_hat[i] * xi_value(modes.lattice[i], modes.N, u.q) / la;
    }
    return v;
}

namespace {
// Kick: p and b updated from the interaction/potential gradients with (q, a)
// frozen; exactly integrable because r = r(q, a) is constant along it.
void kick(PhasePoint& u, double t, double dt, const CouplingSpec& coupling,
          const ModelSpec& spec, const ModeSet& modes, const std::vector<double>& lambda,
          const ShapeFunction& rho) {
    ConvolutionValue cv = shape_convolution(u.field, rho, u.q, modes);
    double fp = coupling.df(cv.r, t, spec.T);
    u.p -= dt * (fp * cv.grad + coupling.v_ext_grad(t, u.q, spec.N, spec.T));
    for (std::size_t i = 0; i < modes.size(); ++i)
        u.field.b[Eigen::Index(i)] -=
            dt * fp * rho.rho_hat[i] * xi_value(modes.lattice[i], modes.N, u.q) / lambda[i];
}
}  // namespace

PhasePoint strang_step(const PhasePoint& u0, double t, double dt, const CouplingSpec& coupling,
                       const ModelSpec& spec, const ModeSet& modes,
                       const std::vector<double>& lambda, const ShapeFunction& rho) {
    PhasePoint u = u0;
    kick(u, t, dt / 2.0, coupling, spec, modes, lambda, rho);
    u.q += dt * u.p;
    for (int i = 0; i < u.q.size(); ++i)
        u.q[i] = u.q[i] - 2.0 * kPi * std::floor(u.q[i] / (2.0 * kPi));
    u.field = linear_flow(u.field, dt, lambda);
    kick(u, t + dt, dt / 2.0, coupling, spec, modes, lambda, rho);
    return u;
}

GrowthReport check_growth_conditions(const CouplingSpec& coupling, const ModelSpec& spec,
                                     double q_box, double p_box, double r_box, int grid_n) {
    GrowthReport rep;
    const int N = spec.N;
    // Sample F_part = |p|^2/2 + V_ext over (t, q, p); 1-D sweeps per component
    // are enough for the finite trig series used here.
    double vmax = 0.0, c2 = 0.0;
    for (int it = 0; it <= grid_n; ++it) {
        double t = spec.T * it / grid_n;
        for (int iq = 0; iq <= grid_n; ++iq) {
            Eigen::VectorXd q = Eigen::VectorXd::Constant(N, q_box * iq / grid_n);
            double V = coupling.v_ext(t, q, N, spec.T);
            vmax = std::max(vmax, V);
            double gq = coupling.v_ext_grad(t, q, N, spec.T).norm();
            for (int ip = 0; ip <= grid_n; ++ip) {
                double pn = -p_box + 2.0 * p_box * ip / grid_n;
                // grad_q F = grad V; grad_p F = p
                c2 = std::max(c2, gq / (1.0 + pn * pn));
                c2 = std::max(c2, std::abs(pn) / (1.0 + std::abs(pn)));
            }
        }
    }
    rep.c0 = 0.5;
    rep.c1 = std::max(0.0, vmax);
    // margin of (F1) at the fitted constants: (|p|^2/2 - V) - (c0|p|^2 - c1) = c1 - V >= 0
    rep.worst_margin_f1 = rep.c1 - vmax;
    rep.f1_pass = rep.worst_margin_f1 >= -1e-12;
    rep.c2 = c2;
    rep.f2_pass = std::isfinite(c2);
    // (F3): sup |df/dr| over [-r_box, r_box] x one period
    double sup = 0.0;
    for (int it = 0; it <= grid_n; ++it) {
        double t = spec.T * it / grid_n;
        for (int ir = 0; ir <= grid_n; ++ir) {
            double r = -r_box + 2.0 * r_box * ir / grid_n;
            sup = std::max(sup, std::abs(coupling.df(r, t, spec.T)));
        }
    }
    rep.f3_sup = sup;
    // structurally bounded iff no polynomial term of degree >= 2
    rep.f3_bounded = true;
    for (std::size_t j = 2; j < coupling.poly.size(); ++j) {
        const auto& c = coupling.poly[j];
        bool nonzero = c.c0 != 0.0;
        for (auto& hm : c.harm) nonzero = nonzero || hm.first != 0.0 || hm.second != 0.0;
        if (nonzero) rep.f3_bounded = false;
    }
    return rep;
}

}  // namespace floerlab
