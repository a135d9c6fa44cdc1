#include "floerlab/basis.hpp"

#include <cmath>

namespace floerlab {

LoopBasis make_loop_basis(const ModelSpec& spec, const ModeSet& modes, int m_max) {
    if (m_max < 1) throw ValidationError("m_max", "must be >= 1");
    LoopBasis b;
    b.spec = spec;
    b.modes = modes;
    b.m_max = m_max;
    b.lambda = eigenvalues(spec, modes);
    b.eps = small_divisors(b.lambda, spec.T);
    return b;
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

Eigen::VectorXd weight_vector(const LoopBasis& b, const NormProfile& prof) {
    Eigen::VectorXd w(b.dim());
    const int k = prof.k;
    // Particle block: standard H^k weights in both families (the finite factor
    // is never modified; only the small-divisor tail needs repair).
    for (int comp = 0; comp < 2 * b.spec.N; ++comp)
        for (int slot = 0; slot < b.n_harm(); ++slot) {
            double om = b.omega(LoopBasis::slot_m(slot));
            w[b.pidx(comp, slot)] = std::pow(om, 2 * k) + 1.0;
        }
    for (std::size_t i = 0; i < b.modes.size(); ++i) {
        double th = std::pow(b.modes.theta[i], 2.0 * prof.h_prime);
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            double mu = b.mu(int(i), m);
            double wm = (prof.kind == WeightKind::standard)
                            ? std::pow(mu, 2 * k) + 1.0
                            : std::pow(mu, 2 * k) + mu * mu;
            w[b.fidx(int(i), m, 0)] = th * wm;
            w[b.fidx(int(i), m, 1)] = th * wm;
        }
    }
    return w;
}

double weighted_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& xi) {
    Eigen::VectorXd terms = w.array() * xi.array().square();
    return std::sqrt(pairwise_sum(terms.data(), std::size_t(terms.size())));
}

double loop_norm_standard(const LoopBasis& b, const Eigen::VectorXd& xi, int k, double h_prime) {
    return weighted_norm(weight_vector(b, {WeightKind::standard, k, h_prime}), xi);
}

double loop_norm_modified(const LoopBasis& b, const Eigen::VectorXd& xi, int k, double h_prime) {
    return weighted_norm(weight_vector(b, {WeightKind::modified, k, h_prime}), xi);
}

Eigen::VectorXd idt_isometry_diagonal(const LoopBasis& b, int k) {
    Eigen::VectorXd d(b.dim());
    for (int comp = 0; comp < 2 * b.spec.N; ++comp)
        for (int slot = 0; slot < b.n_harm(); ++slot) {
            double om = b.omega(LoopBasis::slot_m(slot));
            d[b.pidx(comp, slot)] =
                std::sqrt((std::pow(om, 2 * k) + 1.0) / (std::pow(om, 2 * (k - 1)) + 1.0));
        }
    for (std::size_t i = 0; i < b.modes.size(); ++i)
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            double mu = b.mu(int(i), m);
            d[b.fidx(int(i), m, 0)] = mu;
            d[b.fidx(int(i), m, 1)] = mu;
        }
    return d;
}

Eigen::VectorXd apply_J(const LoopBasis& b, const Eigen::VectorXd& xi) {
    Eigen::VectorXd out(b.dim());
    const int N = b.spec.N;
    for (int j = 0; j < N; ++j)
        for (int slot = 0; slot < b.n_harm(); ++slot) {
            out[b.pidx(j, slot)] = -xi[b.pidx(N + j, slot)];
            out[b.pidx(N + j, slot)] = xi[b.pidx(j, slot)];
        }
    for (std::size_t i = 0; i < b.modes.size(); ++i)
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            out[b.fidx(int(i), m, 0)] = -xi[b.fidx(int(i), m, 1)];
            out[b.fidx(int(i), m, 1)] = xi[b.fidx(int(i), m, 0)];
        }
    return out;
}

Eigen::MatrixXd idt_matrix(const LoopBasis& b) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(b.dim(), b.dim());
    const int N = b.spec.N;
    // Particle factor: J o d/dt on the (q_j, p_j) x (cos, sin) 4-blocks.
    for (int j = 0; j < N; ++j)
        for (int m = 1; m <= b.m_max; ++m) {
            double om = b.omega(m);
            int qc = b.pidx(j, 2 * m - 1), qs = b.pidx(j, 2 * m);
            int pc = b.pidx(N + j, 2 * m - 1), ps = b.pidx(N + j, 2 * m);
            // d/dt: cos -> -om sin, sin -> om cos; then J: (dq,dp) -> (-dp,dq)
            A(qc, ps) = -om;
            A(qs, pc) = om;
            A(pc, qs) = om;
            A(ps, qc) = -om;
        }
    for (std::size_t i = 0; i < b.modes.size(); ++i)
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            double mu = b.mu(int(i), m);
            A(b.fidx(int(i), m, 0), b.fidx(int(i), m, 0)) = mu;
            A(b.fidx(int(i), m, 1), b.fidx(int(i), m, 1)) = mu;
        }
    return A;
}

NodeValues loop_eval_nodes(const LoopBasis& b, const Eigen::VectorXd& xi, int nt) {
    NodeValues nv;
    const int N = b.spec.N;
    const std::size_t L = b.modes.size();
    nv.part = Eigen::MatrixXd::Zero(2 * N, nt);
    nv.field = Eigen::MatrixXcd::Zero(Eigen::Index(L), nt);
    const double T = b.spec.T;
    for (int jt = 0; jt < nt; ++jt) {
        double t = T * jt / nt;
        for (int comp = 0; comp < 2 * N; ++comp) {
            double v = xi[b.pidx(comp, 0)];
            for (int m = 1; m <= b.m_max; ++m) {
                double ph = 2.0 * kPi * m * jt / double(nt);
                v += std::sqrt(2.0) * (xi[b.pidx(comp, 2 * m - 1)] * std::cos(ph) +
                                       xi[b.pidx(comp, 2 * m)] * std::sin(ph));
            }
            nv.part(comp, jt) = v;
        }
        for (std::size_t i = 0; i < L; ++i) {
            // u_hat(t) = e^{i eps t} sum_m c_m e^{-2pi i m t/T}
            Cplx acc(0.0, 0.0);
            for (int m = -b.m_max; m <= b.m_max; ++m) {
                Cplx c(xi[b.fidx(int(i), m, 0)], xi[b.fidx(int(i), m, 1)]);
                double ph = -2.0 * kPi * m * jt / double(nt);
                acc += c * Cplx(std::cos(ph), std::sin(ph));
            }
            double pe = b.eps[i] * t;
            nv.field(Eigen::Index(i), jt) = acc * Cplx(std::cos(pe), std::sin(pe));
        }
    }
    return nv;
}

Eigen::VectorXd loop_project_nodes(const LoopBasis& b, const NodeValues& nv) {
    const int N = b.spec.N;
    const std::size_t L = b.modes.size();
    const int nt = int(nv.part.cols());
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(b.dim());
    const double T = b.spec.T;
    for (int comp = 0; comp < 2 * N; ++comp) {
        double c0 = 0.0;
        for (int jt = 0; jt < nt; ++jt) c0 += nv.part(comp, jt);
        xi[b.pidx(comp, 0)] = c0 / nt;
        for (int m = 1; m <= b.m_max; ++m) {
            double cc = 0.0, cs = 0.0;
            for (int jt = 0; jt < nt; ++jt) {
                double ph = 2.0 * kPi * m * jt / double(nt);
                cc += nv.part(comp, jt) * std::cos(ph);
                cs += nv.part(comp, jt) * std::sin(ph);
            }
            xi[b.pidx(comp, 2 * m - 1)] = std::sqrt(2.0) * cc / nt;
            xi[b.pidx(comp, 2 * m)] = std::sqrt(2.0) * cs / nt;
        }
    }
    for (std::size_t i = 0; i < L; ++i) {
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            Cplx acc(0.0, 0.0);
            for (int jt = 0; jt < nt; ++jt) {
                double t = T * jt / nt;
                double pe = -b.eps[i] * t;  // remove the twist
                Cplx w = nv.field(Eigen::Index(i), jt) * Cplx(std::cos(pe), std::sin(pe));
                double ph = 2.0 * kPi * m * jt / double(nt);
                acc += w * Cplx(std::cos(ph), std::sin(ph));
            }
            acc /= double(nt);
            xi[b.fidx(int(i), m, 0)] = acc.real();
            xi[b.fidx(int(i), m, 1)] = acc.imag();
        }
    }
    return xi;
}

Eigen::VectorXd loop_time_derivative(const LoopBasis& b, const Eigen::VectorXd& xi) {
    // d/dt = -J o (i d/dt); cheaper directly: field c -> -i mu c, particle
    // cos/sin rotation by omega.
    Eigen::VectorXd out = Eigen::VectorXd::Zero(b.dim());
    const int N = b.spec.N;
    for (int comp = 0; comp < 2 * N; ++comp)
        for (int m = 1; m <= b.m_max; ++m) {
            double om = b.omega(m);
            out[b.pidx(comp, 2 * m - 1)] = om * xi[b.pidx(comp, 2 * m)];
            out[b.pidx(comp, 2 * m)] = -om * xi[b.pidx(comp, 2 * m - 1)];
        }
    for (std::size_t i = 0; i < b.modes.size(); ++i)
        for (int m = -b.m_max; m <= b.m_max; ++m) {
            double mu = b.mu(int(i), m);
            // c e^{-i mu t}: derivative multiplies the coefficient by -i mu
            out[b.fidx(int(i), m, 0)] = mu * xi[b.fidx(int(i), m, 1)];
            out[b.fidx(int(i), m, 1)] = -mu * xi[b.fidx(int(i), m, 0)];
        }
    return out;
}

Eigen::VectorXd random_loop(const LoopBasis& b, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd xi(b.dim());
    for (int i = 0; i < xi.size(); ++i) xi[i] = g(rng);
    return xi;
}

}  // namespace floerlab
