#pragma once
// Coupled particle-field system on T^N: linear field flow, shape-function
// convolution coupling, Hamiltonian + vector field, Strang splitting, and the
// (F1)-(F3) growth-condition checker.
//
// Field coordinates are the L^2-orthonormal coefficients (a_n, b_n) of
// (phi, pi); the real basis xi_n is the normalized cos/sin half-lattice family
// (deterministic sign convention: a lattice vector is "positive" when its
// first nonzero component is, positive -> cosine, negative -> sine of -n,
// zero mode -> constant), all with unit L^2 norm on [0,2pi]^N.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "floerlab/basis.hpp"
#include "floerlab/model.hpp"
#include "floerlab/spectrum.hpp"

namespace floerlab {

struct FieldVector {
    Eigen::VectorXd a, b;  // indexed by the ModeSet enumeration

    static FieldVector zero(std::size_t n) {
        FieldVector v;
        v.a = Eigen::VectorXd::Zero(Eigen::Index(n));
        v.b = Eigen::VectorXd::Zero(Eigen::Index(n));
        return v;
    }
};

struct PhasePoint {
    Eigen::VectorXd q, p;  // q on the torus (componentwise mod 2pi), p in R^N
    FieldVector field;
};

// H-normalized complex coefficient u_hat(n) = lambda^{1/2}(a + ib)/sqrt(2).
Eigen::VectorXcd u_hat(const FieldVector& v, const std::vector<double>& lambda);

// (sum_n theta^{2h} |u_hat|^2)^{1/2}
double scale_norm(const FieldVector& v, double h, const ModeSet& modes,
                  const std::vector<double>& lambda);

// ---- real basis xi_n --------------------------------------------------------

double xi_value(const Mode& n, int N, const Eigen::VectorXd& q);
Eigen::VectorXd xi_grad(const Mode& n, int N, const Eigen::VectorXd& q);
Eigen::MatrixXd xi_hess(const Mode& n, int N, const Eigen::VectorXd& q);

// ---- shape function ---------------------------------------------------------

struct ShapeFunction {
    std::vector<double> rho_hat;  // per lattice mode, rho_hat(n) = rho_hat(-n)
    double sigma = 0.5;

    static ShapeFunction gaussian(const ModeSet& modes, double sigma);
};

// ---- coupling ---------------------------------------------------------------

// Finite Fourier series c(t) = c0 + sum_m (cos_amp_m cos + sin_amp_m sin)(2pi m t/T).
struct FourierCoeff {
    double c0 = 0.0;
    std::vector<std::pair<double, double>> harm;  // (cos_amp, sin_amp), m = 1..

    double eval(double t, double T) const;
};

struct CouplingSpec {
    // Interaction scalar f_t(r) = kappa * [ sum_j poly[j](t) r^j + atan_amp*arctan(r) ].
    double kappa = 1.0;
    std::vector<FourierCoeff> poly;  // index = power of r
    double atan_amp = 0.0;

    // External potential V_ext(t, q) = (phi_ext_t * rho)(q), finite series.
    struct ExtTerm {
        Mode n{0, 0, 0, 0};
        int m = 0;        // time harmonic
        double amp = 0.0;
        bool cos_x = true, cos_t = true;
    };
    std::vector<ExtTerm> external;

    double f(double r, double t, double T) const;
    double df(double r, double t, double T) const;
    double d2f(double r, double t, double T) const;

    double v_ext(double t, const Eigen::VectorXd& q, int N, double T) const;
    Eigen::VectorXd v_ext_grad(double t, const Eigen::VectorXd& q, int N, double T) const;
    Eigen::MatrixXd v_ext_hess(double t, const Eigen::VectorXd& q, int N, double T) const;

    bool autonomous() const;
    static CouplingSpec linear(double kappa);  // f = kappa * r
};

// ---- operations -------------------------------------------------------------

// Per-mode rotation by angle lambda_n t; preserves every scale norm.
FieldVector linear_flow(const FieldVector& v, double t, const std::vector<double>& lambda);

// (phi * rho)(q) = sum_n a_n rho_hat(n) xi_n(q), with gradient and Hessian.
struct ConvolutionValue {
    double r = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};
ConvolutionValue shape_convolution(const FieldVector& field, const ShapeFunction& rho,
                                   const Eigen::VectorXd& q, const ModeSet& modes,
                                   bool with_hess = false);

double hamiltonian(const PhasePoint& u, double t, const CouplingSpec& coupling,
                   const ModelSpec& spec, const ModeSet& modes,
                   const std::vector<double>& lambda, const ShapeFunction& rho);

struct Tangent {
    Eigen::VectorXd dq, dp;
    FieldVector dfield;
};

Tangent vector_field(const PhasePoint& u, double t, const CouplingSpec& coupling,
                     const ModelSpec& spec, const ModeSet& modes,
                     const std::vector<double>& lambda, const ShapeFunction& rho);

// Symmetric kick-drift-kick splitting step; second order.
PhasePoint strang_step(const PhasePoint& u, double t, double dt, const CouplingSpec& coupling,
                       const ModelSpec& spec, const ModeSet& modes,
                       const std::vector<double>& lambda, const ShapeFunction& rho);

// ---- growth conditions ------------------------------------------------------

struct GrowthReport {
    // (F1): dF_part.p d/dp - F_part >= c0|p|^2 - c1 with F_part = |p|^2/2 + V_ext
    double c0 = 0.5, c1 = 0.0;
    bool f1_pass = false;
    // (F2): |grad_q F| <= c2(1+|p|^2), |grad_p F| <= c2(1+|p|)
    double c2 = 0.0;
    bool f2_pass = false;
    // (F3): sup |df/dr| over the sampled box; structurally bounded flag
    double f3_sup = 0.0;
    bool f3_bounded = false;
    double worst_margin_f1 = 0.0;
};

GrowthReport check_growth_conditions(const CouplingSpec& coupling, const ModelSpec& spec,
                                     double q_box, double p_box, double r_box, int grid_n);

}  // namespace floerlab
