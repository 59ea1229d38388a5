#pragma once

#include "oreg/internal_model.hpp"
#include "oreg/numerics.hpp"

#include <utility>

namespace oreg {

struct CorruptedIdentifierState : std::runtime_error {
    explicit CorruptedIdentifierState(const std::string& what) : std::runtime_error(what) {}
};

// Tunables of the least-squares identifier and its derivative observer.
// lambda = 0 freezes the flow (used for frozen-parameter runs); the tracking
// guarantees assume lambda > 0.
struct LsIdentifierConfig {
    int ntheta = 0;
    double lambda = 1.0;
    Mat Gamma;  // ntheta x ntheta, symmetric positive definite regularizer
    double m1 = 1.0;
    double m2 = 1.0;
    double rho = 1.0;
    double psidot_bound = std::numeric_limits<double>::infinity();

    void validate() const;
};

// State of the identifier: the exponentially weighted regressor Gram matrix,
// the regressor/output cross moment, and the two observer blocks.
struct IdentifierState {
    Mat gram;   // ntheta x ntheta, symmetric PSD
    Vec cross;  // ntheta
    Vec xi1;    // ne, tracks eta_d
    Vec xi2;    // ne, tracks eta_dot_d

    static IdentifierState zero(int ntheta, int ne);
    double symmetry_defect() const;
};

// Forgetting-factor flow: gram_dot = -lambda*gram + lambda*reg*reg^T,
// cross_dot = -lambda*cross + lambda*reg*xi2. reg is ntheta x ne (a plain
// regressor column when ne = 1).
std::pair<Mat, Vec> ls_flow(const LsIdentifierConfig& cfg, const Mat& gram, const Vec& cross,
                            const Mat& reg, const Vec& xi2);

// Regularized least-squares output theta = (gram + Gamma)^{-1} cross.
Vec ls_output(const LsIdentifierConfig& cfg, const Mat& gram, const Vec& cross);

// Exact time derivative of ls_output along ls_flow:
// lambda * (gram+Gamma)^{-1} * (reg*xi2 - reg*reg^T*theta - cross + gram*theta).
Vec theta_dot(const LsIdentifierConfig& cfg, const Mat& gram, const Vec& cross, const Mat& reg,
              const Vec& xi2, const Vec& theta);

// Derivative observer: xi1_dot = xi2 - m1*rho*(xi1 - eta_d),
// xi2_dot = psidot_val - m2*rho^2*(xi1 - eta_d).
std::pair<Vec, Vec> observer_rhs(const LsIdentifierConfig& cfg, const Vec& xi1, const Vec& xi2,
                                 const Vec& eta_d, const Vec& psidot_val);

// Chain-rule feed-forward for the observer, saturated component-wise:
// sat(Jeta(eta,theta)*Phi(eta,theta) + Jtheta(eta,theta)*theta_dot).
Vec psidot_saturated(const PredictionModel& model, const InternalModelConfig& im,
                     const LsIdentifierConfig& cfg, const Vec& xi2, const Vec& eta,
                     const Mat& gram, const Vec& cross, const Vec& theta);

// Uniformly sampled ideal steady-state signals, sample k at time k*dt.
struct IdealSignalHistory {
    double dt = 0.0;
    std::vector<Vec> eta;       // eta*(k*dt), each d*ne
    std::vector<Vec> etad_dot;  // eta_dot_d*(k*dt), each ne
};

// Offline fitness value: trapezoid quadrature of
// lambda*exp(-lambda*(t-s))*|etad_dot*(s) - psi(eta*(s), theta)|^2 over [0, t]
// plus theta^T Gamma theta. Independent of the identifier flow.
double cost_functional_oracle(const PredictionModel& model, const IdealSignalHistory& history,
                              const Vec& theta, double lambda, const Mat& Gamma, double t);

// Offline ideal identifier steady state: the pair of weighted integrals
// (lambda*int exp(-lambda(t-s)) reg reg^T ds, lambda*int exp(-lambda(t-s)) reg etad_dot* ds)
// computed by trapezoid quadrature.
std::pair<Mat, Vec> ideal_sigma_star_oracle(const PredictionModel& model,
                                            const IdealSignalHistory& history, double lambda,
                                            double t);

}  // namespace oreg
