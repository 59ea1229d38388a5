#pragma once

#include "oreg/numerics.hpp"

#include <functional>
#include <limits>

namespace oreg {

// Internal-model unit of depth d per error channel: eta_dot = Phi(eta, theta) + G e,
// with Phi shifting the blocks up and the prediction model closing the bottom,
// G = col(g h_1 I, ..., g^d h_d I).
struct InternalModelConfig {
    int d = 0;
    int ne = 0;
    double g = 1.0;
    std::vector<double> h;  // h_1..h_d, descending powers below the monic lead

    void validate() const;
    // h_d * g^d, the bottom-row injection gain.
    double bottom_gain() const;
};

// Candidate map relating the top derivative of eta to eta, parametrized by theta.
// value/jacobians operate on stacked eta in R^{d*ne}; regressor returns the
// ntheta x ne matrix whose transpose is jacobian_theta (linear models).
struct PredictionModel {
    int d = 0;
    int ne = 0;
    int ntheta = 0;
    double saturation_level = std::numeric_limits<double>::infinity();
    std::function<Vec(const Vec& eta, const Vec& theta)> value;          // -> ne
    std::function<Mat(const Vec& eta, const Vec& theta)> jacobian_eta;   // -> ne x d*ne
    std::function<Mat(const Vec& eta, const Vec& theta)> jacobian_theta; // -> ne x ntheta
    std::function<Mat(const Vec& eta)> regressor;                        // -> ntheta x ne
};

// Smooth component-wise saturation level*tanh(s/level); identity when the
// level is non-finite.
double saturate(double s, double level);
Vec saturate(const Vec& v, double level);

// Drift Phi(eta, theta) = col(eta_2, ..., eta_d, psi(eta, theta)).
Vec internal_model_drift(const InternalModelConfig& cfg, const PredictionModel& model,
                         const Vec& eta, const Vec& theta);

// Full unit derivative Phi(eta, theta) + G e.
Vec internal_model_rhs(const InternalModelConfig& cfg, const PredictionModel& model,
                       const Vec& eta, const Vec& theta, const Vec& e);

// The instantaneous prediction residual eta_dot_d - psi implied by the error,
// i.e. (h_d g^d) * e. Diagnostic counterpart of the error/residual identity.
Vec prediction_error_from_error(const InternalModelConfig& cfg, const Vec& e);

// Linear-in-parameter model set psi(eta, theta) = theta^T sat(sigma(eta)) for a
// single error channel (ne = 1); for ne > 1 the same regressor is applied per
// channel and theta concatenates the per-channel parameter blocks.
PredictionModel linear_model(std::function<Vec(const Vec&)> sigma,
                             std::function<Mat(const Vec&)> sigma_jacobian,
                             int ntheta_per_channel, double saturation_level, int d,
                             int ne = 1);

// Convenience: sigma = identity on the stacked eta (requires ne == 1, ntheta = d).
PredictionModel identity_linear_model(int d, double saturation_level);

}  // namespace oreg
