#pragma once

#include "oreg/identifier.hpp"
#include "oreg/internal_model.hpp"
#include "oreg/plant.hpp"

#include <optional>
#include <string>

namespace oreg {

// High-gain design parameters. The values are user-supplied; what the theory
// fixes is the tuning order rho -> g -> kappa -> ell and the kappa >= g floor,
// which tuning_schedule enforces and records.
struct GainSet {
    double rho = 1.0;
    double g = 1.0;
    double kappa = 1.0;
    double ell = 1.0;
    std::string tuning_order_tag = "seed";

    void validate() const;
};

// Static stabilizer: u = Lmat*(ell*K(kappa)*chi - ell*zeta + ell*K(kappa)*C^T*eta1
//                              + Kw*nu(w)), with per-chain rows
// K^i(kappa) = -(c_1 kappa^n, c_2 kappa^{n-1}, ..., c_n kappa).
struct StabilizerConfig {
    double kappa = 1.0;
    double ell = 1.0;
    std::vector<std::vector<double>> c;  // per-chain coefficients c_1..c_n
    Mat Lmat;                            // nu x ne, full column rank
    std::optional<Mat> Kw;               // ne x dim(nu_signal)
    std::function<Vec(const Vec& w)> nu; // optional feedforward signal

    void validate(const ChainStructure& s) const;
};

// Row -(c_1 kappa^n, c_2 kappa^{n-1}, ..., c_n kappa) for one chain of length n.
RowVec gain_row(int n, const std::vector<double>& c, double kappa);

// Block-diagonal K(kappa) over all chains: ne x nchi.
Mat gain_matrix(const ChainStructure& s, const std::vector<std::vector<double>>& c, double kappa);

// Stabilizing control value for measured (chi, zeta) and internal-model head eta1.
Vec control_law(const StabilizerConfig& cfg, const ChainStructure& s, const Vec& chi,
                const Vec& zeta, const Vec& eta1, const Vec& w);

// Everything the regulator needs, assembled for one scenario and gain set.
struct RegulatorConfig {
    ChainStructure chain;
    InternalModelConfig im;
    PredictionModel model;
    LsIdentifierConfig id;
    StabilizerConfig stab;

    void validate() const;
};

struct RegulatorState {
    Vec eta;  // d*ne
    IdentifierState id;

    static RegulatorState zero(const RegulatorConfig& cfg);
};

// One evaluation of the full regulator: state derivative, control value, and
// the quantities needed by the error/residual identity diagnostic.
struct RegulatorDerivative {
    Vec eta_dot;
    Mat gram_dot;
    Vec cross_dot;
    Vec xi1_dot;
    Vec xi2_dot;
    Vec u;
    Vec theta;
    Vec psi_value;        // psi(eta, theta) at this evaluation
    double eq8_residual;  // |h_d g^d e - (eta_dot_d - psi)|, zero up to roundoff
};

RegulatorDerivative regulator_rhs(const RegulatorConfig& cfg, const RegulatorState& state,
                                  const Vec& e, const Vec& chi, const Vec& zeta, const Vec& w);

// Scale a seed gain set respecting the dependency order: rho first, then g,
// then kappa (floored at g), then ell. Magnitudes beyond the floor are the
// caller's choice; the tag records what was applied.
struct GainMultipliers {
    double rho = 1.0;
    double g = 1.0;
    double kappa = 1.0;
    double ell = 1.0;
};

GainSet tuning_schedule(const GainSet& seed, const GainMultipliers& m);

}  // namespace oreg
