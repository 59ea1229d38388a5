#pragma once

#include "oreg/regulator.hpp"

#include <string>

namespace oreg {

struct SingularAttitude : std::runtime_error {
    explicit SingularAttitude(double p3)
        : std::runtime_error("attitude |p3|=" + std::to_string(std::abs(p3)) +
                             " outside model validity (< pi/2)") {}
};

// Ideal error-zeroing trajectory of one closed-loop problem: the internal-model
// steady state, its top derivative, the sustaining input, the plant trajectory,
// and the model-set prediction residual on those signals.
struct SteadyStateOracle {
    std::function<Vec(double)> eta_star;        // -> d*ne
    std::function<Vec(double)> etad_dot_star;   // -> ne
    std::function<Vec(double)> u_star;          // -> nu
    std::function<PlantState(double)> x_star;
    std::function<Vec(double, const Vec&)> epsilon_star;  // (t, theta) -> ne
};

// Identifier / model-set knobs resolved per run (gains live in GainSet).
struct RegulatorTunables {
    double lambda = 1.0;
    double gamma_scale = 1e-4;  // Gamma = gamma_scale * I
    double m1 = 1.0;
    double m2 = 1.0;
    double sigma_sat_multiplier = 2.0;   // regressor saturation headroom
    double psidot_multiplier = 2.0;      // observer feed-forward saturation headroom
};

// A concrete closed-loop problem: plant, model-set recipe, stabilizer defaults,
// and closed-form steady-state signal generators.
struct Scenario {
    std::string name;
    PlantModel plant;
    int d = 2;                   // internal-model depth
    std::vector<double> h;       // injection coefficients h_1..h_d
    std::vector<std::vector<double>> c;  // per-chain stabilizer coefficients
    Mat Lmat;
    std::function<Vec(const Vec& w)> nu;  // optional feedforward signal, may be null
    std::function<Mat(double kappa, double ell)> Kw_builder;  // may be null
    Vec w0;
    double omega_L_sup = 1.0;  // bound on |Omega*Lmat| for the step-size heuristic

    // Regressor saturation level for given gains; +inf disables saturation.
    std::function<double(double kappa, double ell, double multiplier)> sigma_level;
    // Closed-form ideal signals; the prediction residual is attached later.
    std::function<SteadyStateOracle(double kappa, double ell, const PredictionModel&)> steady;
};

struct VtolParams {
    double gravity = 9.81;      // gravitational acceleration
    double B = 1.0;             // 2*wing_length / inertia
    double mass = 1.0;          // scales the raw wind force into the disturbance
    double wind_amplitude = 1.0;  // amplitude of the raw lateral wind force
    double wind_omega = 1.0;
    double wind_phase = 0.0;
    double L_scalar = -1.0;     // must be negative (the high-frequency gain is negative)

    void validate() const;
    double disturbance_amplitude() const { return wind_amplitude / mass; }
};

// Lateral/angular VTOL dynamics in the transformed chain coordinates
// (chi1, chi2, chi3, zeta), with the harmonic wind exosystem.
PlantModel vtol_plant(const VtolParams& params);

// Raw-coordinate dynamics p = (p1, p2, p3, p4): lateral position/velocity and
// roll angle/rate. v is the vanishing vertical-dynamics input.
Vec vtol_raw_rhs(const VtolParams& params, const Vec& p, const Vec& w, double u, double v = 0.0);

// Coordinate change raw -> (chi, zeta). Throws SingularAttitude at |p3| >= pi/2.
std::pair<Vec, Vec> vtol_transform(const VtolParams& params, const Vec& p, const Vec& w);

// Measured-coordinate control law; algebraically equal to the generic
// stabilizer in transformed coordinates with the wind feedforward attached.
double vtol_control_law(const VtolParams& params, const Vec& p, double eta1, double kappa,
                        double ell, const std::vector<double>& c);

// Closed-form steady-state signals for the VTOL under single-harmonic wind.
SteadyStateOracle vtol_steady_state(const VtolParams& params, double kappa, double ell, int d,
                                    const std::vector<double>& c, const PredictionModel& model);

// Full VTOL scenario with binomial stabilizer/injection defaults.
Scenario vtol_scenario(const VtolParams& params = {});

// Square two-integrator plant with Omega = 1 and q = d(w); the frozen-parameter
// closed loop is linear time-invariant and admits exact steady-state signals.
Scenario linear_benchmark(double omega0, double amplitude, double phase = 0.0);

// Everything simulate() needs, assembled for one scenario and gain set.
struct AssembledRegulator {
    RegulatorConfig config;
    SteadyStateOracle oracle;
    double s_star_bound = 0.0;   // declared identifier-state magnitude bound
    double omega_L_sup = 1.0;
    double sup_etad_dot = 0.0;   // sampled sup of |eta_dot_d*|
};

AssembledRegulator assemble(const Scenario& scenario, const GainSet& gains,
                            const RegulatorTunables& tunables = {});

// Coefficients of (s+1)^n below the monic lead, ascending powers (c_1..c_n).
std::vector<double> binomial_ascending(int n);
// Same polynomial, descending powers (h_1..h_n).
std::vector<double> binomial_descending(int n);

}  // namespace oreg
