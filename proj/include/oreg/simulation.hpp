#pragma once

#include "oreg/scenarios.hpp"

namespace oreg {

struct DivergedRun : std::runtime_error {
    explicit DivergedRun(const std::string& what) : std::runtime_error(what) {}
};

// Integration and initial-condition options for one closed-loop run.
struct SimOptions {
    double tfinal = 10.0;
    double dt_override = 0.0;  // <= 0 selects the gain-coupled heuristic step
    int max_records = 20000;
    double tail_fraction = 0.2;
    RegulatorTunables tunables;

    double chi1_offset = 0.0;    // initial offset on the first chain component
    bool exact_start = false;    // start on the ideal steady-state trajectory
    double gram_warm_start = 0.0;  // initial gram = warm_start * I
    Vec theta_frozen;            // nonempty: freeze the identifier at this parameter
};

// Recorded time series of one run. Matrix series hold one record per row.
struct RunRecord {
    std::vector<double> times;
    Mat e, u, theta, eps_star, eta;
    std::vector<double> norm_e;
    std::vector<double> eq8_residual;      // structural error/residual identity defect
    std::vector<double> min_eig_omega_L;   // min eig of L^T Omega^T + Omega L
    std::vector<double> sigma_norm;        // |gram| + |cross| vs the declared bound
    std::vector<double> sigma1_min_eig;
    std::vector<double> sigma1_sym_defect;

    double s_star_bound = 0.0;
    bool s_star_exceeded = false;
    bool diverged = false;
    double divergence_time = std::numeric_limits<double>::quiet_NaN();
    double dt = 0.0;
    long total_steps = 0;
    double tail_fraction = 0.2;
    Vec final_state;

    int records() const { return static_cast<int>(times.size()); }
};

// Fastest closed-loop time-constant estimate used by the step heuristic:
// max(g^d h_d, ell*sup|Omega L|, m2 rho^2, kappa^{max chain}*max|c|).
double rate_estimate(const AssembledRegulator& reg);

// Step size min(1e-3, 0.1 / rate); throws if the rate demands dt < 1e-7.
double default_step(const AssembledRegulator& reg);

// Deterministic fixed-step RK4 integration of plant + regulator. A non-finite
// state truncates the record and flags divergence instead of throwing.
RunRecord simulate(const Scenario& scenario, const GainSet& gains, const SimOptions& opts);

// Sup of a recorded series norm over the trailing fraction of the run.
// Series names: "e", "u", "theta", "eps_star", "eta".
double tail_sup(const RunRecord& record, const std::string& series, double fraction = 0.2);

struct RegulationRatio {
    bool asymptotic = false;  // eps* tail below resolution; no ratio reported
    double ratio = 0.0;
    double tail_e = 0.0;
    double tail_eps = 0.0;
};

// tail_sup|e| / tail_sup|eps*|, the finite-horizon proxy of the asymptotic
// error bound; flags asymptotic regulation when the eps* tail is below 1e-7.
RegulationRatio theorem1_ratio(const RunRecord& record, double fraction = 0.2);

enum class SweepParameter { g, kappa, ell, rho, lambda, gamma_scale };

SweepParameter sweep_parameter_from_name(const std::string& name);
std::string sweep_parameter_name(SweepParameter p);

struct SweepEntry {
    double value = 0.0;
    bool diverged = false;
    double tail_e = 0.0;
    double tail_eps = 0.0;
    Vec theta_tail_mean;
    RegulationRatio ratio;
};

SweepEntry summarize(const RunRecord& record, double value);

// Independent runs, one per parameter value; entries are ordered like the
// input values regardless of execution order. `parallel` enables the OpenMP
// path; the serial path is the reference the tests compare against.
std::vector<RunRecord> sweep_records(const Scenario& scenario, const GainSet& base,
                                     SweepParameter parameter, const std::vector<double>& values,
                                     const SimOptions& opts, bool parallel = true);

std::vector<SweepEntry> sweep(const Scenario& scenario, const GainSet& base,
                              SweepParameter parameter, const std::vector<double>& values,
                              const SimOptions& opts, bool parallel = true);

}  // namespace oreg
