#pragma once

#include "oreg/simulation.hpp"

#include <iosfwd>
#include <string>

namespace oreg {

struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + msg),
          line(line_number) {}
    int line;
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// One fully resolved run description: scenario parameters, gains, identifier
// tunables, integration options, optional sweep, and output policy.
struct RunConfig {
    std::string scenario_name = "vtol";
    VtolParams vtol;
    double lin_amplitude = 1.0;
    double lin_omega = 1.0;
    double lin_phase = 0.0;

    int d = 2;
    std::vector<double> h;               // resolved injection coefficients
    std::vector<std::vector<double>> c;  // resolved per-chain coefficients

    GainSet gains{3.0, 5.0, 10.0, 10.0};
    RegulatorTunables tunables;

    double tfinal = 130.0;
    double dt = 0.0;  // 0 selects the heuristic step
    int max_records = 20000;
    double tail_fraction = 0.2;
    double chi1_offset = 0.1;
    bool exact_start = false;
    double gram_warm_start = 0.0;
    std::vector<double> theta_frozen;

    bool has_sweep = false;
    SweepParameter sweep_parameter = SweepParameter::g;
    std::vector<double> sweep_values;

    std::string out_dir = "out";
    bool overwrite = false;
};

// Parse the sectioned key=value format; all defaults resolved, unknown
// sections/keys and violated invariants reported with their line number.
RunConfig parse_config(const std::string& text);

// Canonical emission; emit(parse(emit(cfg))) == emit(cfg) byte for byte.
std::string emit_config(const RunConfig& cfg);

Scenario make_scenario(const RunConfig& cfg);
SimOptions make_sim_options(const RunConfig& cfg);

// Write one record as CSV with the fixed column layout, 17 significant digits.
void write_run_csv(std::ostream& os, const RunRecord& record);

// Execute the configured run or sweep: writes run_<k>.csv per run, a summary
// table, and the resolved configuration. Throws IoError on unwritable output
// or on existing files without the overwrite flag.
struct RunOutcome {
    std::vector<SweepEntry> entries;
    bool any_diverged = false;
};
RunOutcome run_command(const RunConfig& cfg);

}  // namespace oreg
