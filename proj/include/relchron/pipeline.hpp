#pragma once

// End-to-end runs on the two-spin model: the three routes to the system
// dynamics (exact conditioning, conditioned first-order eigenstate, and
// first-order TDPT under the emergent potential), g-sweeps, and the
// invariant checks behind `relchron check`.

#include <string>
#include <vector>

#include "relchron/dynamics.hpp"
#include "relchron/scenarios.hpp"

namespace relchron {

struct PipelineResult {
    spin::Scenario scenario;
    PerturbedEigenstate tipt;
    ExactEigenstate exact;
    std::vector<double> times;

    RelationalTrajectory exact_traj;
    RelationalTrajectory tipt_traj;
    /// TDPT under the zeroth-order potential.
    RelationalTrajectory tdpt_traj;
    /// TDPT under the full potential of the exact eigenstate.
    RelationalTrajectory tdpt_full_traj;

    PotentialTrace trace_zeroth;
    PotentialTrace trace_full;

    ComparisonReport tipt_vs_tdpt;
    ComparisonReport exact_vs_tdpt;
    ComparisonReport exact_vs_tipt;
    ComparisonReport tdpt_vs_tdpt_full;
};

PipelineResult run_pipeline(const spin::SpinScenarioConfig& cfg);

struct SweepEntry {
    double g = 0.0;
    ComparisonReport tipt_vs_tdpt;
    ComparisonReport exact_vs_tdpt;
    ComparisonReport exact_vs_tipt;
    ComparisonReport tdpt_vs_tdpt_full;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    /// Fitted exponents of max population deviation against g.
    double exponent_tipt_vs_tdpt = 0.0;
    double exponent_exact_vs_tdpt = 0.0;
    double exponent_exact_vs_tipt = 0.0;
    double exponent_tdpt_vs_tdpt_full = 0.0;
};

/// Runs the pipeline at each g (other parameters from `cfg`).
SweepResult run_sweep(const spin::SpinScenarioConfig& cfg, const std::vector<double>& gs);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

/// Invariant suite on one scenario configuration.
std::vector<CheckResult> run_invariant_checks(const spin::SpinScenarioConfig& cfg);

/// Phase-insensitive distance min_phi ||a - e^{i phi} b||.
double phase_aligned_distance(const ComplexVector& a, const ComplexVector& b);

}  // namespace relchron
