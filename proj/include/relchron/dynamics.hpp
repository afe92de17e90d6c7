#pragma once

// Time-dependent propagation of the system under a sampled potential:
// first-order Dyson (TDPT) by quadrature, an RK4 reference integrator, and
// metrics for comparing trajectories.

#include <limits>
#include <span>
#include <vector>

#include "relchron/relational.hpp"

namespace relchron {

/// Hermitian system operators sampled on a uniform grid starting at t = 0.
struct PotentialTrace {
    std::vector<double> times;
    std::vector<ComplexMatrix> samples;

    /// Throws GridMismatch (sizes, spacing, origin) or NotHermitian.
    void validate() const;
    [[nodiscard]] double step() const;
};

/// Samples effective_potential_full(psi, ...) along chi(t) evolved at `energy`.
PotentialTrace sample_potential_trace(const ComplexVector& psi, double energy, const GlobalModel& m,
                                      const ClockState& chi0, std::span<const double> times);

struct ComparisonReport {
    double max_pop_deviation = 0.0;
    std::vector<double> max_pop_deviation_per_level;
    double mean_fidelity_gap = 0.0;
    /// Filled in by g-sweeps; NaN for a single comparison.
    double scaling_exponent = std::numeric_limits<double>::quiet_NaN();
};

/// |phi(t)> = U(t) [1 - i g int_0^t U^dagger(s) V(s) U(s) ds] |phi0>,
/// U(t) = exp(-i t H0). The integral is accumulated with composite Simpson
/// (3/8 rule closing odd interval counts). States are renormalized; the
/// squared norm before renormalization goes to `norms`.
RelationalTrajectory tdpt_first_order(const ComplexMatrix& h0_s, const PotentialTrace& trace, double g,
                                      const ComplexVector& phi0);

/// Classic RK4 on i d/dt phi = (H0 + g V(t)) phi with V linearly
/// interpolated between samples; `substeps` RK4 steps per grid interval.
RelationalTrajectory integrate_tdse_reference(const ComplexMatrix& h0_s, const PotentialTrace& trace,
                                              double g, const ComplexVector& phi0, int substeps = 8);

/// Population and fidelity differences over a shared time grid.
ComparisonReport compare_trajectories(const RelationalTrajectory& a, const RelationalTrajectory& b);

/// Least-squares slope of log(deviation) against log(g).
double fit_scaling_exponent(std::span<const double> gs, std::span<const double> deviations);

}  // namespace relchron
