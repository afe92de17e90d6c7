#pragma once

// Emergent time: clock evolution chi(t) = exp(-i t (H_C - E)) chi0, the
// relational system states obtained by conditioning a global state on
// chi(t), and the effective system potential induced by the coupling.

#include <span>
#include <string_view>
#include <vector>

#include "relchron/hilbert.hpp"
#include "relchron/statics.hpp"

namespace relchron {

enum class TrajectoryMethod { Exact, TiptConditioned, Tdpt, Reference };

std::string_view to_string(TrajectoryMethod method);

/// Time-ordered system states. For the conditioned methods `norms` holds
/// N(t); for propagated methods it holds the squared norm of the state
/// before renormalization.
struct RelationalTrajectory {
    std::vector<double> times;
    std::vector<ComplexVector> states;
    std::vector<double> norms;
    TrajectoryMethod method = TrajectoryMethod::Exact;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    /// |<level|phi(t_k)>|^2.
    [[nodiscard]] double population(std::size_t k, Eigen::Index level) const;
};

struct EffectivePotentialSample {
    double t = 0.0;
    ComplexMatrix v_eff;
};

/// Precomputes the clock spectrum so repeated chi(t) evaluations are cheap.
class ClockEvolution {
public:
    ClockEvolution(ClockState chi0, const ComplexMatrix& h_c, double energy);

    [[nodiscard]] ClockState at(double t) const;
    [[nodiscard]] double energy() const { return energy_; }

private:
    ClockState chi0_;
    Spectrum spectrum_;
    ComplexVector coefficients_;
    double energy_;
};

ClockState evolve_clock(const ClockState& chi0, const ComplexMatrix& h_c, double energy, double t);

struct ExactEigenstate {
    double energy = 0.0;
    ComplexVector psi;
    /// |<level_select|psi>| / ||level_select||.
    double overlap = 0.0;
    double residual = 0.0;
};

/// Eigenvector of the full H_tot with the largest overlap with
/// `level_select`, phased so that <level_select|psi> is real and positive.
ExactEigenstate exact_eigenstate(const GlobalModel& m, const ComplexVector& level_select);

/// n points spanning [0, t_max] inclusive.
std::vector<double> uniform_grid(std::size_t n, double t_max);

/// Conditions `psi` on chi(t) for every t, with the clock evolved at `energy`.
RelationalTrajectory conditioned_trajectory(const ComplexVector& psi, double energy,
                                            const GlobalModel& m, const ClockState& chi0,
                                            std::span<const double> times, TrajectoryMethod method);

RelationalTrajectory relational_trajectory_exact(const GlobalModel& m,
                                                 const ComplexVector& level_select,
                                                 const ClockState& chi0,
                                                 std::span<const double> times);

/// Conditions the assembled first-order state; the clock runs at E0 + g E1.
RelationalTrajectory relational_trajectory_tipt(const PerturbedEigenstate& p, double g,
                                                const GlobalModel& m, const ClockState& chi0,
                                                std::span<const double> times);

/// Effective potential of `psi` seen through chi_t, without the factor g:
///   (|u><w| + |w><u| - Re<u|w> 1) / N,
/// with w = <chi_t|Psi>>, u = <chi_t|V|Psi>> and N = ||w||^2.
EffectivePotentialSample effective_potential_full(const ComplexVector& psi, const GlobalModel& m,
                                                  const ClockState& chi_t, double t = 0.0);

/// Same construction fed with the unperturbed global state.
EffectivePotentialSample effective_potential_zeroth(const ComplexVector& psi0, const GlobalModel& m,
                                                    const ClockState& chi_t, double t = 0.0);

/// dN/dt = -2 g Im <<Psi| V P_chi |Psi>>, valid for an exact eigenstate.
double normalization_rate(const ComplexVector& psi, const GlobalModel& m, const ClockState& chi_t);

/// ||exp(i t (H - E)) Psi - Psi||.
double invariance_defect(const Spectrum& h_spectrum, const ComplexVector& psi, double energy, double t);

}  // namespace relchron
