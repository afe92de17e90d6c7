#pragma once

// Spin-1/2 system coupled to a spin-J clock:
//   H_tot,0 = eps sigma_z (x) 1 + Ecal 1 (x) J_z,   V = sigma_x (x) F,
// with <m|F|n> = 1 for all m, n. Also provides the closed-form results for
// this model, which the tests use as analytic oracles for the generic
// pipeline.
//
// System basis: index 0 = |up> (sigma_z = +1), index 1 = |down>.
// Clock basis: index m + J for m = -J..J.

#include <string_view>

#include "relchron/hilbert.hpp"
#include "relchron/statics.hpp"

namespace relchron::spin {

inline constexpr Eigen::Index kUp = 0;
inline constexpr Eigen::Index kDown = 1;

enum class Branch { Nondegenerate, DegeneratePlus };

std::string_view to_string(Branch b);
Branch parse_branch(std::string_view text);

struct SpinScenarioConfig {
    int J = 30;
    double g = 0.17;
    double eps = 0.32;
    double ecal = 1.0;
    double a = 1.0;
    Branch branch = Branch::Nondegenerate;
    int n_times = 400;
    /// Non-positive means one clock period 2 pi / Ecal.
    double t_max = 0.0;

    /// Throws ConfigInvalid.
    void validate() const;
    [[nodiscard]] double period() const;
    [[nodiscard]] double resolved_t_max() const;
};

/// b_m for m = -J..J, stored at index m + J.
struct ClockCoefficients {
    int J = 0;
    ComplexVector b;

    [[nodiscard]] Complex at(int m) const { return b[m + J]; }

    /// b_m proportional to exp(-a (m/J)^2), normalized to unit 2-norm.
    static ClockCoefficients gaussian(int J, double a);
    /// Arbitrary coefficients, normalized to unit 2-norm.
    static ClockCoefficients from_vector(int J, ComplexVector b);
};

struct Scenario {
    SpinScenarioConfig config;
    GlobalModel model;
    ClockState clock;
    ClockCoefficients coefficients;
    /// Closed-form first-order data for the selected level.
    PerturbedEigenstate expected;
};

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix spin_jz(int J);
ComplexMatrix all_ones(Eigen::Index n);

/// |s, m> as a global vector.
ComplexVector basis_state(int J, Eigen::Index s, int m);

/// Builds the model with Gaussian clock coefficients of width cfg.a.
Scenario build_scenario(const SpinScenarioConfig& cfg);
/// Same, with caller-supplied clock coefficients.
Scenario build_scenario(const SpinScenarioConfig& cfg, const ClockCoefficients& coeffs);

/// Runs the generic perturbation pipeline on the scenario's level.
PerturbedEigenstate generic_tipt(const Scenario& sc, double kernel_tol = kDefaultKernelTol);

/// B(t) = sum_m conj(b_m) exp(i t m Ecal).
Complex eval_b(const ClockCoefficients& coeffs, double ecal, double t);

/// G = [1/J + 1/(J+1)] / 2.
double degenerate_g_constant(int J);

/// Closed-form zeroth-order effective potential for general coefficients.
/// Throws VanishingAmplitude when b_0 = 0 (non-degenerate) or
/// |b_-1|^2 + |b_1|^2 = 0 (degenerate).
ComplexMatrix analytic_effective_potential(const SpinScenarioConfig& cfg, const ClockCoefficients& coeffs,
                                           double t);

/// Simplified forms valid for real, symmetric, non-negative coefficients:
/// (B/b_0) sigma_x, or (B/b_1)[cos(t Ecal) sigma_x + sin(t Ecal) sigma_y].
ComplexMatrix analytic_effective_potential_symmetric(const SpinScenarioConfig& cfg,
                                                     const ClockCoefficients& coeffs, double t);

struct DegenerateElements {
    ComplexVector overlap;        // <chi(t)|Psi0>>
    ComplexVector v_psi_overlap;  // <chi(t)|V|Psi0>>
    double n0 = 0.0;              // <<Psi0|P_chi0|Psi0>>
    Complex scalar;               // <<Psi0|V P_chi(t)|Psi0>>
};

/// Building blocks of the degenerate-branch potential. `energy` is the
/// energy at which the clock is evolved.
DegenerateElements analytic_degenerate_elements(const SpinScenarioConfig& cfg,
                                                const ClockCoefficients& coeffs, double t,
                                                double energy);

/// Non-degenerate initial state, b0* |up> + g |down> sum_m b_m* / (2 eps - m Ecal),
/// normalized.
ComplexVector analytic_initial_state(const SpinScenarioConfig& cfg, const ClockCoefficients& coeffs);

}  // namespace relchron::spin
