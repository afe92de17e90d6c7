#include "relchron/relational.hpp"

#include <cmath>
#include <sstream>

namespace relchron {

std::string_view to_string(TrajectoryMethod method) {
    switch (method) {
        case TrajectoryMethod::Exact: return "EXACT";
        case TrajectoryMethod::TiptConditioned: return "TIPT_CONDITIONED";
        case TrajectoryMethod::Tdpt: return "TDPT";
        case TrajectoryMethod::Reference: return "REFERENCE";
    }
    return "UNKNOWN";
}

double RelationalTrajectory::population(std::size_t k, Eigen::Index level) const {
    return std::norm(states.at(k)[level]);
}

ClockEvolution::ClockEvolution(ClockState chi0, const ComplexMatrix& h_c, double energy)
    : chi0_(std::move(chi0)), spectrum_(hermitian_eigensolve(h_c)), energy_(energy) {
    if (h_c.rows() != chi0_.amplitudes.size()) {
        throw Error(ErrorCode::DimensionMismatch, "clock Hamiltonian does not match clock state");
    }
    coefficients_ = spectrum_.eigenvectors.adjoint() * chi0_.amplitudes;
}

ClockState ClockEvolution::at(double t) const {
    ComplexVector phased(coefficients_.size());
    for (Eigen::Index k = 0; k < phased.size(); ++k) {
        phased[k] = std::polar(1.0, -t * (spectrum_.eigenvalues[k] - energy_)) * coefficients_[k];
    }
    ComplexVector amps = spectrum_.eigenvectors * phased;
    return ClockState{chi0_.space, std::move(amps), chi0_.label};
}

ClockState evolve_clock(const ClockState& chi0, const ComplexMatrix& h_c, double energy, double t) {
    return ClockEvolution(chi0, h_c, energy).at(t);
}

ExactEigenstate exact_eigenstate(const GlobalModel& m, const ComplexVector& level_select) {
    const ComplexMatrix h = assemble_h_tot(m);
    const Spectrum spec = hermitian_eigensolve(h);
    const auto k = static_cast<Eigen::Index>(find_level(spec, level_select));
    ExactEigenstate out;
    out.energy = spec.eigenvalues[k];
    out.psi = spec.eigenvectors.col(k);
    const Complex ov = level_select.dot(out.psi);
    if (std::abs(ov) > 0.0) out.psi *= std::conj(ov) / std::abs(ov);
    out.overlap = std::abs(ov) / level_select.norm();
    out.residual = (h * out.psi - out.energy * out.psi).norm();
    return out;
}

std::vector<double> uniform_grid(std::size_t n, double t_max) {
    if (n < 2 || !(t_max > 0.0)) {
        throw Error(ErrorCode::GridMismatch, "a time grid needs at least two points and t_max > 0");
    }
    std::vector<double> times(n);
    const double dt = t_max / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) times[k] = dt * static_cast<double>(k);
    times.back() = t_max;
    return times;
}

RelationalTrajectory conditioned_trajectory(const ComplexVector& psi, double energy,
                                            const GlobalModel& m, const ClockState& chi0,
                                            std::span<const double> times, TrajectoryMethod method) {
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw Error(ErrorCode::GridMismatch, "times must be strictly increasing");
        }
    }
    const ClockEvolution clock(chi0, m.h_c, energy);
    RelationalTrajectory traj;
    traj.method = method;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());
    traj.norms.reserve(times.size());
    for (const double t : times) {
        auto c = condition(psi, clock.at(t));
        traj.states.push_back(std::move(c.phi));
        traj.norms.push_back(c.norm);
    }
    return traj;
}

RelationalTrajectory relational_trajectory_exact(const GlobalModel& m,
                                                 const ComplexVector& level_select,
                                                 const ClockState& chi0,
                                                 std::span<const double> times) {
    const ExactEigenstate exact = exact_eigenstate(m, level_select);
    return conditioned_trajectory(exact.psi, exact.energy, m, chi0, times, TrajectoryMethod::Exact);
}

RelationalTrajectory relational_trajectory_tipt(const PerturbedEigenstate& p, double g,
                                                const GlobalModel& m, const ClockState& chi0,
                                                std::span<const double> times) {
    const ComplexVector psi = assemble_corrected_state(p, g);
    return conditioned_trajectory(psi, p.e0 + g * p.e1, m, chi0, times,
                                  TrajectoryMethod::TiptConditioned);
}

namespace {

EffectivePotentialSample effective_potential(const ComplexVector& psi, const GlobalModel& m,
                                             const ClockState& chi_t, double t) {
    if (m.coupling.rows() != psi.size()) {
        throw Error(ErrorCode::DimensionMismatch, "coupling does not act on the global state");
    }
    const ComplexVector w = partial_overlap(psi, chi_t);
    const double n = w.squaredNorm();
    if (!(n >= kNormFloor)) {
        std::ostringstream msg;
        msg << "N = " << n << " below floor at t = " << t;
        throw Error(ErrorCode::VanishingOverlap, msg.str());
    }
    const ComplexVector u = partial_overlap(m.coupling * psi, chi_t);
    const double re_scalar = u.dot(w).real();
    ComplexMatrix v = u * w.adjoint() + w * u.adjoint();
    v.diagonal().array() -= re_scalar;
    v /= n;
    return EffectivePotentialSample{t, std::move(v)};
}

}  // namespace

EffectivePotentialSample effective_potential_full(const ComplexVector& psi, const GlobalModel& m,
                                                  const ClockState& chi_t, double t) {
    return effective_potential(psi, m, chi_t, t);
}

EffectivePotentialSample effective_potential_zeroth(const ComplexVector& psi0, const GlobalModel& m,
                                                    const ClockState& chi_t, double t) {
    return effective_potential(psi0, m, chi_t, t);
}

double normalization_rate(const ComplexVector& psi, const GlobalModel& m, const ClockState& chi_t) {
    const ComplexVector w = partial_overlap(psi, chi_t);
    const ComplexVector u = partial_overlap(m.coupling * psi, chi_t);
    return -2.0 * m.g * u.dot(w).imag();
}

double invariance_defect(const Spectrum& h_spectrum, const ComplexVector& psi, double energy, double t) {
    // exp(i t (H - E)) = spectral_propagator at time -t with shift E.
    const ComplexMatrix u = spectral_propagator(h_spectrum, -t, energy);
    return (u * psi - psi).norm();
}

}  // namespace relchron
