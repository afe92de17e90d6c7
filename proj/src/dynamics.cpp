#include "relchron/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relchron {

namespace {

constexpr double kGridRelTol = 1e-9;
constexpr double kTraceHermitianTol = 1e-10;

void require_state(const ComplexMatrix& h0_s, const PotentialTrace& trace, const ComplexVector& phi0) {
    trace.validate();
    if (h0_s.rows() != h0_s.cols() || phi0.size() != h0_s.rows() ||
        trace.samples.front().rows() != h0_s.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "H0, potential samples and phi0 disagree in dimension");
    }
    if (std::abs(phi0.norm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::ConfigInvalid, "initial state must be normalized");
    }
}

}  // namespace

double PotentialTrace::step() const {
    return times.size() < 2 ? 0.0 : times[1] - times[0];
}

void PotentialTrace::validate() const {
    if (times.size() < 2 || samples.size() != times.size()) {
        throw Error(ErrorCode::GridMismatch, "trace needs at least two samples, one per time");
    }
    if (times.front() != 0.0) {
        throw Error(ErrorCode::GridMismatch, "trace must start at t = 0");
    }
    const double h = step();
    if (!(h > 0.0)) throw Error(ErrorCode::GridMismatch, "trace times must increase");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (std::abs((times[k] - times[k - 1]) - h) > kGridRelTol * h) {
            std::ostringstream msg;
            msg << "trace grid is not uniform at index " << k;
            throw Error(ErrorCode::GridMismatch, msg.str());
        }
    }
    const Eigen::Index dim = samples.front().rows();
    for (const auto& s : samples) {
        if (s.rows() != dim || s.cols() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "trace samples differ in shape");
        }
        if (hermiticity_defect(s) > kTraceHermitianTol) {
            throw Error(ErrorCode::NotHermitian, "trace sample is not Hermitian");
        }
    }
}

PotentialTrace sample_potential_trace(const ComplexVector& psi, double energy, const GlobalModel& m,
                                      const ClockState& chi0, std::span<const double> times) {
    const ClockEvolution clock(chi0, m.h_c, energy);
    PotentialTrace trace;
    trace.times.assign(times.begin(), times.end());
    trace.samples.reserve(times.size());
    for (const double t : times) {
        trace.samples.push_back(effective_potential_full(psi, m, clock.at(t), t).v_eff);
    }
    return trace;
}

RelationalTrajectory tdpt_first_order(const ComplexMatrix& h0_s, const PotentialTrace& trace, double g,
                                      const ComplexVector& phi0) {
    require_state(h0_s, trace, phi0);
    const Spectrum spec = hermitian_eigensolve(h0_s);
    const std::size_t n = trace.times.size();
    const double h = trace.step();

    std::vector<ComplexMatrix> u(n);
    std::vector<ComplexVector> f(n);
    for (std::size_t k = 0; k < n; ++k) {
        u[k] = spectral_propagator(spec, trace.times[k]);
        f[k] = u[k].adjoint() * (trace.samples[k] * (u[k] * phi0));
    }

    // Cumulative integral of f at every grid point, 4th order throughout.
    std::vector<ComplexVector> integral(n, ComplexVector::Zero(phi0.size()));
    for (std::size_t k = 2; k < n; k += 2) {
        integral[k] = integral[k - 2] + (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    }
    if (n >= 4) {
        integral[1] = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (n == 3) {
        integral[1] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    } else {
        integral[1] = 0.5 * h * (f[0] + f[1]);
    }
    for (std::size_t k = 3; k < n; k += 2) {
        integral[k] = integral[k - 3] + (3.0 * h / 8.0) * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
    }

    RelationalTrajectory traj;
    traj.method = TrajectoryMethod::Tdpt;
    traj.times = trace.times;
    traj.states.reserve(n);
    traj.norms.reserve(n);
    const Complex minus_ig(0.0, -g);
    for (std::size_t k = 0; k < n; ++k) {
        const ComplexVector raw = u[k] * (phi0 + minus_ig * integral[k]);
        const double norm2 = raw.squaredNorm();
        traj.norms.push_back(norm2);
        traj.states.push_back(raw / std::sqrt(norm2));
    }
    return traj;
}

RelationalTrajectory integrate_tdse_reference(const ComplexMatrix& h0_s, const PotentialTrace& trace,
                                              double g, const ComplexVector& phi0, int substeps) {
    require_state(h0_s, trace, phi0);
    if (substeps < 1) throw Error(ErrorCode::ConfigInvalid, "substeps must be positive");
    const std::size_t n = trace.times.size();
    const double h = trace.step() / substeps;
    const Complex minus_i(0.0, -1.0);

    RelationalTrajectory traj;
    traj.method = TrajectoryMethod::Reference;
    traj.times = trace.times;
    traj.states.reserve(n);
    traj.norms.reserve(n);

    ComplexVector phi = phi0;
    traj.states.push_back(phi);
    traj.norms.push_back(phi.squaredNorm());
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const ComplexMatrix h_left = h0_s + g * trace.samples[k];
        const ComplexMatrix h_right = h0_s + g * trace.samples[k + 1];
        // Hamiltonian at fraction x of the current interval.
        auto rhs = [&](double x, const ComplexVector& y) -> ComplexVector {
            return minus_i * (((1.0 - x) * h_left + x * h_right) * y);
        };
        for (int j = 0; j < substeps; ++j) {
            const double x0 = static_cast<double>(j) / substeps;
            const double xm = (j + 0.5) / substeps;
            const double x1 = static_cast<double>(j + 1) / substeps;
            const ComplexVector k1 = rhs(x0, phi);
            const ComplexVector k2 = rhs(xm, phi + 0.5 * h * k1);
            const ComplexVector k3 = rhs(xm, phi + 0.5 * h * k2);
            const ComplexVector k4 = rhs(x1, phi + h * k3);
            phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double norm2 = phi.squaredNorm();
        traj.norms.push_back(norm2);
        traj.states.push_back(phi / std::sqrt(norm2));
    }
    return traj;
}

ComparisonReport compare_trajectories(const RelationalTrajectory& a, const RelationalTrajectory& b) {
    if (a.size() != b.size() || a.size() == 0) {
        throw Error(ErrorCode::GridMismatch, "trajectories have different lengths");
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-12 * std::max(1.0, std::abs(a.times[k]))) {
            throw Error(ErrorCode::GridMismatch, "trajectories use different time grids");
        }
        if (a.states[k].size() != b.states[k].size()) {
            throw Error(ErrorCode::DimensionMismatch, "trajectories live in different spaces");
        }
    }

    ComparisonReport report;
    const Eigen::Index dim = a.states.front().size();
    report.max_pop_deviation_per_level.assign(static_cast<std::size_t>(dim), 0.0);
    double gap_sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (Eigen::Index level = 0; level < dim; ++level) {
            const double d = std::abs(a.population(k, level) - b.population(k, level));
            auto& slot = report.max_pop_deviation_per_level[static_cast<std::size_t>(level)];
            slot = std::max(slot, d);
        }
        const double fidelity = std::min(1.0, std::abs(a.states[k].dot(b.states[k])));
        gap_sum += 1.0 - fidelity;
    }
    report.max_pop_deviation = *std::max_element(report.max_pop_deviation_per_level.begin(),
                                                 report.max_pop_deviation_per_level.end());
    report.mean_fidelity_gap = gap_sum / static_cast<double>(a.size());
    return report;
}

double fit_scaling_exponent(std::span<const double> gs, std::span<const double> deviations) {
    if (gs.size() != deviations.size() || gs.size() < 2) {
        throw Error(ErrorCode::ConfigInvalid, "scaling fit needs at least two (g, deviation) pairs");
    }
    const auto n = static_cast<double>(gs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (!(gs[i] > 0.0) || !(deviations[i] > 0.0)) {
            throw Error(ErrorCode::ConfigInvalid, "scaling fit needs positive g and deviations");
        }
        const double x = std::log(gs[i]);
        const double y = std::log(deviations[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error(ErrorCode::ConfigInvalid, "scaling fit needs distinct g values");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace relchron
