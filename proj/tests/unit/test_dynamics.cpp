#include <cmath>
#include <numbers>

#include "relchron/dynamics.hpp"
#include "relchron/pipeline.hpp"
#include "relchron/scenarios.hpp"
#include "support.hpp"

using namespace relchron;
using relchron::test::expect_error;

namespace {

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

PotentialTrace constant_trace(const ComplexMatrix& v, std::size_t n, double t_max) {
    PotentialTrace tr;
    tr.times = uniform_grid(n, t_max);
    tr.samples.assign(n, v);
    return tr;
}

PotentialTrace rotating_trace(std::size_t n, double t_max) {
    PotentialTrace tr;
    tr.times = uniform_grid(n, t_max);
    for (const double t : tr.times) {
        tr.samples.push_back(std::cos(1.3 * t) * spin::pauli_x() + std::sin(0.7 * t) * spin::pauli_y() +
                             0.4 * spin::pauli_z());
    }
    return tr;
}

ComplexVector plus_state() { return ComplexVector::Ones(2).normalized(); }

spin::SpinScenarioConfig nondegenerate(double g) {
    spin::SpinScenarioConfig c;
    c.g = g;
    return c;
}

spin::SpinScenarioConfig degenerate(double g) {
    spin::SpinScenarioConfig c;
    c.g = g;
    c.eps = 1.0;
    c.branch = spin::Branch::DegeneratePlus;
    return c;
}

}  // namespace

TEST(PotentialTraceValidation, RejectsBadGrids) {
    PotentialTrace tr = constant_trace(spin::pauli_x(), 5, 1.0);
    EXPECT_NO_THROW(tr.validate());
    EXPECT_DOUBLE_EQ(tr.step(), 0.25);

    PotentialTrace shifted = tr;
    for (auto& t : shifted.times) t += 0.1;
    expect_error(ErrorCode::GridMismatch, [&] { shifted.validate(); });

    PotentialTrace uneven = tr;
    uneven.times[2] = 0.6;
    expect_error(ErrorCode::GridMismatch, [&] { uneven.validate(); });

    PotentialTrace short_tr = tr;
    short_tr.samples.pop_back();
    expect_error(ErrorCode::GridMismatch, [&] { short_tr.validate(); });

    PotentialTrace bad = tr;
    bad.samples[1](0, 1) = 3.0;
    expect_error(ErrorCode::NotHermitian, [&] { bad.validate(); });
}

TEST(Tdpt, ZeroCouplingIsFreeEvolution) {
    const ComplexMatrix h0 = diag2(0.32, -0.32);
    const auto tr = rotating_trace(101, 5.0);
    const auto traj = tdpt_first_order(h0, tr, 0.0, plus_state());
    const Spectrum s = hermitian_eigensolve(h0);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        EXPECT_LT((traj.states[k] - spectral_propagator(s, traj.times[k]) * plus_state()).norm(), 1e-13);
        EXPECT_NEAR(traj.norms[k], 1.0, 1e-14);
    }
    EXPECT_EQ(traj.method, TrajectoryMethod::Tdpt);
}

TEST(Tdpt, CommutingConstantPotentialMatchesExpansion) {
    const ComplexMatrix h0 = diag2(0.5, -0.5);
    const ComplexMatrix v = diag2(0.3, -0.2);
    const double t_max = 4.0;
    const auto tr = constant_trace(v, 201, t_max);
    std::vector<double> gs{0.08, 0.04, 0.02};
    std::vector<double> errs;
    for (const double g : gs) {
        const auto traj = tdpt_first_order(h0, tr, g, plus_state());
        const Spectrum s = hermitian_eigensolve(h0 + g * v);
        double err = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const ComplexVector exact = spectral_propagator(s, traj.times[k]) * plus_state();
            const ComplexVector first = spectral_propagator(hermitian_eigensolve(h0), traj.times[k]) *
                                        (plus_state() - Complex(0.0, g * traj.times[k]) * (v * plus_state()));
            // Quadrature of a constant integrand is exact.
            EXPECT_LT((traj.states[k] - first.normalized()).norm(), 1e-12);
            err = std::max(err, (traj.states[k] - exact).norm());
        }
        errs.push_back(err);
    }
    EXPECT_GT(fit_scaling_exponent(gs, errs), 1.9);
}

TEST(Tdpt, QuadratureHandlesOddAndEvenIntervalCounts) {
    // Integrand polynomial in time: Simpson and 3/8 are exact for cubics.
    const ComplexMatrix h0 = ComplexMatrix::Zero(2, 2);
    for (const std::size_t n : {4u, 5u, 7u, 10u}) {
        PotentialTrace tr;
        tr.times = uniform_grid(n, 2.0);
        for (const double t : tr.times) tr.samples.push_back((t * t * t - t) * spin::pauli_x());
        const double g = 1e-3;
        const auto traj = tdpt_first_order(h0, tr, g, plus_state());
        for (std::size_t k = 1; k < n; ++k) {
            const double t = traj.times[k];
            const double integral = t * t * t * t / 4.0 - t * t / 2.0;
            const ComplexVector expected =
                (plus_state() - Complex(0.0, g * integral) * (spin::pauli_x() * plus_state())).normalized();
            EXPECT_LT((traj.states[k] - expected).norm(), 1e-13) << "n = " << n << ", k = " << k;
        }
    }
}

TEST(Tdpt, NormDeviationIsSecondOrder) {
    std::vector<double> gs{0.17, 0.085, 0.0425};
    std::vector<double> devs;
    for (const double g : gs) {
        const auto r = run_pipeline(nondegenerate(g));
        double dev = 0.0;
        for (const double n : r.tdpt_traj.norms) dev = std::max(dev, std::abs(n - 1.0));
        devs.push_back(dev);
    }
    EXPECT_GE(fit_scaling_exponent(gs, devs), 1.9);
}

TEST(Tdpt, FullPotentialChangesTrajectoryAtSecondOrder) {
    for (const auto& base : {nondegenerate(0.17), degenerate(0.29)}) {
        std::vector<double> gs{base.g, base.g / 2, base.g / 4};
        std::vector<double> devs;
        for (const double g : gs) {
            auto c = base;
            c.g = g;
            devs.push_back(run_pipeline(c).tdpt_vs_tdpt_full.max_pop_deviation);
        }
        EXPECT_GE(fit_scaling_exponent(gs, devs), 1.9) << spin::to_string(base.branch);
    }
}

TEST(Reference, ZeroCouplingIsFreeEvolution) {
    const ComplexMatrix h0 = diag2(0.32, -0.32) + 0.2 * spin::pauli_x();
    const auto tr = rotating_trace(101, 2.0 * std::numbers::pi);
    const auto traj = integrate_tdse_reference(h0, tr, 0.0, plus_state());
    const Spectrum s = hermitian_eigensolve(h0);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        EXPECT_LT((traj.states[k] - spectral_propagator(s, traj.times[k]) * plus_state()).norm(), 1e-9);
    }
    EXPECT_EQ(traj.method, TrajectoryMethod::Reference);
}

TEST(Reference, ConstantHamiltonianMatchesPropagator) {
    const ComplexMatrix h0 = diag2(0.32, -0.32);
    const ComplexMatrix v = spin::pauli_x() + 0.5 * spin::pauli_y();
    const double g = 0.4;
    const auto tr = constant_trace(v, 401, 2.0 * std::numbers::pi);
    const auto traj = integrate_tdse_reference(h0, tr, g, plus_state());
    const Spectrum s = hermitian_eigensolve(h0 + g * v);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        EXPECT_LT((traj.states[k] - spectral_propagator(s, traj.times[k]) * plus_state()).norm(), 1e-8);
    }
}

TEST(Reference, FourthOrderConvergence) {
    const ComplexMatrix h0 = diag2(0.32, -0.32);
    const auto tr = rotating_trace(41, 2.0 * std::numbers::pi);
    const double g = 0.8;
    const auto fine = integrate_tdse_reference(h0, tr, g, plus_state(), 256);
    const auto coarse = integrate_tdse_reference(h0, tr, g, plus_state(), 1);
    const auto half = integrate_tdse_reference(h0, tr, g, plus_state(), 2);
    const double e1 = (coarse.states.back() - fine.states.back()).norm();
    const double e2 = (half.states.back() - fine.states.back()).norm();
    EXPECT_GT(e1 / e2, 12.0);
    EXPECT_LT(e1 / e2, 20.0);
}

TEST(Reference, NormDriftOverOnePeriod) {
    const auto cfg = nondegenerate(0.17);
    const auto r = run_pipeline(cfg);
    const auto traj = integrate_tdse_reference(r.scenario.model.h0_s, r.trace_full, cfg.g,
                                               r.exact_traj.states.front());
    for (const double n : traj.norms) EXPECT_LE(std::abs(n - 1.0), 1e-8);
}

TEST(Compare, IdenticalTrajectoriesGiveZero) {
    const auto tr = rotating_trace(21, 3.0);
    const auto traj = tdpt_first_order(diag2(1.0, -1.0), tr, 0.3, plus_state());
    const auto rep = compare_trajectories(traj, traj);
    EXPECT_EQ(rep.max_pop_deviation, 0.0);
    EXPECT_LE(rep.mean_fidelity_gap, 1e-15);
    EXPECT_TRUE(std::isnan(rep.scaling_exponent));
}

TEST(Compare, OrthogonalConstantStates) {
    RelationalTrajectory a, b;
    a.times = b.times = uniform_grid(4, 1.0);
    ComplexVector up = ComplexVector::Zero(2), down = ComplexVector::Zero(2);
    up[0] = 1.0;
    down[1] = 1.0;
    a.states.assign(4, up);
    b.states.assign(4, down);
    a.norms = b.norms = std::vector<double>(4, 1.0);
    const auto rep = compare_trajectories(a, b);
    EXPECT_DOUBLE_EQ(rep.mean_fidelity_gap, 1.0);
    EXPECT_DOUBLE_EQ(rep.max_pop_deviation, 1.0);
    ASSERT_EQ(rep.max_pop_deviation_per_level.size(), 2u);
}

TEST(Compare, GridMismatch) {
    const auto t1 = tdpt_first_order(diag2(1.0, -1.0), rotating_trace(21, 3.0), 0.3, plus_state());
    const auto t2 = tdpt_first_order(diag2(1.0, -1.0), rotating_trace(22, 3.0), 0.3, plus_state());
    const auto t3 = tdpt_first_order(diag2(1.0, -1.0), rotating_trace(21, 3.5), 0.3, plus_state());
    expect_error(ErrorCode::GridMismatch, [&] { compare_trajectories(t1, t2); });
    expect_error(ErrorCode::GridMismatch, [&] { compare_trajectories(t1, t3); });
}

TEST(ScalingFit, RecoversPowerLaw) {
    const std::vector<double> gs{0.2, 0.1, 0.05, 0.025};
    std::vector<double> d;
    for (const double g : gs) d.push_back(3.0 * std::pow(g, 2.5));
    EXPECT_NEAR(fit_scaling_exponent(gs, d), 2.5, 1e-12);
    expect_error(ErrorCode::ConfigInvalid, [&] { fit_scaling_exponent(std::vector<double>{0.1}, std::vector<double>{1.0}); });
}
