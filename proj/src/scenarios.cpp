#include "relchron/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace relchron::spin {

namespace {

constexpr double kIntegerTol = 1e-9;

bool near_integer(double x, double* nearest = nullptr) {
    const double r = std::round(x);
    if (nearest != nullptr) *nearest = r;
    return std::abs(x - r) <= kIntegerTol;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

Eigen::Index clock_index(int J, int m) { return static_cast<Eigen::Index>(m + J); }

}  // namespace

std::string_view to_string(Branch b) {
    return b == Branch::Nondegenerate ? "NONDEGENERATE" : "DEGENERATE_PLUS";
}

Branch parse_branch(std::string_view text) {
    if (text == "NONDEGENERATE") return Branch::Nondegenerate;
    if (text == "DEGENERATE_PLUS") return Branch::DegeneratePlus;
    invalid("unknown branch '" + std::string(text) + "' (expected NONDEGENERATE or DEGENERATE_PLUS)");
}

double SpinScenarioConfig::period() const { return 2.0 * std::numbers::pi / ecal; }

double SpinScenarioConfig::resolved_t_max() const { return t_max > 0.0 ? t_max : period(); }

void SpinScenarioConfig::validate() const {
    if (J < 1) invalid("J must be a positive integer");
    if (!std::isfinite(g) || !std::isfinite(eps) || !std::isfinite(ecal) || !std::isfinite(a) ||
        !std::isfinite(t_max)) {
        invalid("scenario parameters must be finite");
    }
    if (!(ecal > 0.0)) invalid("Ecal must be positive");
    if (!(a > 0.0)) invalid("Gaussian width a must be positive");
    if (n_times < 2) invalid("n_times must be at least 2");

    const double ratio = eps / ecal;
    switch (branch) {
        case Branch::Nondegenerate: {
            // |up, 0> (energy eps) collides with |down, m> when 2 eps = m Ecal.
            double m = 0.0;
            if (near_integer(ratio)) invalid("NONDEGENERATE needs eps/Ecal non-integer");
            if (near_integer(2.0 * ratio, &m) && std::abs(m) <= J) {
                invalid("NONDEGENERATE needs 2 eps/Ecal to avoid the clock levels -J..J");
            }
            break;
        }
        case Branch::DegeneratePlus:
            if (std::abs(ratio - 1.0) > kIntegerTol) invalid("DEGENERATE_PLUS needs eps = Ecal");
            break;
    }
}

ClockCoefficients ClockCoefficients::gaussian(int J, double a) {
    if (J < 1 || !(a > 0.0)) invalid("Gaussian coefficients need J >= 1 and a > 0");
    ComplexVector b(2 * J + 1);
    for (int m = -J; m <= J; ++m) {
        const double x = static_cast<double>(m) / J;
        b[clock_index(J, m)] = std::exp(-a * x * x);
    }
    return ClockCoefficients{J, b.normalized()};
}

ClockCoefficients ClockCoefficients::from_vector(int J, ComplexVector b) {
    if (b.size() != 2 * J + 1) invalid("clock coefficients need 2J+1 entries");
    if (!(b.norm() > 0.0)) invalid("clock coefficients must not all vanish");
    return ClockCoefficients{J, b.normalized()};
}

ComplexMatrix pauli_x() {
    ComplexMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

ComplexMatrix pauli_y() {
    const Complex i(0.0, 1.0);
    ComplexMatrix s(2, 2);
    s << 0.0, -i, i, 0.0;
    return s;
}

ComplexMatrix pauli_z() {
    ComplexMatrix s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

ComplexMatrix spin_jz(int J) {
    ComplexMatrix jz = ComplexMatrix::Zero(2 * J + 1, 2 * J + 1);
    for (int m = -J; m <= J; ++m) jz(clock_index(J, m), clock_index(J, m)) = static_cast<double>(m);
    return jz;
}

ComplexMatrix all_ones(Eigen::Index n) { return ComplexMatrix::Ones(n, n); }

ComplexVector basis_state(int J, Eigen::Index s, int m) {
    const BipartiteSpace sp{2, 2 * J + 1};
    ComplexVector v = ComplexVector::Zero(sp.global_dim());
    v[sp.index(s, clock_index(J, m))] = 1.0;
    return v;
}

double degenerate_g_constant(int J) { return 0.5 * (1.0 / J + 1.0 / (J + 1.0)); }

Scenario build_scenario(const SpinScenarioConfig& cfg) {
    cfg.validate();
    return build_scenario(cfg, ClockCoefficients::gaussian(cfg.J, cfg.a));
}

Scenario build_scenario(const SpinScenarioConfig& cfg, const ClockCoefficients& coeffs) {
    cfg.validate();
    if (coeffs.J != cfg.J) invalid("clock coefficients were built for a different J");
    const int J = cfg.J;
    const BipartiteSpace sp{2, 2 * J + 1};

    Scenario sc;
    sc.config = cfg;
    sc.coefficients = coeffs;
    sc.model.space = sp;
    sc.model.h0_s = cfg.eps * pauli_z();
    sc.model.h_c = cfg.ecal * spin_jz(J);
    sc.model.coupling = kron(pauli_x(), all_ones(sp.dim_c));
    sc.model.g = cfg.g;
    sc.model.validate();
    sc.clock = ClockState::make(sp, coeffs.b, "gaussian");

    PerturbedEigenstate& p = sc.expected;
    const Eigen::Index n = sp.global_dim();
    p.psi1 = ComplexVector::Zero(n);
    p.psi2_deg = ComplexVector::Zero(n);
    if (cfg.branch == Branch::Nondegenerate) {
        p.e0 = cfg.eps;
        p.e1 = 0.0;
        p.psi0 = basis_state(J, kUp, 0);
        for (int m = -J; m <= J; ++m) {
            p.psi1[sp.index(kDown, clock_index(J, m))] = 1.0 / (2.0 * cfg.eps - m * cfg.ecal);
        }
        p.degeneracy = 1;
        p.subspace_basis = {p.psi0};
        p.branch = 0;
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        const ComplexVector up_m1 = basis_state(J, kUp, -1);
        const ComplexVector down_p1 = basis_state(J, kDown, 1);
        const ComplexVector beta_plus = r * (up_m1 + down_p1);
        const ComplexVector beta_minus = r * (up_m1 - down_p1);
        p.e0 = cfg.eps - cfg.ecal;
        p.e1 = 1.0;
        p.psi0 = beta_plus;
        const double pre = -r / cfg.ecal;
        for (int m = -J; m <= J; ++m) {
            if (m != 1) p.psi1[sp.index(kDown, clock_index(J, m))] = pre / (m - 1);
            if (m != -1) p.psi1[sp.index(kUp, clock_index(J, m))] = pre / (m + 1);
        }
        p.psi2_deg = (degenerate_g_constant(J) / cfg.ecal) * beta_minus;
        p.degeneracy = 2;
        p.subspace_basis = {beta_minus, beta_plus};
        p.branch = 1;
    }
    return sc;
}

PerturbedEigenstate generic_tipt(const Scenario& sc, double kernel_tol) {
    const ComplexMatrix h_tot0 = assemble_h_tot0(sc.model);
    if (sc.config.branch == Branch::Nondegenerate) {
        const Spectrum spec = hermitian_eigensolve(h_tot0);
        const std::size_t level = find_level(spec, basis_state(sc.config.J, kUp, 0));
        return tipt_first_order(h_tot0, sc.model.coupling, level, kernel_tol);
    }
    // The projected coupling has eigenvalues -1, +1; the plus branch is index 1.
    return tipt_degenerate(h_tot0, sc.model.coupling, sc.config.eps - sc.config.ecal, 1, kernel_tol);
}

Complex eval_b(const ClockCoefficients& coeffs, double ecal, double t) {
    Complex sum = 0.0;
    for (int m = -coeffs.J; m <= coeffs.J; ++m) {
        sum += std::conj(coeffs.at(m)) * std::polar(1.0, t * m * ecal);
    }
    return sum;
}

ComplexMatrix analytic_effective_potential(const SpinScenarioConfig& cfg, const ClockCoefficients& coeffs,
                                           double t) {
    const Complex b_t = eval_b(coeffs, cfg.ecal, t);
    if (cfg.branch == Branch::Nondegenerate) {
        const Complex b0 = coeffs.at(0);
        if (std::norm(b0) < kNormFloor) {
            throw Error(ErrorCode::VanishingAmplitude, "clock population of m = 0 vanishes");
        }
        const Complex x = b0 * b_t;
        return (x.real() * pauli_x() + x.imag() * pauli_y()) / std::norm(b0);
    }
    const Complex bm = coeffs.at(-1);
    const Complex bp = coeffs.at(1);
    const double weight = std::norm(bm) + std::norm(bp);
    if (weight < kNormFloor) {
        throw Error(ErrorCode::VanishingAmplitude, "clock populations of m = -1 and m = +1 vanish");
    }
    const Complex fwd = std::polar(1.0, t * cfg.ecal);
    const Complex bwd = std::conj(fwd);
    // sigma_z weight is (<up|V|up> - <down|V|down>) / 2 of the symmetrized operator.
    const double z = (b_t * (bm * fwd - bp * bwd)).real();
    const Complex xy = fwd * (bm * b_t + std::conj(bp) * std::conj(b_t));
    return (z * pauli_z() + xy.real() * pauli_x() + xy.imag() * pauli_y()) / weight;
}

ComplexMatrix analytic_effective_potential_symmetric(const SpinScenarioConfig& cfg,
                                                     const ClockCoefficients& coeffs, double t) {
    const double b_t = eval_b(coeffs, cfg.ecal, t).real();
    if (cfg.branch == Branch::Nondegenerate) {
        const double b0 = coeffs.at(0).real();
        if (std::abs(b0) * std::abs(b0) < kNormFloor) {
            throw Error(ErrorCode::VanishingAmplitude, "clock population of m = 0 vanishes");
        }
        return (b_t / b0) * pauli_x();
    }
    const double b1 = coeffs.at(1).real();
    if (std::abs(b1) * std::abs(b1) < kNormFloor) {
        throw Error(ErrorCode::VanishingAmplitude, "clock population of m = 1 vanishes");
    }
    return (b_t / b1) * (std::cos(t * cfg.ecal) * pauli_x() + std::sin(t * cfg.ecal) * pauli_y());
}

DegenerateElements analytic_degenerate_elements(const SpinScenarioConfig& cfg,
                                                const ClockCoefficients& coeffs, double t,
                                                double energy) {
    if (cfg.branch != Branch::DegeneratePlus) invalid("Degenerate elements exist only for DEGENERATE_PLUS");
    const double r = 1.0 / std::sqrt(2.0);
    const Complex bm = coeffs.at(-1);
    const Complex bp = coeffs.at(1);
    const Complex b_t = eval_b(coeffs, cfg.ecal, t);
    const Complex global = std::polar(1.0, -t * energy);
    const Complex fwd = std::polar(1.0, t * cfg.ecal);
    const Complex bwd = std::conj(fwd);

    DegenerateElements out;
    out.overlap = ComplexVector(2);
    out.overlap[kUp] = r * global * std::conj(bm) * bwd;
    out.overlap[kDown] = r * global * std::conj(bp) * fwd;
    out.v_psi_overlap = ComplexVector::Constant(2, r * b_t * global);
    out.n0 = 0.5 * (std::norm(bm) + std::norm(bp));
    out.scalar = 0.5 * std::conj(b_t) * (std::conj(bp) * fwd + std::conj(bm) * bwd);
    return out;
}

ComplexVector analytic_initial_state(const SpinScenarioConfig& cfg, const ClockCoefficients& coeffs) {
    ComplexVector phi(2);
    phi[kUp] = std::conj(coeffs.at(0));
    Complex sum = 0.0;
    for (int m = -cfg.J; m <= cfg.J; ++m) sum += std::conj(coeffs.at(m)) / (2.0 * cfg.eps - m * cfg.ecal);
    phi[kDown] = cfg.g * sum;
    return phi.normalized();
}

}  // namespace relchron::spin
