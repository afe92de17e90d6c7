#include "relchron/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relchron {

namespace {

void require_square(const ComplexMatrix& m, Eigen::Index dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        std::ostringstream msg;
        msg << what << " is " << m.rows() << "x" << m.cols() << ", expected " << dim << "x" << dim;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
    if (hermiticity_defect(m) > kModelHermitianTol * std::max(1.0, m.norm())) {
        throw Error(ErrorCode::NotHermitian, std::string(what) + " is not Hermitian");
    }
}

}  // namespace

ComplexMatrix BipartiteSpace::embed_system(const ComplexMatrix& a) const {
    return kron(a, ComplexMatrix::Identity(dim_c, dim_c));
}

ComplexMatrix BipartiteSpace::embed_clock(const ComplexMatrix& b) const {
    return kron(ComplexMatrix::Identity(dim_s, dim_s), b);
}

void GlobalModel::validate() const {
    if (space.dim_s < 1 || space.dim_c < 1) {
        throw Error(ErrorCode::DimensionMismatch, "subsystem dimensions must be positive");
    }
    require_square(h0_s, space.dim_s, "H0");
    require_square(h_c, space.dim_c, "H_C");
    require_square(coupling, space.global_dim(), "coupling");
    require_hermitian(h0_s, "H0");
    require_hermitian(h_c, "H_C");
    require_hermitian(coupling, "coupling");
}

ClockState ClockState::make(BipartiteSpace space, ComplexVector amplitudes, std::string label) {
    if (amplitudes.size() != space.dim_c) {
        throw Error(ErrorCode::DimensionMismatch, "clock amplitudes need dim_c entries");
    }
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12) {
        throw Error(ErrorCode::ConfigInvalid, "clock state must be normalized");
    }
    return ClockState{space, std::move(amplitudes), std::move(label)};
}

ComplexMatrix assemble_h_tot0(const GlobalModel& m) {
    m.validate();
    return m.space.embed_system(m.h0_s) + m.space.embed_clock(m.h_c);
}

ComplexMatrix assemble_h_tot(const GlobalModel& m) {
    return assemble_h_tot0(m) + m.g * m.coupling;
}

ComplexVector partial_overlap(const ComplexVector& psi, const ClockState& chi) {
    const BipartiteSpace& sp = chi.space;
    if (psi.size() != sp.global_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "global state dimension does not match the clock space");
    }
    // Row s of the reshaped global vector holds the clock amplitudes of system level s.
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        grid(psi.data(), sp.dim_s, sp.dim_c);
    return grid * chi.amplitudes.conjugate();
}

ConditionedState condition(const ComplexVector& psi, const ClockState& chi, double n_floor) {
    ComplexVector raw = partial_overlap(psi, chi);
    const double n = raw.squaredNorm();
    if (!(n >= n_floor)) {
        std::ostringstream msg;
        msg << "N = " << n << " below floor " << n_floor;
        if (!chi.label.empty()) msg << " for clock state '" << chi.label << "'";
        throw Error(ErrorCode::VanishingOverlap, msg.str());
    }
    return ConditionedState{raw / std::sqrt(n), n};
}

ComplexMatrix clock_projector(const ClockState& chi) {
    return chi.amplitudes * chi.amplitudes.adjoint();
}

}  // namespace relchron
