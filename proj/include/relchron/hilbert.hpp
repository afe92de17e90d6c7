#pragma once

// System (x) clock bookkeeping. Global basis index is system-major:
// g = s * dim_c + c.

#include <cstddef>
#include <string>

#include "relchron/numerics.hpp"

namespace relchron {

inline constexpr double kNormFloor = 1e-14;
inline constexpr double kModelHermitianTol = 1e-12;

struct BipartiteSpace {
    Eigen::Index dim_s = 1;
    Eigen::Index dim_c = 1;

    [[nodiscard]] Eigen::Index global_dim() const { return dim_s * dim_c; }
    [[nodiscard]] Eigen::Index index(Eigen::Index s, Eigen::Index c) const { return s * dim_c + c; }

    /// Embeds a system operator as A (x) 1_C.
    [[nodiscard]] ComplexMatrix embed_system(const ComplexMatrix& a) const;
    /// Embeds a clock operator as 1 (x) B.
    [[nodiscard]] ComplexMatrix embed_clock(const ComplexMatrix& b) const;
};

/// H_tot = H0 (x) 1 + 1 (x) H_C + g V.
struct GlobalModel {
    BipartiteSpace space;
    ComplexMatrix h0_s;
    ComplexMatrix h_c;
    ComplexMatrix coupling;
    double g = 0.0;

    /// Throws DimensionMismatch or NotHermitian.
    void validate() const;
};

struct ClockState {
    BipartiteSpace space;
    ComplexVector amplitudes;
    std::string label;

    /// Throws unless the amplitudes have dim_c entries and unit norm (1e-12).
    static ClockState make(BipartiteSpace space, ComplexVector amplitudes, std::string label = {});
};

struct ConditionedState {
    ComplexVector phi;
    double norm = 0.0;  // N = <<Psi| 1 (x) |chi><chi| |Psi>>
};

ComplexMatrix assemble_h_tot0(const GlobalModel& m);
ComplexMatrix assemble_h_tot(const GlobalModel& m);

/// Partial inner product <chi|Psi>> without normalization:
/// raw[s] = sum_c conj(chi[c]) Psi[s * dim_c + c].
ComplexVector partial_overlap(const ComplexVector& psi, const ClockState& chi);

/// Relational system state. Throws VanishingOverlap when N < n_floor.
ConditionedState condition(const ComplexVector& psi, const ClockState& chi,
                           double n_floor = kNormFloor);

/// |chi><chi| on the clock space.
ComplexMatrix clock_projector(const ClockState& chi);

}  // namespace relchron
