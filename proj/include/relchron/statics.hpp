#pragma once

// First-order time-independent perturbation theory around an eigenlevel of
// H_tot,0, for both isolated and degenerate levels.

#include <cstddef>
#include <vector>

#include "relchron/numerics.hpp"

namespace relchron {

/// psi0 + g psi1 (+ g psi2_deg on the degenerate path) and E0 + g E1.
///
/// `psi2_deg` is the component inside the degenerate subspace orthogonal to
/// psi0. It is stored already divided by one power of g, so it enters the
/// state at the same order as psi1. Zero for isolated levels.
struct PerturbedEigenstate {
    double e0 = 0.0;
    double e1 = 0.0;
    ComplexVector psi0;
    ComplexVector psi1;
    ComplexVector psi2_deg;
    int degeneracy = 1;
    /// Orthonormal basis of the E0 eigenspace. On the degenerate path these
    /// are the eigenvectors of the projected coupling, ascending in E1.
    std::vector<ComplexVector> subspace_basis;
    /// Index of psi0 within subspace_basis.
    std::size_t branch = 0;

    [[nodiscard]] ComplexMatrix subspace_projector() const;
    /// Projector onto the degenerate subspace minus |psi0><psi0|.
    [[nodiscard]] ComplexMatrix complement_projector() const;
};

/// Non-degenerate first order. `level_index` counts eigenvalues of H_tot0 in
/// ascending order. Throws DegenerateLevel when the level has a neighbour
/// within kernel_tol * spectral range.
PerturbedEigenstate tipt_first_order(const ComplexMatrix& h_tot0, const ComplexMatrix& v,
                                     std::size_t level_index,
                                     double kernel_tol = kDefaultKernelTol);

/// Degenerate first order at energy `e0`. psi0 is the `branch_index`-th
/// (ascending) eigenvector of P0 V P0 in the E0 eigenspace. Throws
/// DegeneracyNotLifted if those eigenvalues are not pairwise distinct by
/// more than 1e-9 ||V||_F, and DegenerateLevel if the eigenspace at e0 is
/// one-dimensional or empty.
PerturbedEigenstate tipt_degenerate(const ComplexMatrix& h_tot0, const ComplexMatrix& v, double e0,
                                    std::size_t branch_index,
                                    double kernel_tol = kDefaultKernelTol);

/// normalize(psi0 + g (psi1 + psi2_deg)).
ComplexVector assemble_corrected_state(const PerturbedEigenstate& p, double g);

/// ||(E0 - H_tot0) Pbar0||_max.
double verify_degenerate_kernel(const ComplexMatrix& h_tot0, double e0, const ComplexMatrix& pbar0);

/// ||(E0 - H_tot0) psi1 - (V - E1) psi0|| with the component inside the
/// degenerate subspace removed from the residual.
double first_order_residual(const ComplexMatrix& h_tot0, const ComplexMatrix& v,
                            const PerturbedEigenstate& p);

/// Column of `s` with the largest overlap with `probe`.
std::size_t find_level(const Spectrum& s, const ComplexVector& probe);

}  // namespace relchron
