#pragma once

// Dense complex linear algebra used by every other module: Kronecker
// products, a cyclic Jacobi Hermitian eigensolver, spectral propagators
// and a resolvent that skips a (possibly degenerate) eigenspace.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "relchron/error.hpp"

namespace relchron {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultEigTol = 1e-10;
inline constexpr double kDefaultKernelTol = 1e-9;
inline constexpr double kKernelLeakTol = 1e-8;
inline constexpr int kJacobiMaxSweeps = 100;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend; column k of
/// `eigenvectors` belongs to `eigenvalues[k]`. Each column has its
/// largest-magnitude component real and positive.
struct Spectrum {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    [[nodiscard]] Eigen::Index size() const { return eigenvalues.size(); }
    [[nodiscard]] double range() const;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |M_ij - conj(M_ji)|.
double hermiticity_defect(const ComplexMatrix& m);

/// Cyclic Jacobi sweeps with 2x2 complex rotations. Stops once the
/// off-diagonal Frobenius norm drops below 1e-12 ||M||_F; throws
/// NoConvergence after kJacobiMaxSweeps or if the finished decomposition
/// misses `tol_eig` (residual relative to ||M||_F, orthonormality absolute).
/// Throws NotHermitian when ||M - M^dagger||_max > 1e-12 ||M||_F.
Spectrum hermitian_eigensolve(const ComplexMatrix& m, double tol_eig = kDefaultEigTol);

/// exp(-i t (H - shift)) assembled from the eigenpairs of H.
ComplexMatrix spectral_propagator(const Spectrum& s, double t, double shift = 0.0);

/// Applies sum_k (E0 - lambda_k)^{-1} v_k v_k^dagger over the eigenpairs
/// with |lambda_k - E0| > kernel_tol * range. Throws KernelLeak when `x`
/// carries more than kKernelLeakTol (relative to ||x||) weight in the
/// excluded eigenspace.
ComplexVector resolvent_apply(const Spectrum& s, double e0, double kernel_tol,
                              const ComplexVector& x);

/// Column indices of eigenvalues within kernel_tol * range of `e0`.
std::vector<Eigen::Index> eigenspace_indices(const Spectrum& s, double e0,
                                             double kernel_tol = kDefaultKernelTol);

/// Multiplies `v` by a unit phase so that its largest-magnitude component
/// is real and positive (first index wins ties).
void fix_phase(Eigen::Ref<ComplexVector> v);

/// Largest residual ||M v_k - lambda_k v_k|| over all eigenpairs.
double max_residual(const ComplexMatrix& m, const Spectrum& s);

/// ||V^dagger V - I||_max.
double orthonormality_defect(const ComplexMatrix& v);

}  // namespace relchron
