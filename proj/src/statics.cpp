#include "relchron/statics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relchron {

namespace {

void require_pair(const ComplexMatrix& h_tot0, const ComplexMatrix& v) {
    if (h_tot0.rows() != h_tot0.cols() || v.rows() != h_tot0.rows() || v.cols() != h_tot0.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "H_tot0 and V must be square and of equal size");
    }
    if (hermiticity_defect(v) > 1e-12 * std::max(1.0, v.norm())) {
        throw Error(ErrorCode::NotHermitian, "coupling is not Hermitian");
    }
}

}  // namespace

ComplexMatrix PerturbedEigenstate::subspace_projector() const {
    const Eigen::Index n = psi0.size();
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (const auto& b : subspace_basis) p += b * b.adjoint();
    return p;
}

ComplexMatrix PerturbedEigenstate::complement_projector() const {
    return subspace_projector() - psi0 * psi0.adjoint();
}

PerturbedEigenstate tipt_first_order(const ComplexMatrix& h_tot0, const ComplexMatrix& v,
                                     std::size_t level_index, double kernel_tol) {
    require_pair(h_tot0, v);
    const Spectrum spec = hermitian_eigensolve(h_tot0);
    const auto level = static_cast<Eigen::Index>(level_index);
    if (level >= spec.size()) {
        throw Error(ErrorCode::DimensionMismatch, "level index out of range");
    }

    const double e0 = spec.eigenvalues[level];
    const auto members = eigenspace_indices(spec, e0, kernel_tol);
    if (members.size() > 1) {
        std::ostringstream msg;
        msg << "level " << level_index << " at E0 = " << e0 << " is " << members.size()
            << "-fold degenerate; use tipt_degenerate";
        throw Error(ErrorCode::DegenerateLevel, msg.str());
    }

    PerturbedEigenstate p;
    p.e0 = e0;
    p.psi0 = spec.eigenvectors.col(level);
    const Complex e1 = p.psi0.dot(v * p.psi0);
    p.e1 = e1.real();
    const ComplexVector source = v * p.psi0 - p.e1 * p.psi0;
    p.psi1 = resolvent_apply(spec, e0, kernel_tol, source);
    p.psi2_deg = ComplexVector::Zero(p.psi0.size());
    p.degeneracy = 1;
    p.subspace_basis = {p.psi0};
    p.branch = 0;
    return p;
}

PerturbedEigenstate tipt_degenerate(const ComplexMatrix& h_tot0, const ComplexMatrix& v, double e0,
                                    std::size_t branch_index, double kernel_tol) {
    require_pair(h_tot0, v);
    const Spectrum spec = hermitian_eigensolve(h_tot0);
    const auto members = eigenspace_indices(spec, e0, kernel_tol);
    const auto d = static_cast<Eigen::Index>(members.size());
    if (d < 2) {
        std::ostringstream msg;
        msg << "eigenspace at E0 = " << e0 << " has dimension " << d << ", not degenerate";
        throw Error(ErrorCode::DegenerateLevel, msg.str());
    }
    if (static_cast<Eigen::Index>(branch_index) >= d) {
        throw Error(ErrorCode::DimensionMismatch, "branch index exceeds the degeneracy");
    }

    ComplexMatrix basis(h_tot0.rows(), d);
    for (Eigen::Index k = 0; k < d; ++k) basis.col(k) = spec.eigenvectors.col(members[static_cast<std::size_t>(k)]);

    const ComplexMatrix reduced = basis.adjoint() * v * basis;
    const Spectrum sub = hermitian_eigensolve(0.5 * (reduced + reduced.adjoint()));

    const double split_tol = 1e-9 * v.norm();
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        if (sub.eigenvalues[k + 1] - sub.eigenvalues[k] <= split_tol) {
            std::ostringstream msg;
            msg << "projected coupling has repeated eigenvalue " << sub.eigenvalues[k]
                << "; the degeneracy is not lifted at first order";
            throw Error(ErrorCode::DegeneracyNotLifted, msg.str());
        }
    }

    PerturbedEigenstate p;
    p.e0 = e0;
    p.degeneracy = static_cast<int>(d);
    p.branch = branch_index;
    for (Eigen::Index k = 0; k < d; ++k) {
        ComplexVector b = basis * sub.eigenvectors.col(k);
        fix_phase(b);
        p.subspace_basis.push_back(std::move(b));
    }
    const auto br = static_cast<Eigen::Index>(branch_index);
    p.psi0 = p.subspace_basis[branch_index];
    p.e1 = sub.eigenvalues[br];

    const ComplexMatrix q0 = ComplexMatrix::Identity(v.rows(), v.cols()) - p.subspace_projector();
    p.psi1 = resolvent_apply(spec, e0, kernel_tol, q0 * (v * p.psi0));

    // Inverse of [E1 - P0 V P0] on the complement of psi0 inside the
    // eigenspace, taken in the eigenbasis of the projected coupling.
    const ComplexVector v_psi1 = v * p.psi1;
    p.psi2_deg = ComplexVector::Zero(p.psi0.size());
    for (Eigen::Index k = 0; k < d; ++k) {
        if (k == br) continue;
        const ComplexVector& b = p.subspace_basis[static_cast<std::size_t>(k)];
        p.psi2_deg += b * (b.dot(v_psi1) / (p.e1 - sub.eigenvalues[k]));
    }
    return p;
}

ComplexVector assemble_corrected_state(const PerturbedEigenstate& p, double g) {
    ComplexVector out = p.psi0 + g * p.psi1;
    if (p.psi2_deg.size() == out.size()) out += g * p.psi2_deg;
    return out.normalized();
}

double verify_degenerate_kernel(const ComplexMatrix& h_tot0, double e0, const ComplexMatrix& pbar0) {
    const ComplexMatrix shifted = e0 * ComplexMatrix::Identity(h_tot0.rows(), h_tot0.cols()) - h_tot0;
    const ComplexMatrix product = shifted * pbar0;
    return product.size() == 0 ? 0.0 : product.cwiseAbs().maxCoeff();
}

double first_order_residual(const ComplexMatrix& h_tot0, const ComplexMatrix& v,
                            const PerturbedEigenstate& p) {
    const Eigen::Index n = h_tot0.rows();
    ComplexVector r = (p.e0 * ComplexMatrix::Identity(n, n) - h_tot0) * p.psi1 - (v * p.psi0 - p.e1 * p.psi0);
    if (p.degeneracy > 1) r -= p.subspace_projector() * r;
    return r.norm();
}

std::size_t find_level(const Spectrum& s, const ComplexVector& probe) {
    Eigen::Index best = 0;
    double best_overlap = -1.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double ov = std::abs(s.eigenvectors.col(k).dot(probe));
        if (ov > best_overlap + 1e-12) {
            best_overlap = ov;
            best = k;
        }
    }
    return static_cast<std::size_t>(best);
}

}  // namespace relchron
