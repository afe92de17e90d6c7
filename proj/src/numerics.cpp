#include "relchron/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace relchron {

namespace {

constexpr double kHermitianRelTol = 1e-12;
constexpr double kOffDiagonalRelTol = 1e-12;

double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) sum += std::norm(a(i, j));
        }
    }
    return std::sqrt(sum);
}

// One Jacobi rotation annihilating a(p, q). The rotation is the real
// symmetric Jacobi rotation preceded by a diagonal phase that makes a(p, q)
// real: W = diag(1, e^{-i phi}) R.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    const Complex phase_conj = std::conj(apq) / mag;

    const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const Complex wpp = c;
    const Complex wpq = s;
    const Complex wqp = -s * phase_conj;
    const Complex wqq = c * phase_conj;

    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * wpp + akq * wqp;
        a(k, q) = akp * wpq + akq * wqq;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(wpp) * apk + std::conj(wqp) * aqk;
        a(q, k) = std::conj(wpq) * apk + std::conj(wqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * wpp + vkq * wqp;
        v(k, q) = vkp * wpq + vkq * wqq;
    }
}

}  // namespace

double Spectrum::range() const {
    if (eigenvalues.size() == 0) return 0.0;
    return eigenvalues.maxCoeff() - eigenvalues.minCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "hermiticity check needs a square matrix");
    }
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void fix_phase(Eigen::Ref<ComplexVector> v) {
    if (v.size() == 0) return;
    const double largest = v.cwiseAbs().maxCoeff();
    if (largest == 0.0) return;
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= largest * (1.0 - 1e-8)) {
            pick = i;
            break;
        }
    }
    v *= std::conj(v[pick]) / std::abs(v[pick]);
}

double max_residual(const ComplexMatrix& m, const Spectrum& s) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const ComplexVector r = m * s.eigenvectors.col(k) - s.eigenvalues[k] * s.eigenvectors.col(k);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

double orthonormality_defect(const ComplexMatrix& v) {
    if (v.size() == 0) return 0.0;
    const ComplexMatrix gram = v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols());
    return gram.cwiseAbs().maxCoeff();
}

Spectrum hermitian_eigensolve(const ComplexMatrix& m, double tol_eig) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "eigensolve needs a non-empty square matrix");
    }
    const double norm_f = m.norm();
    if (hermiticity_defect(m) > kHermitianRelTol * norm_f) {
        std::ostringstream msg;
        msg << "||M - M^dagger||_max = " << hermiticity_defect(m) << " exceeds " << kHermitianRelTol
            << " * ||M||_F";
        throw Error(ErrorCode::NotHermitian, msg.str());
    }

    const Eigen::Index n = m.rows();
    ComplexMatrix a = 0.5 * (m + m.adjoint());
    ComplexMatrix v = ComplexMatrix::Identity(n, n);
    const double threshold = kOffDiagonalRelTol * norm_f;
    const double skip = 1e-18 * norm_f;

    bool converged = false;
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) {
            converged = true;
            break;
        }
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0 || mag < skip) continue;
                rotate(a, v, p, q);
            }
        }
    }
    if (!converged && off_diagonal_norm(a) > threshold) {
        throw Error(ErrorCode::NoConvergence,
                    "Jacobi iteration cap of " + std::to_string(kJacobiMaxSweeps) + " sweeps reached");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return a(x, x).real() < a(y, y).real();
    });

    Spectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues[k] = a(src, src).real();
        out.eigenvectors.col(k) = v.col(src);
        fix_phase(out.eigenvectors.col(k));
    }

    const double residual = max_residual(m, out);
    const double ortho = orthonormality_defect(out.eigenvectors);
    if (residual > tol_eig * std::max(norm_f, 1e-300) || ortho > tol_eig) {
        std::ostringstream msg;
        msg << "decomposition misses tolerance " << tol_eig << " (residual " << residual
            << ", orthonormality " << ortho << ")";
        throw Error(ErrorCode::NoConvergence, msg.str());
    }
    return out;
}

ComplexMatrix spectral_propagator(const Spectrum& s, double t, double shift) {
    ComplexVector phases(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        phases[k] = std::polar(1.0, -t * (s.eigenvalues[k] - shift));
    }
    return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

std::vector<Eigen::Index> eigenspace_indices(const Spectrum& s, double e0, double kernel_tol) {
    const double cutoff = kernel_tol * s.range();
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (std::abs(s.eigenvalues[k] - e0) <= cutoff) idx.push_back(k);
    }
    return idx;
}

ComplexVector resolvent_apply(const Spectrum& s, double e0, double kernel_tol,
                              const ComplexVector& x) {
    if (x.size() != s.size()) {
        throw Error(ErrorCode::DimensionMismatch, "resolvent input has wrong dimension");
    }
    const double cutoff = kernel_tol * s.range();
    const ComplexVector coeffs = s.eigenvectors.adjoint() * x;

    double leak = 0.0;
    ComplexVector scaled = ComplexVector::Zero(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double gap = e0 - s.eigenvalues[k];
        if (std::abs(gap) <= cutoff) {
            leak += std::norm(coeffs[k]);
        } else {
            scaled[k] = coeffs[k] / gap;
        }
    }
    leak = std::sqrt(leak);
    if (leak > kKernelLeakTol * x.norm() && leak > 0.0) {
        std::ostringstream msg;
        msg << "input has weight " << leak << " in the excluded eigenspace at E0 = " << e0;
        throw Error(ErrorCode::KernelLeak, msg.str());
    }
    return s.eigenvectors * scaled;
}

}  // namespace relchron
