#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "support.hpp"

using namespace relchron;
using relchron::test::expect_error;
using relchron::test::max_abs;

TEST(Kron, MatchesIndexFormula) {
    std::mt19937_64 rng(11);
    const ComplexMatrix a = test::random_matrix(3, 2, rng);
    const ComplexMatrix b = test::random_matrix(2, 4, rng);
    const ComplexMatrix k = kron(a, b);
    ASSERT_EQ(k.rows(), 6);
    ASSERT_EQ(k.cols(), 8);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            for (Eigen::Index p = 0; p < 2; ++p)
                for (Eigen::Index q = 0; q < 4; ++q) EXPECT_EQ(k(i * 2 + p, j * 4 + q), a(i, j) * b(p, q));
}

TEST(Kron, IdentityAndDiagonal) {
    EXPECT_EQ(max_abs(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)) -
                      ComplexMatrix::Identity(6, 6)),
              0.0);
    ComplexMatrix d1 = ComplexMatrix::Zero(2, 2);
    d1(0, 0) = 2.0;
    d1(1, 1) = -1.0;
    ComplexMatrix d2 = ComplexMatrix::Zero(2, 2);
    d2(0, 0) = 3.0;
    d2(1, 1) = 5.0;
    const ComplexMatrix k = kron(d1, d2);
    EXPECT_EQ(k(0, 0), Complex(6.0));
    EXPECT_EQ(k(1, 1), Complex(10.0));
    EXPECT_EQ(k(2, 2), Complex(-3.0));
    EXPECT_EQ(k(3, 3), Complex(-5.0));
}

TEST(Kron, AssociativeAndMixedProduct) {
    std::mt19937_64 rng(12);
    const ComplexMatrix a = test::random_matrix(2, 2, rng);
    const ComplexMatrix b = test::random_matrix(3, 3, rng);
    const ComplexMatrix c = test::random_matrix(2, 2, rng);
    const ComplexMatrix d = test::random_matrix(3, 3, rng);
    EXPECT_LT(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))), 1e-13);
    EXPECT_LT(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)), 1e-12);
}

TEST(Eigensolve, DiagonalMatrixSortsAscending) {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = 2.0;
    m(1, 1) = -1.0;
    m(2, 2) = 0.5;
    const Spectrum s = hermitian_eigensolve(m);
    EXPECT_NEAR(s.eigenvalues[0], -1.0, 1e-15);
    EXPECT_NEAR(s.eigenvalues[1], 0.5, 1e-15);
    EXPECT_NEAR(s.eigenvalues[2], 2.0, 1e-15);
    EXPECT_NEAR(std::abs(s.eigenvectors(1, 0)), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(s.range(), 3.0);
}

TEST(Eigensolve, PauliX) {
    ComplexMatrix sx(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    const Spectrum s = hermitian_eigensolve(sx);
    EXPECT_NEAR(s.eigenvalues[0], -1.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-14);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s.eigenvectors(0, 1) - Complex(r)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.eigenvectors(1, 1) - Complex(r)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.eigenvectors(0, 0) + s.eigenvectors(1, 0)), 0.0, 1e-14);
}

TEST(Eigensolve, AgreesWithLapackStyleSolver) {
    std::mt19937_64 rng(13);
    for (const Eigen::Index n : {8, 40, 120}) {
        const ComplexMatrix m = test::random_hermitian(n, rng);
        const Spectrum s = hermitian_eigensolve(m);
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(m);
        EXPECT_LT((s.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10 * m.norm()) << n;
        EXPECT_LT(max_residual(m, s), 1e-10 * m.norm()) << n;
        EXPECT_LT(orthonormality_defect(s.eigenvectors), 1e-10) << n;
    }
}

TEST(Eigensolve, Dimension200) {
    std::mt19937_64 rng(14);
    const ComplexMatrix m = test::random_hermitian(200, rng);
    const Spectrum s = hermitian_eigensolve(m);
    EXPECT_LT(max_residual(m, s), 1e-10 * m.norm());
    for (Eigen::Index k = 0; k + 1 < s.size(); ++k) EXPECT_LE(s.eigenvalues[k], s.eigenvalues[k + 1]);
}

TEST(Eigensolve, PhaseConventionLargestComponentPositive) {
    std::mt19937_64 rng(15);
    const Spectrum s = hermitian_eigensolve(test::random_hermitian(10, rng));
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        Eigen::Index imax = 0;
        s.eigenvectors.col(k).cwiseAbs().maxCoeff(&imax);
        EXPECT_NEAR(s.eigenvectors(imax, k).imag(), 0.0, 1e-14);
        EXPECT_GT(s.eigenvectors(imax, k).real(), 0.0);
    }
}

TEST(Eigensolve, RejectsNonHermitian) {
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 0.0, 1.0;
    expect_error(ErrorCode::NotHermitian, [&] { hermitian_eigensolve(m); });
}

TEST(Propagator, IdentityAtZeroTime) {
    std::mt19937_64 rng(16);
    const Spectrum s = hermitian_eigensolve(test::random_hermitian(6, rng));
    EXPECT_LT(max_abs(spectral_propagator(s, 0.0) - ComplexMatrix::Identity(6, 6)), 1e-13);
}

TEST(Propagator, PauliZQuarterTurn) {
    ComplexMatrix sz = ComplexMatrix::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const ComplexMatrix u = spectral_propagator(hermitian_eigensolve(sz), std::numbers::pi / 2.0);
    EXPECT_NEAR(std::abs(u(0, 0) - Complex(0.0, -1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 1) - Complex(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(0, 1)), 0.0, 1e-15);
}

TEST(Propagator, GroupLawUnitarityAndShift) {
    std::mt19937_64 rng(17);
    const Spectrum s = hermitian_eigensolve(test::random_hermitian(7, rng));
    const ComplexMatrix u1 = spectral_propagator(s, 0.4);
    const ComplexMatrix u2 = spectral_propagator(s, 1.3);
    EXPECT_LT(max_abs(u1 * u2 - spectral_propagator(s, 1.7)), 1e-12);
    EXPECT_LT(max_abs(u2.adjoint() * u2 - ComplexMatrix::Identity(7, 7)), 1e-12);
    const ComplexVector x = test::random_unit(7, rng);
    EXPECT_NEAR((u2 * x).norm(), 1.0, 1e-13);
    const Complex phase = std::exp(Complex(0.0, 1.3 * 0.25));
    EXPECT_LT(max_abs(spectral_propagator(s, 1.3, 0.25) - phase * u2), 1e-12);
}

TEST(Resolvent, ActsOnEigenvectors) {
    std::mt19937_64 rng(18);
    const ComplexMatrix h = test::random_hermitian(6, rng);
    const Spectrum s = hermitian_eigensolve(h);
    const double e0 = s.eigenvalues[2];
    const ComplexVector x = s.eigenvectors.col(4);
    const ComplexVector r = resolvent_apply(s, e0, kDefaultKernelTol, x);
    EXPECT_LT((r - x / (e0 - s.eigenvalues[4])).norm(), 1e-12);
}

TEST(Resolvent, MultiplyBackRecoversSourceOffKernel) {
    std::mt19937_64 rng(19);
    const ComplexMatrix h = test::random_hermitian(9, rng);
    const Spectrum s = hermitian_eigensolve(h);
    const double e0 = s.eigenvalues[5];
    const ComplexVector v5 = s.eigenvectors.col(5);
    ComplexVector x = test::random_unit(9, rng);
    x -= v5 * v5.dot(x);
    const ComplexVector r = resolvent_apply(s, e0, kDefaultKernelTol, x);
    const ComplexVector back = (e0 * ComplexMatrix::Identity(9, 9) - h) * r;
    EXPECT_LT((back - x).norm(), 1e-10);
    EXPECT_LT(std::abs(v5.dot(r)), 1e-12);
}

TEST(Resolvent, KernelLeakIsReported) {
    std::mt19937_64 rng(20);
    const Spectrum s = hermitian_eigensolve(test::random_hermitian(5, rng));
    const ComplexVector x = s.eigenvectors.col(1) + s.eigenvectors.col(3);
    expect_error(ErrorCode::KernelLeak, [&] { resolvent_apply(s, s.eigenvalues[1], kDefaultKernelTol, x); });
}

TEST(Eigenspace, FindsDegenerateBlock) {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m.diagonal() << 1.0, 2.0, 2.0, 3.0;
    const Spectrum s = hermitian_eigensolve(m);
    EXPECT_EQ(eigenspace_indices(s, 2.0).size(), 2u);
    EXPECT_EQ(eigenspace_indices(s, 3.0).size(), 1u);
    EXPECT_TRUE(eigenspace_indices(s, 2.5).empty());
}

TEST(FixPhase, MakesLargestComponentRealPositive) {
    ComplexVector v(3);
    v << Complex(0.1, 0.2), Complex(0.0, -2.0), Complex(0.5, 0.0);
    fix_phase(v);
    EXPECT_NEAR(v[1].real(), 2.0, 1e-15);
    EXPECT_NEAR(v[1].imag(), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[0]), std::abs(Complex(0.1, 0.2)), 1e-15);
}
