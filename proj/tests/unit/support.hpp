#pragma once

#include <random>

#include <gtest/gtest.h>

#include "relchron/error.hpp"
#include "relchron/numerics.hpp"

namespace relchron::test {

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
    }
    return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
    const ComplexMatrix a = random_matrix(n, n, rng);
    return 0.5 * (a + a.adjoint());
}

inline ComplexVector random_unit(Eigen::Index n, std::mt19937_64& rng) {
    return random_matrix(n, 1, rng).col(0).normalized();
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

template <typename F>
void expect_error(ErrorCode code, F&& f) {
    try {
        f();
        ADD_FAILURE() << "expected relchron::Error(" << to_string(code) << ")";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

}  // namespace relchron::test
