#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "corona/linalg.hpp"

namespace {

using namespace corona;

Matrix random_symmetric(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Matrix a = Matrix::square(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
    return a;
}

// Laplace expansion along the first row; fine for n <= 6.
BigInt cofactor_determinant(const DenseMatrix<BigInt>& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    BigInt det = 0;
    for (std::size_t c = 0; c < n; ++c) {
        DenseMatrix<BigInt> minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0, k = 0; j < n; ++j)
                if (j != c) minor(i - 1, k++) = m(i, j);
        const BigInt term = m(0, c) * cofactor_determinant(minor);
        det += (c % 2 == 0) ? term : BigInt(-term);
    }
    return det;
}

TEST(Jacobi, TwoByTwo) {
    Matrix a = Matrix::square(2);
    a(0, 0) = a(1, 1) = 2;
    a(0, 1) = a(1, 0) = 1;
    const auto e = dense_eigenvalues(a);
    EXPECT_NEAR(e[0], 1, 1e-14);
    EXPECT_NEAR(e[1], 3, 1e-14);
}

TEST(Jacobi, PathGraphLaplacian) {
    // Eigenvalues of the path Laplacian: 2 - 2cos(pi k / n).
    const std::size_t n = 12;
    Matrix a = Matrix::square(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = (i == 0 || i == n - 1) ? 1 : 2;
        if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = -1;
    }
    const auto e = dense_eigenvalues(a);
    for (std::size_t k = 0; k < n; ++k)
        EXPECT_NEAR(e[k], 2 - 2 * std::cos(M_PI * static_cast<double>(k) / n), 1e-12);
}

TEST(Jacobi, PreservesTraceAndFrobeniusNorm) {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const Matrix a = random_symmetric(20, seed);
        double trace = 0, frob = 0;
        for (std::size_t i = 0; i < 20; ++i) {
            trace += a(i, i);
            for (std::size_t j = 0; j < 20; ++j) frob += a(i, j) * a(i, j);
        }
        const auto e = dense_eigenvalues(a);
        EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
        EXPECT_NEAR(std::accumulate(e.begin(), e.end(), 0.0), trace, 1e-11);
        EXPECT_NEAR(std::inner_product(e.begin(), e.end(), e.begin(), 0.0), frob, 1e-10);
    }
}

TEST(Jacobi, RejectsNonSymmetric) {
    Matrix a = Matrix::square(2);
    a(0, 1) = 1;
    EXPECT_THROW(dense_eigenvalues(a), precondition_error);
    EXPECT_THROW(dense_eigenvalues(Matrix(2, 3)), precondition_error);
}

TEST(Lu, SolvesWithPivoting) {
    Matrix a = Matrix::square(3);
    const double v[3][3] = {{0, 2, 1}, {1, 1, 1}, {4, -1, 3}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = v[i][j];
    const std::vector<double> x_true{1.5, -2, 0.25};
    std::vector<double> b(3, 0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i] += v[i][j] * x_true[j];
    const auto x = LuDecomposition(a).solve(b);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i], x_true[i], 1e-14);
}

TEST(Lu, RandomSystemsResidual) {
    const Matrix a = random_symmetric(30, 7);
    const LuDecomposition lu(a);
    std::vector<double> b(30);
    for (std::size_t i = 0; i < 30; ++i) b[i] = static_cast<double>(i) - 10;
    const auto x = lu.solve(b);
    for (std::size_t i = 0; i < 30; ++i) {
        double r = -b[i];
        for (std::size_t j = 0; j < 30; ++j) r += a(i, j) * x[j];
        EXPECT_NEAR(r, 0, 1e-10);
    }
}

TEST(Lu, Singular) {
    Matrix a = Matrix::square(2, 1.0);
    EXPECT_THROW(LuDecomposition{a}, numeric_error);
}

TEST(Bareiss, KnownDeterminants) {
    DenseMatrix<BigInt> m = DenseMatrix<BigInt>::square(3);
    // Tridiagonal 2,-1: det = n + 1.
    for (int i = 0; i < 3; ++i) {
        m(i, i) = 2;
        if (i + 1 < 3) m(i, i + 1) = m(i + 1, i) = -1;
    }
    EXPECT_EQ(bareiss_determinant(m), 4);

    DenseMatrix<BigInt> swap = DenseMatrix<BigInt>::square(2);
    swap(0, 1) = swap(1, 0) = 1;
    EXPECT_EQ(bareiss_determinant(swap), -1);

    DenseMatrix<BigInt> zero = DenseMatrix<BigInt>::square(3, 1);
    EXPECT_EQ(bareiss_determinant(zero), 0);
    EXPECT_EQ(bareiss_determinant(DenseMatrix<BigInt>()), 1);
}

TEST(Bareiss, AgreesWithCofactorExpansion) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> u(-50, 50);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        DenseMatrix<BigInt> m = DenseMatrix<BigInt>::square(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = (trial % 3 == 0 && i == j) ? 0 : u(rng);
        EXPECT_EQ(bareiss_determinant(m), cofactor_determinant(m)) << "trial " << trial;
    }
}

TEST(Bareiss, LargeValuesStayExact) {
    // diag(10^30, 10^30, 10^30) has determinant 10^90.
    DenseMatrix<BigInt> m = DenseMatrix<BigInt>::square(3);
    const BigInt big = boost::multiprecision::pow(BigInt(10), 30);
    for (int i = 0; i < 3; ++i) m(i, i) = big;
    EXPECT_EQ(bareiss_determinant(m), boost::multiprecision::pow(BigInt(10), 90));
}

}  // namespace
