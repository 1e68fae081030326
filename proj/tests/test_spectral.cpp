#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "torsion/error.hpp"
#include "torsion/spectral.hpp"

using namespace torsion;

namespace {

Matrix random_matrix(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            m(i, j) = Complex(g(rng), g(rng));
    return m;
}

Matrix random_gram(Index n, std::mt19937_64& rng) {
    const Matrix m = random_matrix(n, rng);
    Matrix g = Matrix::Identity(n, n) + m * m.adjoint() / static_cast<double>(n);
    return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST_CASE("diagonal spectrum and pseudodeterminant") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 2.0;
    a(1, 1) = 3.0;
    const SpectralDecomposition s = hermitian_spectrum(a);
    CHECK(s.kernel_dim == 1);
    CHECK(s.eigenvalues(0) == doctest::Approx(0.0));
    CHECK(s.eigenvalues(2) == doctest::Approx(3.0));
    const PseudoDeterminant pd = pseudodet(a);
    CHECK(pd.kernel_dim == 1);
    CHECK(pd.value() == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("the zero operator has full kernel and pseudodeterminant 1") {
    const PseudoDeterminant pd = pseudodet(Matrix::Zero(4, 4));
    CHECK(pd.kernel_dim == 4);
    CHECK(pd.log_value == 0.0);
    CHECK(pseudodet(Matrix(0, 0)).log_value == 0.0);
}

TEST_CASE("generalized problem matches the explicit G^{-1/2} reduction") {
    std::mt19937_64 rng(11);
    for (Index n : {1, 3, 6}) {
        const Matrix g = random_gram(n, rng);
        const Matrix h = random_matrix(n, rng);
        const Matrix herm = h * h.adjoint();  // G A, Hermitian PSD
        const Matrix a = g.ldlt().solve(herm);
        const SpectralDecomposition s = hermitian_spectrum(a, g);

        Eigen::SelfAdjointEigenSolver<Matrix> gs(g);
        const Matrix g_inv_half = gs.operatorInverseSqrt();
        Eigen::SelfAdjointEigenSolver<Matrix> ref(g_inv_half * herm * g_inv_half);
        CHECK((s.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * ref.eigenvalues().maxCoeff());

        // Eigenvectors are G-orthonormal and solve A v = lambda v.
        const Matrix v = s.eigenvectors;
        CHECK((v.adjoint() * g * v - Matrix::Identity(n, n)).norm() <= 1e-10);
        CHECK((a * v - v * s.eigenvalues.cast<Complex>().asDiagonal()).norm() <= 1e-9 * (1.0 + a.norm()));
    }
}

TEST_CASE("non-Hermitian and non-positive inputs are rejected") {
    Matrix a(2, 2);
    a << 0, 1, 0, 0;
    CHECK_THROWS_WITH_AS(hermitian_spectrum(a), doctest::Contains("NotHermitian"), Error);

    Matrix g = Matrix::Identity(2, 2);
    g(1, 1) = -1.0;
    CHECK_THROWS_WITH_AS(hermitian_spectrum(Matrix::Identity(2, 2), g), doctest::Contains("GramNotPositive"), Error);

    Matrix neg = Matrix::Identity(2, 2);
    neg(0, 0) = -1.0;
    CHECK_THROWS_WITH_AS(pseudodet(neg), doctest::Contains("NegativeEigenvalue"), Error);
}

TEST_CASE("kernel tolerance: relative by default, absolute on request") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-12;
    CHECK(hermitian_spectrum(a).kernel_dim == 1);
    SpectralOptions opts;
    opts.absolute_tol = 1e-14;
    CHECK(hermitian_spectrum(a, opts).kernel_dim == 0);
}

TEST_CASE("a small spectral gap raises a warning") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-7;   // retained
    a(2, 2) = 5e-10;  // discarded, only 200x below the smallest retained value
    const SpectralDecomposition s = hermitian_spectrum(a);
    CHECK(s.kernel_dim == 1);
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].rfind("SpectralGapWarning", 0) == 0);

    a(2, 2) = 0.0;
    CHECK(hermitian_spectrum(a).warnings.empty());
}

TEST_CASE("harmonic basis spans the kernel") {
    std::mt19937_64 rng(3);
    const Index n = 5;
    const Matrix g = random_gram(n, rng);
    Matrix b = random_matrix(n, rng);
    b.col(3).setZero();
    b.col(4).setZero();
    // A = G^{-1} B* G_out B with G_out = I: G-self-adjoint, kernel dim 2.
    const Matrix a = g.ldlt().solve(b.adjoint() * b);
    const HarmonicBasis h = harmonic_basis(a, g, {}, "test");
    CHECK(h.dim() == 2);
    CHECK(h.label == "test");
    CHECK((a * h.columns).norm() <= 1e-9 * a.norm());
    CHECK((h.columns.adjoint() * g * h.columns - Matrix::Identity(2, 2)).norm() <= 1e-10);
}
