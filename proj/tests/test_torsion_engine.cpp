#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "torsion/builders.hpp"
#include "torsion/torsion_engine.hpp"

using namespace torsion;

namespace {

// Independent route: singular values of the Gram-normalised coboundaries,
// log tau = sum_p (-1)^p sum_i log sigma_i (no eigensolver involved).
double svd_log_torsion(const GradedCochainComplex& c) {
    auto root = [](const Matrix& g, bool inverse) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(g);
        return inverse ? Matrix(es.operatorInverseSqrt()) : Matrix(es.operatorSqrt());
    };
    double total = 0.0;
    for (int p = 0; p < c.top_degree(); ++p) {
        const Matrix d = root(c.gram(p + 1), false) * c.coboundary(p) * root(c.gram(p), true);
        if (d.size() == 0)
            continue;
        Eigen::JacobiSVD<Matrix> svd(d);
        const auto& s = svd.singularValues();
        const double cut = 1e-9 * (s.size() ? s(0) : 0.0);
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > cut)
                total += (p % 2 ? -1.0 : 1.0) * std::log(s(i));
    }
    return total;
}

GradedCochainComplex with_random_grams(const GradedCochainComplex& c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Matrix> grams;
    for (Index n : c.dims()) {
        Matrix m(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                m(i, j) = Complex(g(rng), g(rng));
        Matrix gram = Matrix::Identity(n, n) + m * m.adjoint() / static_cast<double>(std::max<Index>(n, 1));
        grams.push_back(0.5 * (gram + gram.adjoint()));
    }
    return c.with_grams(std::move(grams));
}

}  // namespace

TEST_CASE("circle torsion equals the vertex count") {
    for (int n = 3; n <= 8; ++n) {
        const TorsionElement t = reidemeister_torsion(coboundary_matrices(cycle_complex(n)));
        CHECK(t.scalar() == doctest::Approx(n).epsilon(1e-12));
        CHECK(t.kernel_dims() == std::vector<Index>{1, 1});
        CHECK(t.convention_tag == kGradedConvention);
        CHECK(t.warnings.empty());
        CHECK_FALSE(t.acyclic());
        CHECK(t.inverse_scalar() == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
}

TEST_CASE("lens space L(5,1): torsion |zeta^k - 1|^2") {
    // Frozen values of 4 sin^2(pi k / 5).
    const double low = 1.381966011250105;
    const double high = 3.6180339887498945;
    const double expected[] = {low, high, high, low};
    for (int k = 1; k <= 4; ++k) {
        const TorsionElement t = reidemeister_torsion(lens_complex(5, 1, k));
        CHECK(t.acyclic());
        CHECK(t.scalar() == doctest::Approx(expected[k - 1]).epsilon(1e-12));
    }
    CHECK(low == doctest::Approx(4.0 * std::pow(std::sin(std::numbers::pi / 5.0), 2)).epsilon(1e-15));
    // The trivial character is not acyclic.
    CHECK(reidemeister_torsion(lens_complex(5, 1, 0)).kernel_dims() == std::vector<Index>{1, 0, 0, 1});
}

TEST_CASE("graded torsion agrees with an SVD oracle, including non-trivial Grams") {
    const std::vector<GradedCochainComplex> models{
        coboundary_matrices(cycle_complex(5)), coboundary_matrices(simplex_boundary(3)),
        coboundary_matrices(simplex_boundary(4)), coboundary_matrices(build_simplicial({{0, 1, 2}, {1, 2, 3}})),
        lens_complex(7, 3, 2)};
    std::uint64_t seed = 1;
    for (const auto& c : models) {
        CHECK(reidemeister_torsion(c).log_scalar == doctest::Approx(svd_log_torsion(c)).epsilon(1e-11));
        const GradedCochainComplex weighted = with_random_grams(c, seed++);
        const TorsionElement t = reidemeister_torsion(weighted);
        CHECK(t.log_scalar == doctest::Approx(svd_log_torsion(weighted)).epsilon(1e-10));
        CHECK(telescoped_log_torsion(weighted) == doctest::Approx(t.log_scalar).epsilon(1e-10));
        CHECK(t.warnings.empty());
    }
}

TEST_CASE("simplex boundaries: n + 1 on odd spheres, 1 on even spheres") {
    // Frozen from the SVD oracle above; even-dimensional closed manifolds
    // have trivial torsion by Poincare duality.
    const double expected[] = {3.0, 1.0, 5.0, 1.0};
    for (int n = 2; n <= 5; ++n)
        CHECK(reidemeister_torsion(coboundary_matrices(simplex_boundary(n))).scalar() ==
              doctest::Approx(expected[n - 2]).epsilon(1e-11));
}

TEST_CASE("harmonic bases are G-orthonormal and sized by cohomology") {
    const GradedCochainComplex c = with_random_grams(coboundary_matrices(simplex_boundary(3)), 99);
    const TorsionElement t = reidemeister_torsion(c);
    REQUIRE(t.harmonic_bases.size() == 3);
    for (int p = 0; p < 3; ++p) {
        const Matrix& h = t.harmonic_bases[static_cast<std::size_t>(p)].columns;
        CHECK(h.cols() == cohomology_dimensions(c)[static_cast<std::size_t>(p)]);
        CHECK((h.adjoint() * c.gram(p) * h - Matrix::Identity(h.cols(), h.cols())).norm() <= 1e-10);
        CHECK((c.coboundary(p) * h).norm() <= 1e-10);
    }
}

TEST_CASE("twisted torsion at zero flux matches the graded torsion") {
    for (const auto& k : {cycle_complex(3), simplex_boundary(3), simplex_boundary(4)}) {
        const GradedCochainComplex c = coboundary_matrices(k);
        const TorsionElement t = twisted_torsion(twisted_differential(k, c, {}));
        CHECK(t.convention_tag == kParityConvention);
        CHECK(t.log_scalar == doctest::Approx(reidemeister_torsion(c).log_scalar).epsilon(1e-12));
        const auto graded = cohomology_dimensions(c);
        Index even = 0, odd = 0;
        for (std::size_t p = 0; p < graded.size(); ++p)
            (p % 2 ? odd : even) += graded[p];
        CHECK(t.kernel_dims() == std::vector<Index>{even, odd});
    }
}

TEST_CASE("top flux on the minimal S^3 model: tau = |c|") {
    const GradedCochainComplex s3 = minimal_sphere(3);
    for (double c : {2.0, -0.5, 3.0}) {
        const Cochain h{3, Vector::Constant(1, c)};
        const TorsionElement t = twisted_torsion(twisted_differential(s3, {unit_multiplication(s3, h)}));
        CHECK(t.acyclic());
        CHECK(t.scalar() == doctest::Approx(std::abs(c)).epsilon(1e-14));
    }
}

TEST_CASE("top flux on simplex_boundary(4) scales torsion by |c|") {
    const SimplicialComplex k = orient(simplex_boundary(4));
    const GradedCochainComplex c = coboundary_matrices(k);
    Cochain h{3, Vector::Zero(k.count(3))};
    h.coefficients(2) = 1.0;
    const double base = twisted_torsion(twisted_differential(k, c, {h})).log_scalar;
    for (double s : {2.0, -2.0, 0.5, -0.5, 3.0}) {
        const TorsionElement t = twisted_torsion(twisted_differential(k, c, {Cochain{3, h.coefficients * s}}));
        CHECK(t.acyclic());
        CHECK(std::exp(t.log_scalar - base) == doctest::Approx(std::abs(s)).epsilon(1e-12));
    }
}

TEST_CASE("Laplacians are G-self-adjoint and positive semidefinite") {
    const GradedCochainComplex c = with_random_grams(coboundary_matrices(simplex_boundary(3)), 5);
    for (const auto& lap : laplacians(c)) {
        const Matrix ga = lap.gram * lap.op;
        CHECK((ga - ga.adjoint()).norm() <= 1e-10 * (1.0 + ga.norm()));
        const auto s = hermitian_spectrum(lap.op, lap.gram);
        CHECK(s.eigenvalues.minCoeff() >= -1e-10 * (1.0 + s.eigenvalues.maxCoeff()));
    }
}
