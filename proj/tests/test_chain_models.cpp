#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

#include "torsion/builders.hpp"
#include "torsion/chain_models.hpp"
#include "torsion/minimal_model.hpp"

using namespace torsion;

namespace {

bool exactly_zero(const Matrix& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

Cochain random_cochain(const SimplicialComplex& k, int p, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> digit(-3, 3);
    Cochain c{p, Vector(k.count(p))};
    for (Index i = 0; i < c.coefficients.size(); ++i)
        c.coefficients(i) = static_cast<double>(digit(rng));
    return c;
}

LocalSystem u1_system(const SimplicialComplex& k, const std::vector<double>& phase) {
    // A pure gauge: U(ab) = exp(i (phase_b - phase_a)) is flat on any complex.
    LocalSystem ls = LocalSystem::trivial(1);
    for (const auto& e : k.simplices(1)) {
        const double angle = phase[static_cast<std::size_t>(e[1])] - phase[static_cast<std::size_t>(e[0])];
        ls.edge_holonomy[{e[0], e[1]}] = Matrix::Constant(1, 1, std::polar(1.0, angle));
    }
    return ls;
}

}  // namespace

TEST_CASE("build_simplicial closes under faces") {
    const SimplicialComplex k = build_simplicial({{0, 1, 2}});
    CHECK(k.f_vector() == std::vector<Index>{3, 3, 1});
    CHECK(k.euler_characteristic() == 1);
    CHECK(k.index_of({0, 2}).has_value());
    CHECK_FALSE(k.index_of({0, 3}).has_value());

    // Unsorted input is normalised.
    CHECK(build_simplicial({{2, 0, 1}}) == k);
}

TEST_CASE("build_simplicial rejects malformed input") {
    CHECK_THROWS_WITH_AS(build_simplicial({{0, 0, 1}}), doctest::Contains("InvalidSimplex"), Error);
    CHECK_THROWS_WITH_AS(build_simplicial({{0, 1}, {1, 0}}), doctest::Contains("DuplicateSimplex"), Error);
    CHECK_THROWS_WITH_AS(build_simplicial({{0, 1, 2}, {2, 3}}), doctest::Contains("InconsistentDimension"), Error);
    CHECK_NOTHROW(build_simplicial({{0, 1, 2}, {2, 3}}, true));
}

TEST_CASE("cycle(3) has dims (3, 3) and an exact square-zero coboundary") {
    const SimplicialComplex k = cycle_complex(3);
    const GradedCochainComplex c = coboundary_matrices(k);
    CHECK(c.dims() == std::vector<Index>{3, 3});
    CHECK(c.integral());
    CHECK(cohomology_dimensions(c) == std::vector<Index>{1, 1});
}

TEST_CASE("simplicial builders are exactly square-zero") {
    for (int n = 1; n <= 6; ++n) {
        const GradedCochainComplex c = coboundary_matrices(simplex_boundary(n));
        for (int p = 0; p + 1 < c.top_degree(); ++p)
            CHECK(exactly_zero(c.coboundary(p + 1) * c.coboundary(p)));
    }
}

TEST_CASE("sphere cohomology by the rank oracle") {
    CHECK(cohomology_dimensions(coboundary_matrices(simplex_boundary(3))) == std::vector<Index>{1, 0, 1});
    CHECK(cohomology_dimensions(coboundary_matrices(simplex_boundary(4))) == std::vector<Index>{1, 0, 0, 1});
    CHECK(cohomology_dimensions(coboundary_matrices(build_simplicial({{0, 1, 2}}))) ==
          std::vector<Index>{1, 0, 0});
}

TEST_CASE("matrix_rank: exact for integers, SVD otherwise") {
    Matrix m(3, 3);
    m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    CHECK(matrix_rank(m) == 2);
    m(2, 2) = 9.5;
    CHECK(matrix_rank(m) == 3);
    CHECK(matrix_rank(Matrix::Zero(2, 4)) == 0);
    CHECK(matrix_rank(Matrix(0, 3)) == 0);
}

TEST_CASE("coboundary sign convention on a single edge") {
    const GradedCochainComplex c = coboundary_matrices(build_simplicial({{0, 1}}));
    const Matrix d = c.coboundary(0);
    REQUIRE(d.rows() == 1);
    // (delta f)(01) = f(1) - f(0)
    CHECK(d(0, 0) == Complex(-1.0));
    CHECK(d(0, 1) == Complex(1.0));
}

TEST_CASE("GradedCochainComplex validates its data") {
    Matrix d0 = Matrix::Ones(1, 1);
    Matrix d1 = Matrix::Ones(1, 1);
    CHECK_THROWS_WITH_AS(GradedCochainComplex({1, 1, 1}, {d0, d1}), doctest::Contains("NotSquareZero"), Error);
    CHECK_THROWS_AS(GradedCochainComplex({1, 2}, {Matrix::Ones(1, 1)}), Error);
    Matrix bad_gram = -Matrix::Identity(1, 1);
    CHECK_THROWS_WITH_AS(GradedCochainComplex({1}, {}, {bad_gram}), doctest::Contains("GramNotPositive"), Error);
}

TEST_CASE("parity assembly interleaves degrees") {
    const GradedCochainComplex c = coboundary_matrices(simplex_boundary(3));
    CHECK(c.parity_dim(Parity::Even) == 4 + 4);
    CHECK(c.parity_dim(Parity::Odd) == 6);
    CHECK(c.parity_offset(0) == 0);
    CHECK(c.parity_offset(2) == 4);
    const Matrix de = parity_coboundary(c, Parity::Even);
    const Matrix dod = parity_coboundary(c, Parity::Odd);
    CHECK(exactly_zero(dod * de));
    CHECK(exactly_zero(de * dod));
}

TEST_CASE("cup product satisfies the Leibniz rule and associativity") {
    const SimplicialComplex k = simplex_boundary(4);
    const GradedCochainComplex c = coboundary_matrices(k);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = trial % 2 ? 1 : 0;
        const int q = 1;
        const Cochain a = random_cochain(k, p, rng);
        const Cochain b = random_cochain(k, q, rng);
        // delta(a b) = (delta a) b + (-1)^p a (delta b)
        const Cochain lhs = apply_coboundary(c, cup(a, b, k));
        const Cochain r1 = cup(apply_coboundary(c, a), b, k);
        const Cochain r2 = cup(a, apply_coboundary(c, b), k);
        const double sign = p % 2 ? -1.0 : 1.0;
        CHECK((lhs.coefficients - r1.coefficients - sign * r2.coefficients).cwiseAbs().maxCoeff() == 0.0);

        const Cochain x = random_cochain(k, 1, rng);
        CHECK(cup(cup(a, b, k), x, k) == cup(a, cup(b, x, k), k));
    }
}

TEST_CASE("cup_operator agrees with pointwise cup") {
    const SimplicialComplex k = simplex_boundary(4);
    const GradedCochainComplex c = coboundary_matrices(k);
    std::mt19937_64 rng(7);
    const Cochain h = random_cochain(k, 1, rng);
    const GradedOperator op = cup_operator(k, h);
    for (int p = 0; p <= 2; ++p) {
        const Cochain x = random_cochain(k, p, rng);
        const Vector via_op = op.block(c, p) * x.coefficients;
        CHECK(Cochain{p + 1, via_op} == cup(h, x, k));
    }
}

TEST_CASE("local systems: pure gauge is flat and leaves cohomology alone") {
    const SimplicialComplex k = simplex_boundary(3);
    const LocalSystem ls = u1_system(k, {0.0, 0.4, 1.1, 2.5});
    CHECK_NOTHROW(ls.validate(k));
    const GradedCochainComplex c = coboundary_matrices(k, ls);
    CHECK(c.square_zero_residual() <= 1e-12);
    CHECK(cohomology_dimensions(c) == std::vector<Index>{1, 0, 1});
}

TEST_CASE("local systems: rank m inflates blocks") {
    const SimplicialComplex k = cycle_complex(4);
    LocalSystem ls = LocalSystem::trivial(2);
    const GradedCochainComplex c = coboundary_matrices(k, ls);
    CHECK(c.dims() == std::vector<Index>{8, 8});
    CHECK(cohomology_dimensions(c) == std::vector<Index>{2, 2});

    // A rotation by pi/2 around the circle kills the invariant sections.
    Matrix rot(2, 2);
    rot << 0, -1, 1, 0;
    ls.edge_holonomy[{0, 1}] = rot;
    CHECK_NOTHROW(ls.validate(k));
    CHECK(cohomology_dimensions(coboundary_matrices(k, ls)) == std::vector<Index>{0, 0});
}

TEST_CASE("local systems: validation errors") {
    const SimplicialComplex k = simplex_boundary(2);
    LocalSystem ls = LocalSystem::trivial(1);
    ls.edge_holonomy[{0, 1}] = Matrix::Constant(1, 1, 2.0);
    CHECK_THROWS_WITH_AS(ls.validate(k), doctest::Contains("NonUnitaryHolonomy"), Error);

    // Non-trivial monodromy on the boundary of a filled triangle is not flat.
    const SimplicialComplex filled = build_simplicial({{0, 1, 2}});
    LocalSystem twist = LocalSystem::trivial(1);
    twist.edge_holonomy[{0, 1}] = Matrix::Constant(1, 1, Complex(0.0, 1.0));
    CHECK_THROWS_WITH_AS(twist.validate(filled), doctest::Contains("NonFlatLocalSystem"), Error);
}

TEST_CASE("twisted_differential: flux degree rules") {
    const SimplicialComplex k = simplex_boundary(4);
    const GradedCochainComplex c = coboundary_matrices(k);
    Cochain h1{1, Vector::Zero(k.count(1))};
    CHECK_THROWS_WITH_AS(twisted_differential(k, c, {h1}), doctest::Contains("FluxHasDegreeOne"), Error);
    Cochain h2{2, Vector::Zero(k.count(2))};
    CHECK_THROWS_WITH_AS(twisted_differential(k, c, {h2}), doctest::Contains("FluxEvenDegree"), Error);
}

TEST_CASE("twisted_differential: non-closed flux is rejected") {
    // On a 4-dimensional complex a single 3-cochain is generally not closed.
    const SimplicialComplex k = build_simplicial({{0, 1, 2, 3, 4}});
    const GradedCochainComplex c = coboundary_matrices(k);
    Cochain h{3, Vector::Zero(k.count(3))};
    h.coefficients(0) = 1.0;
    CHECK_THROWS_WITH_AS(twisted_differential(k, c, {h}), doctest::Contains("FluxNotClosed"), Error);
}

TEST_CASE("twisted_differential at zero flux is the plain coboundary") {
    const SimplicialComplex k = simplex_boundary(3);
    const GradedCochainComplex c = coboundary_matrices(k);
    const TwistedComplex t = twisted_differential(k, c, {});
    CHECK(identical(t.d(Parity::Even), parity_coboundary(c, Parity::Even)));
    CHECK(identical(t.d(Parity::Odd), parity_coboundary(c, Parity::Odd)));
}

TEST_CASE("orientation and the fundamental class") {
    const SimplicialComplex k = orient(simplex_boundary(3));
    REQUIRE(k.orientation().has_value());
    Cochain h{2, Vector::Ones(k.count(2))};
    // Alternating orientation on the 4 faces of a tetrahedron: +1 -1 +1 -1.
    CHECK(pair_with_fundamental_class(k, h) == 0.0);
    h.coefficients(0) = 3.0;
    CHECK(std::abs(pair_with_fundamental_class(k, h)) == 2.0);

    CHECK_THROWS_WITH_AS(pair_with_fundamental_class(simplex_boundary(3), h), doctest::Contains("NotOriented"),
                         Error);
    Cochain low{1, Vector::Ones(k.count(1))};
    CHECK_THROWS_WITH_AS(pair_with_fundamental_class(k, low), doctest::Contains("NotTopDegree"), Error);

    std::vector<int> wrong(4, 1);
    CHECK_THROWS_WITH_AS(simplex_boundary(3).with_orientation(wrong), doctest::Contains("InvalidOrientation"),
                         Error);
}

TEST_CASE("orient rejects a non-orientable surface") {
    // Six-vertex triangulation of the real projective plane.
    const SimplicialComplex rp2 = build_simplicial({{0, 1, 3}, {0, 1, 5}, {0, 2, 4}, {0, 2, 5}, {0, 3, 4},
                                                    {1, 2, 3}, {1, 2, 4}, {1, 4, 5}, {2, 3, 5}, {3, 4, 5}});
    CHECK(rp2.euler_characteristic() == 1);
    CHECK_THROWS_WITH_AS(orient(rp2), doctest::Contains("NotOrientable"), Error);
    CHECK(cohomology_dimensions(coboundary_matrices(rp2)) == std::vector<Index>{1, 0, 0});
}
