#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "torsion/builders.hpp"
#include "torsion/circle_bundle.hpp"
#include "torsion/minimal_model.hpp"

using namespace torsion;

namespace {

Vector random_vector(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = Complex(g(rng), g(rng));
    return v;
}

double gram_norm(const Vector& v, const Matrix& g) { return std::sqrt((v.adjoint() * g * v)(0, 0).real()); }

double intertwining(const BundleData& b, const DualitySigns& signs) {
    const InvariantComplex x = build_invariant_complex(b);
    const InvariantComplex y = build_invariant_complex(t_dualize(b));
    double worst = 0.0;
    for (Parity k : {Parity::Even, Parity::Odd}) {
        const Matrix tk = t_duality_matrix(b.base, k, signs);
        const Matrix tk1 = t_duality_matrix(b.base, flip(k), signs);
        worst = std::max(worst, operator_norm(tk1 * x.complex.d(k) - y.complex.d(flip(k)) * tk));
    }
    return worst;
}

// Base with a nonzero product F H2: dims (1, 0, 1, 0, 1), F = H2 = x.
BundleData product_clash() {
    const GradedCochainComplex base({1, 0, 1, 0, 1}, {});
    GradedOperator x = zero_operator(base, 2);
    x.blocks[0] = Matrix::Ones(1, 1);
    x.blocks[2] = Matrix::Ones(1, 1);
    return BundleData{base, x, x, zero_operator(base, 3), FiberRadius{1.0, false}};
}

}  // namespace

TEST_CASE("hopf(1, 2, 1): tau = 2 and the dual torsion is 1/2") {
    const BundleData b = hopf_bundle(1.0, 2.0, 1.0);
    CHECK(invariant_twisted_torsion(b).scalar() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(invariant_twisted_torsion(t_dualize(b)).scalar() == doctest::Approx(0.5).epsilon(1e-14));
    const DualityReport d = verify_t_duality(b);
    CHECK(std::abs(d.product_log) <= 1e-10);
}

TEST_CASE("hopf family: tau = r^2 h2 / f") {
    for (double f : {1.0, 0.5, 3.0})
        for (double h2 : {1.0, 2.0, 3.0})
            for (double r : {0.5, 1.0, 2.0, 3.0}) {
                const TorsionElement t = invariant_twisted_torsion(hopf_bundle(f, h2, r));
                CHECK(t.acyclic());
                CHECK(t.scalar() == doctest::Approx(r * r * h2 / f).epsilon(1e-13));
            }
}

TEST_CASE("validate rejects bad bundle data") {
    BundleData b = hopf_bundle(1.0, 2.0, 1.0);
    b.radius = FiberRadius{-1.0, false};
    CHECK_THROWS_WITH_AS(validate(b), doctest::Contains("InvalidRadius"), Error);
    b.radius = FiberRadius{std::nan(""), false};
    CHECK_THROWS_WITH_AS(validate(b), doctest::Contains("InvalidRadius"), Error);

    BundleData shifted = hopf_bundle(1.0, 2.0, 1.0);
    shifted.curvature.shift = 3;
    CHECK_THROWS_WITH_AS(validate(shifted), doctest::Contains("ShapeMismatch"), Error);

    CHECK_THROWS_WITH_AS(validate(product_clash()), doctest::Contains("InvalidFlux"), Error);
}

TEST_CASE("random bundles are valid and square-zero") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const BundleData b = random_bundle(seed);
        CHECK(square_zero_residual(b) <= 1e-12);
        CHECK(b.radius.r() >= 0.25);
        CHECK(b.radius.r() <= 4.0);
    }
    CHECK(random_bundle(5) == random_bundle(5));
    CHECK_FALSE(random_bundle(5) == random_bundle(6));

    const RandomBundleShape wide{3, 2, 2};
    CHECK(square_zero_residual(random_bundle(17, wide)) <= 1e-12);
}

TEST_CASE("t_dualize is an exact involution") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const BundleData b = random_bundle(seed);
        const BundleData d = t_dualize(b);
        CHECK(d.curvature == b.h2);
        CHECK(d.h2 == b.curvature);
        CHECK(d.h3 == b.h3);
        CHECK(d.radius.r() == doctest::Approx(1.0 / b.radius.r()));
        CHECK(t_dualize(d) == b);
    }
}

TEST_CASE("exhaustive sign search singles out the alternating rule") {
    std::vector<BundleData> probes{hopf_bundle(1.0, 2.0, 1.5)};
    for (std::uint64_t seed : {3u, 8u, 21u})
        probes.push_back(random_bundle(seed, RandomBundleShape{2, 1, 2}));

    std::vector<DualitySigns> exact;
    for (int mask = 0; mask < 16; ++mask) {
        DualitySigns s;
        s.s = {mask & 1 ? -1 : 1, mask & 2 ? -1 : 1};
        s.t = {mask & 4 ? -1 : 1, mask & 8 ? -1 : 1};
        bool ok = true;
        for (const auto& b : probes)
            ok = ok && intertwining(b, s) <= 1e-12;
        if (ok)
            exact.push_back(s);
    }
    REQUIRE(exact.size() == 2);
    const DualitySigns& k = kDualitySigns;
    for (const auto& s : exact) {
        const bool same = s.s == k.s && s.t == k.t;
        const bool negated = s.s[0] == -k.s[0] && s.s[1] == -k.s[1] && s.t[0] == -k.t[0] && s.t[1] == -k.t[1];
        CHECK((same || negated));
    }
}

TEST_CASE("T on the hopf model swaps components and preserves norms") {
    const BundleData b = hopf_bundle(1.0, 2.0, 1.0);
    // Even space [C^0 C^2 | C^1] = (a0, a2 | -), C^1 = 0.
    ParityElement x{Parity::Even, Vector(2)};
    x.coefficients << Complex(3.0, 1.0), Complex(-2.0, 0.5);
    const ParityElement y = t_duality_map(b, x);
    CHECK(y.parity == Parity::Odd);
    REQUIRE(y.coefficients.size() == 2);
    // Odd space of the dual is [C^1 | C^0 C^2] = (- | a0, a2) up to sign.
    CHECK(std::abs(y.coefficients(0)) == std::abs(x.coefficients(0)));
    CHECK(std::abs(y.coefficients(1)) == std::abs(x.coefficients(1)));
    CHECK(y.coefficients.norm() == x.coefficients.norm());

    const ParityElement back = s_duality_map(b, y);
    CHECK(back.parity == Parity::Even);
    CHECK(identical(back.coefficients, x.coefficients));

    ParityElement wrong{Parity::Even, Vector(3)};
    CHECK_THROWS_WITH_AS(t_duality_map(b, wrong), doctest::Contains("ParityMismatch"), Error);
}

TEST_CASE("T is a Gram isometry with inverse S on random bundles") {
    std::mt19937_64 rng(77);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const BundleData b = random_bundle(seed);
        const InvariantComplex x = build_invariant_complex(b);
        const InvariantComplex y = build_invariant_complex(t_dualize(b));
        for (Parity k : {Parity::Even, Parity::Odd}) {
            const ParityElement v{k, random_vector(x.complex.dim(k), rng)};
            const ParityElement tv = t_duality_map(b, v);
            const double n0 = gram_norm(v.coefficients, x.complex.gram(k));
            CHECK(std::abs(gram_norm(tv.coefficients, y.complex.gram(flip(k))) - n0) <= 1e-12 * n0);
            CHECK((s_duality_map(b, tv).coefficients - v.coefficients).norm() <= 1e-12 * v.coefficients.norm());
        }
        CHECK(intertwining(b, kDualitySigns) <= 1e-12);
    }
}

TEST_CASE("verify_t_duality on random bundles") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const DualityReport d = verify_t_duality(random_bundle(seed));
        CHECK(std::abs(d.product_log) <= 1e-8);
        CHECK(d.intertwining_residual <= 1e-12);
        CHECK(d.isometry_residual <= 1e-12);
        CHECK(d.inverse_residual <= 1e-12);
        CHECK(d.spectral_transport_residual <= 1e-10);
        CHECK(d.harmonic_transport_residual <= 1e-8);
        CHECK(d.cohomology_dims[0] == d.cohomology_dims[3]);
        CHECK(d.cohomology_dims[1] == d.cohomology_dims[2]);
    }
}

TEST_CASE("a trivial bundle has cohomology and a harmonic transport of modulus one") {
    const BundleData b = trivial_bundle(minimal_sphere(3), 2.0);
    const DualityReport d = verify_t_duality(b);
    // H(S^3 x S^1) = 2 + 2 in each parity.
    CHECK(d.cohomology_dims == std::array<Index, 4>{2, 2, 2, 2});
    CHECK(d.harmonic_transport_residual <= 1e-10);
    CHECK(std::abs(d.product_log) <= 1e-12);
}

TEST_CASE("deformations: constant and closed-B flux paths do not drift") {
    const BundleData b = random_bundle(12);
    CHECK(deformation_experiment(constant_path(b), 5).max_relative_drift == 0.0);
    const DriftReport flux = deformation_experiment(flux_path(b, zero_operator(b.base, 3)), 5, {}, "flux");
    CHECK(flux.max_relative_drift == 0.0);
    CHECK(flux.samples.size() == 6);
    CHECK(flux.path == "flux");
}

TEST_CASE("deformations: hopf degree-0 Gram scaling baseline") {
    const DriftReport d = deformation_experiment(gram_scaling_path(hopf_bundle(1.0, 2.0, 1.0), 0, 1.0, 2.0), 10);
    REQUIRE(d.samples.size() == 11);
    for (const auto& s : d.samples)
        CHECK(s.log_scalar == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(d.max_relative_drift <= 1e-14);
}

TEST_CASE("deformations: an invalid point raises PathInvalid") {
    const BundleData b = hopf_bundle(1.0, 2.0, 1.0);
    const DeformationPath bad = [b](double u) {
        BundleData out = b;
        out.radius = FiberRadius{1.0 - 2.0 * u, false};
        return out;
    };
    CHECK_THROWS_WITH_AS(deformation_experiment(bad, 4), doctest::Contains("PathInvalid"), Error);
}
