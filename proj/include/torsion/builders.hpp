#ifndef TORSION_BUILDERS_HPP
#define TORSION_BUILDERS_HPP

#include <cstdint>

#include "torsion/chain_models.hpp"
#include "torsion/circle_bundle.hpp"

namespace torsion {

/// Triangulated circle with n >= 3 vertices.
SimplicialComplex cycle_complex(int n);

/// Boundary of the n-simplex on vertices 0..n, an (n-1)-sphere.
SimplicialComplex simplex_boundary(int n);

/**
 * Cellular cochain complex of the lens space L(p, q) with one cell per
 * degree 0..3, twisted by the character t -> zeta^k, zeta = exp(2 pi i / p).
 * Coboundaries are (w - 1, 1 + w + ... + w^{p-1}, w^r - 1) with w = zeta^k
 * and r q = 1 mod p; the middle entry is exactly 0 unless w = 1.
 */
GradedCochainComplex lens_complex(int p, int q, int k);

/// Minimal model of S^n: one generator in degrees 0 and n, zero differential.
GradedCochainComplex minimal_sphere(int n);

/// Left multiplication by h in a model whose only nonzero products are by
/// the degree-0 unit (C^0 must be one-dimensional).
GradedOperator unit_multiplication(const GradedCochainComplex& c, const Cochain& h);

/// Base = minimal S^2 model; F = f x, H2 = h2 x, H3 = 0.
BundleData hopf_bundle(double f, double h2, double r);

/// Zero flux over an arbitrary base.
BundleData trivial_bundle(GradedCochainComplex base, double r = 1.0);

struct RandomBundleShape {
    int even_generators = 2;  // degree-2 classes of the 4-dimensional factor
    int odd_generators = 1;   // degree-3 exterior generators
    int acyclic_pairs = 1;    // contractible summands e -> w e'

    bool operator==(const RandomBundleShape&) const = default;
};

/**
 * Seeded random bundle that is valid by construction.
 *
 * Base: FormalModel with a random symmetric intersection form, plus random
 * acyclic pairs on which F, H2, H3 act by zero, with random Hermitian
 * positive-definite Gram matrices. F is random, H2 random subject to
 * F H2 = 0 (its Q-pairing with F vanishes), H3 a random combination of the
 * degree-3 generators. Radius in [0.25, 4].
 */
BundleData random_bundle(std::uint64_t seed, const RandomBundleShape& shape = {});

}  // namespace torsion

#endif
