#ifndef TORSION_TORSION_ENGINE_HPP
#define TORSION_TORSION_ENGINE_HPP

#include <string>
#include <vector>

#include "torsion/chain_models.hpp"
#include "torsion/spectral.hpp"

namespace torsion {

inline constexpr const char* kGradedConvention = "p-weighted-v1";
inline constexpr const char* kParityConvention = "parity-half-v1";

/**
 * An element of the determinant line of cohomology, up to sign: a positive
 * scalar (stored as its logarithm) together with orthonormal harmonic bases
 * standing in for the unit volume elements.
 *
 * Bases are indexed by degree for Z-graded complexes and by parity
 * (0 = even, 1 = odd) for Z2-graded ones.
 */
struct TorsionElement {
    double log_scalar = 0.0;
    std::vector<HarmonicBasis> harmonic_bases;
    std::string convention_tag;
    std::vector<std::string> warnings;

    double scalar() const;
    double inverse_scalar() const;
    std::vector<Index> kernel_dims() const;
    /// Vanishing cohomology: the determinant line is canonically trivial.
    bool acyclic() const;
};

struct Laplacian {
    Matrix op;    // G-self-adjoint operator
    Matrix gram;  // inner product of the underlying space
};

/// Delta_p = delta^dagger delta + delta delta^dagger, adjoints taken with the
/// complex's Gram matrices.
std::vector<Laplacian> laplacians(const GradedCochainComplex& c);

/// Twisted Laplacians d^dagger d + d d^dagger on the even and odd spaces.
std::vector<Laplacian> laplacians(const TwistedComplex& t);

/**
 * Reidemeister torsion of a Z-graded complex,
 *   log tau = sum_p (-1)^{p+1} (p/2) log det' Delta_p.
 *
 * The telescoped form sum_p (-1)^p (1/2) log det'(delta_p^dagger delta_p) is
 * evaluated as well; a disagreement beyond 1e-10 relative lands in warnings.
 */
TorsionElement reidemeister_torsion(const GradedCochainComplex& c, const SpectralOptions& options = {});

/// log tau = (1/2) log det'(d_even^dagger d_even) - (1/2) log det'(d_odd^dagger d_odd).
TorsionElement twisted_torsion(const TwistedComplex& t, const SpectralOptions& options = {});

/// The telescoped Z-graded formula on its own (used as a cross-check).
double telescoped_log_torsion(const GradedCochainComplex& c, const SpectralOptions& options = {});

}  // namespace torsion

#endif
