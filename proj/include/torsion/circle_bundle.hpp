#ifndef TORSION_CIRCLE_BUNDLE_HPP
#define TORSION_CIRCLE_BUNDLE_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "torsion/chain_models.hpp"
#include "torsion/torsion_engine.hpp"

namespace torsion {

/// Fibre length r > 0. Duality flips `inverted` instead of computing 1/r so
/// that dualising twice returns the identical value.
struct FiberRadius {
    double value = 1.0;
    bool inverted = false;

    double r() const noexcept { return inverted ? 1.0 / value : value; }
    FiberRadius dual() const noexcept { return {value, !inverted}; }
    bool operator==(const FiberRadius&) const = default;
};

/**
 * Circle-bundle model over a base complex M: multiplication operators by
 * the curvature F (degree 2), the flux components H2 (degree 2) and H3
 * (degree 3), and the fibre radius.
 */
struct BundleData {
    GradedCochainComplex base;
    GradedOperator curvature;  // F
    GradedOperator h2;
    GradedOperator h3;
    FiberRadius radius;

    bool operator==(const BundleData&) const = default;
};

/// Throws ShapeMismatch, InvalidRadius, or InvalidFlux naming the block
/// identity that fails (d_H3^2 + F H2 = 0, [d_H3, F] = 0, [d_H3, H2] = 0).
void validate(const BundleData& b, double tol = 1e-12);

/// Largest square-zero residual of the assembled block differentials.
double square_zero_residual(const BundleData& b);

/**
 * Invariant forms as pairs of base cochains.
 *
 * The parity-k space is C^k(M) + C^{k-1}(M) (parities mod 2), so the even
 * space is [C^even | C^odd] and the odd space [C^odd | C^even], each with
 * the plain direct-sum Gram matrix. The differential out of parity k is
 *
 *     [ d_H3     F / r ]
 *     [ r H2    -d_H3  ]
 *
 * with d_H3 = delta + H3.
 */
struct InvariantComplex {
    TwistedComplex complex;
    double radius = 1.0;
    /// Size of the first component (C^k) in the parity-k space.
    std::array<Index, 2> leading_dim{};
};

InvariantComplex build_invariant_complex(const BundleData& b);

TorsionElement invariant_twisted_torsion(const BundleData& b, const SpectralOptions& options = {});

/// (F, H2, H3, r) -> (H2, F, H3, 1/r) on the same base.
BundleData t_dualize(const BundleData& b);

struct ParityElement {
    Parity parity = Parity::Even;
    Vector coefficients;
};

/// Signs of T_k(w1, w2) = (s_k w2, t_k w1).
struct DualitySigns {
    std::array<int, 2> s{1, -1};
    std::array<int, 2> t{-1, 1};
};

/// T_k(w1, w2) = ((-1)^k w2, (-1)^{k+1} w1), the rule for which
/// T D_k = D^_{k+1} T holds exactly.
inline constexpr DualitySigns kDualitySigns{};

/// Matrix of T from the parity-k space of b to the parity-(k+1) space of
/// t_dualize(b). Depends only on the base dimensions.
Matrix t_duality_matrix(const GradedCochainComplex& base, Parity k, const DualitySigns& signs = kDualitySigns);

/// Matrix of S = T^{-1} from the parity-(k+1) dual space back to parity k.
Matrix s_duality_matrix(const GradedCochainComplex& base, Parity k, const DualitySigns& signs = kDualitySigns);

/// Throws ParityMismatch if x does not have the dimension of its parity space.
ParityElement t_duality_map(const BundleData& b, const ParityElement& x);

/// Inverse of t_duality_map: y lives in the invariant complex of t_dualize(b).
ParityElement s_duality_map(const BundleData& b, const ParityElement& y);

struct DualityReport {
    TorsionElement torsion;
    TorsionElement dual_torsion;
    double product_log = 0.0;
    /// (h_even, h_odd, dual h_even, dual h_odd)
    std::array<Index, 4> cohomology_dims{};
    double intertwining_residual = 0.0;
    double isometry_residual = 0.0;
    double inverse_residual = 0.0;
    /// Largest relative mismatch between positive spectra of d^dagger d on
    /// parity k and on the dual parity k+1.
    double spectral_transport_residual = 0.0;
    /// | |det <dual harmonic basis, T(harmonic basis)>| - 1 |, worst parity.
    double harmonic_transport_residual = 0.0;
};

/// Throws DualityViolation when |product_log| exceeds tol.
DualityReport verify_t_duality(const BundleData& b, const SpectralOptions& options = {}, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Deformations

/// A path u in [0, 1] -> bundle data.
using DeformationPath = std::function<BundleData(double)>;

struct DeformationSample {
    double parameter = 0.0;
    double log_scalar = 0.0;
    bool operator==(const DeformationSample&) const = default;
};

struct DriftReport {
    std::string path;
    std::vector<DeformationSample> samples;
    double max_relative_drift = 0.0;
};

/**
 * Samples the invariant torsion at u = i / steps, i = 0..steps, and reports
 * max |tau(u) / tau(0) - 1|. Finite models are not expected to be invariant;
 * this measures drift and asserts nothing. Throws PathInvalid with the
 * offending parameter.
 */
DriftReport deformation_experiment(const DeformationPath& path, int steps, const SpectralOptions& options = {},
                                   std::string name = "custom");

DeformationPath constant_path(BundleData b);
/// Gram matrix of one base degree scaled by s = from + u (to - from).
DeformationPath gram_scaling_path(BundleData b, int degree, double from, double to);
/// H3 + u * delta_h3.
DeformationPath flux_path(BundleData b, GradedOperator delta_h3);
/// F + u * delta_f.
DeformationPath curvature_path(BundleData b, GradedOperator delta_f);

}  // namespace torsion

#endif
