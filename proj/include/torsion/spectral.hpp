#ifndef TORSION_SPECTRAL_HPP
#define TORSION_SPECTRAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "torsion/linalg.hpp"

namespace torsion {

/// Kernel threshold: absolute when given, otherwise relative_tol times the
/// largest eigenvalue magnitude (or 1 when the spectrum is identically zero).
struct SpectralOptions {
    double relative_tol = 1e-9;
    std::optional<double> absolute_tol;
    /// Smallest acceptable ratio between the smallest retained and the
    /// largest discarded eigenvalue before a warning is raised.
    double min_gap_ratio = 1e3;
};

struct SpectralDecomposition {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // G-orthonormal columns
    double kernel_tol = 0.0;
    Index kernel_dim = 0;
    std::vector<std::string> warnings;

    /// Eigenvalues above kernel_tol, ascending.
    RealVector positive_eigenvalues() const;
};

/**
 * Full spectrum of an operator that is self-adjoint with respect to the
 * inner product G, i.e. G*A is Hermitian.
 *
 * Solved by Cholesky congruence G = L L^*: the Hermitian matrix
 * L^{-1} (G A) L^{-*} has the same spectrum, and eigenvectors are mapped back
 * by L^{-*} so they come out G-orthonormal. Throws NotHermitian when G*A is
 * not Hermitian to 1e-10 relative, GramNotPositive for a bad G.
 */
SpectralDecomposition hermitian_spectrum(const Matrix& a, const Matrix& gram, const SpectralOptions& options = {});
SpectralDecomposition hermitian_spectrum(const Matrix& a, const SpectralOptions& options = {});

struct PseudoDeterminant {
    double log_value = 0.0;
    Index kernel_dim = 0;
    std::vector<std::string> warnings;

    double value() const;
};

/// Product of the eigenvalues above the kernel threshold, accumulated in
/// the log domain. Throws NegativeEigenvalue below -kernel_tol.
PseudoDeterminant pseudodet(const Matrix& a, const Matrix& gram, const SpectralOptions& options = {});
PseudoDeterminant pseudodet(const Matrix& a, const SpectralOptions& options = {});
PseudoDeterminant pseudodet(const SpectralDecomposition& spectrum);

struct HarmonicBasis {
    std::string label;
    Matrix columns;  // G-orthonormal basis of the kernel

    Index dim() const noexcept { return columns.cols(); }
};

HarmonicBasis harmonic_basis(const Matrix& laplacian, const Matrix& gram, const SpectralOptions& options = {},
                             std::string label = {});
HarmonicBasis harmonic_basis(const SpectralDecomposition& spectrum, std::string label = {});

}  // namespace torsion

#endif
