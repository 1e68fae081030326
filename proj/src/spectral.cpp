#include "torsion/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "torsion/error.hpp"

namespace torsion {

RealVector SpectralDecomposition::positive_eigenvalues() const {
    const Index n = eigenvalues.size();
    Index first = 0;
    while (first < n && eigenvalues(first) <= kernel_tol)
        ++first;
    return eigenvalues.tail(n - first);
}

SpectralDecomposition hermitian_spectrum(const Matrix& a, const Matrix& gram, const SpectralOptions& options) {
    if (a.rows() != a.cols() || gram.rows() != a.rows())
        throw Error(ErrorKind::ShapeMismatch, "operator and Gram matrix shapes disagree");
    require_positive_gram(gram, "Gram matrix");

    SpectralDecomposition out;
    const Index n = a.rows();
    if (n == 0) {
        out.eigenvalues = RealVector(0);
        out.eigenvectors = Matrix(0, 0);
        out.kernel_tol = options.absolute_tol.value_or(options.relative_tol);
        return out;
    }

    const Matrix form = gram * a;
    const double scale = form.cwiseAbs().maxCoeff();
    const double asym = (form - form.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(scale, 1e-300) && asym > 0.0)
        throw Error(ErrorKind::NotHermitian, "operator is not self-adjoint for the given inner product (residual " +
                                                 std::to_string(asym) + ")");

    Eigen::LLT<Matrix> llt(gram);
    const auto lower = llt.matrixL();
    // C = L^{-1} (G A) L^{-*}
    Matrix c = lower.solve(Matrix((form + form.adjoint()) * 0.5));
    c = lower.solve(Matrix(c.adjoint())).adjoint();
    c = (c + c.adjoint()).eval() * 0.5;

    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = llt.matrixU().solve(es.eigenvectors());

    const double largest = out.eigenvalues.cwiseAbs().maxCoeff();
    out.kernel_tol = options.absolute_tol.value_or(options.relative_tol * (largest > 0.0 ? largest : 1.0));

    double largest_discarded = 0.0;
    double smallest_kept = 0.0;
    bool have_kept = false;
    for (Index i = 0; i < n; ++i) {
        const double lambda = out.eigenvalues(i);
        if (std::abs(lambda) <= out.kernel_tol) {
            ++out.kernel_dim;
            largest_discarded = std::max(largest_discarded, std::abs(lambda));
        } else if (lambda > 0.0 && (!have_kept || lambda < smallest_kept)) {
            smallest_kept = lambda;
            have_kept = true;
        }
    }
    if (have_kept && largest_discarded > 0.0 && smallest_kept / largest_discarded < options.min_gap_ratio) {
        std::ostringstream msg;
        msg << "SpectralGapWarning: smallest retained eigenvalue " << smallest_kept
            << " is within a factor " << options.min_gap_ratio << " of discarded " << largest_discarded;
        out.warnings.push_back(msg.str());
    }
    return out;
}

SpectralDecomposition hermitian_spectrum(const Matrix& a, const SpectralOptions& options) {
    return hermitian_spectrum(a, Matrix::Identity(a.rows(), a.rows()), options);
}

double PseudoDeterminant::value() const { return std::exp(log_value); }

PseudoDeterminant pseudodet(const SpectralDecomposition& spectrum) {
    PseudoDeterminant out;
    out.warnings = spectrum.warnings;
    for (Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        const double lambda = spectrum.eigenvalues(i);
        if (lambda < -spectrum.kernel_tol)
            throw Error(ErrorKind::NegativeEigenvalue, "eigenvalue " + std::to_string(lambda) +
                                                           " below -kernel_tol");
        if (lambda > spectrum.kernel_tol)
            out.log_value += std::log(lambda);
        else
            ++out.kernel_dim;
    }
    return out;
}

PseudoDeterminant pseudodet(const Matrix& a, const Matrix& gram, const SpectralOptions& options) {
    return pseudodet(hermitian_spectrum(a, gram, options));
}

PseudoDeterminant pseudodet(const Matrix& a, const SpectralOptions& options) {
    return pseudodet(hermitian_spectrum(a, options));
}

HarmonicBasis harmonic_basis(const SpectralDecomposition& spectrum, std::string label) {
    std::vector<Index> kernel;
    for (Index i = 0; i < spectrum.eigenvalues.size(); ++i)
        if (std::abs(spectrum.eigenvalues(i)) <= spectrum.kernel_tol)
            kernel.push_back(i);
    Matrix columns(spectrum.eigenvectors.rows(), static_cast<Index>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j)
        columns.col(static_cast<Index>(j)) = spectrum.eigenvectors.col(kernel[j]);
    return HarmonicBasis{std::move(label), std::move(columns)};
}

HarmonicBasis harmonic_basis(const Matrix& laplacian, const Matrix& gram, const SpectralOptions& options,
                             std::string label) {
    return harmonic_basis(hermitian_spectrum(laplacian, gram, options), std::move(label));
}

}  // namespace torsion
