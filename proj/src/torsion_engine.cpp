#include "torsion/torsion_engine.hpp"

#include <cmath>
#include <sstream>

namespace torsion {

double TorsionElement::scalar() const { return std::exp(log_scalar); }

double TorsionElement::inverse_scalar() const { return std::exp(-log_scalar); }

std::vector<Index> TorsionElement::kernel_dims() const {
    std::vector<Index> dims;
    for (const auto& b : harmonic_bases)
        dims.push_back(b.dim());
    return dims;
}

bool TorsionElement::acyclic() const {
    for (const auto& b : harmonic_bases)
        if (b.dim() != 0)
            return false;
    return true;
}

namespace {

void append(std::vector<std::string>& into, const std::vector<std::string>& from, const std::string& where) {
    for (const auto& w : from)
        into.push_back(where + ": " + w);
}

// det' of A^dagger A for A mapping (from, gram_from) into (to, gram_to).
PseudoDeterminant gram_normal_pseudodet(const Matrix& a, const Matrix& gram_from, const Matrix& gram_to,
                                        const SpectralOptions& options) {
    if (a.cols() == 0)
        return {};
    return pseudodet(gram_adjoint(a, gram_from, gram_to) * a, gram_from, options);
}

}  // namespace

std::vector<Laplacian> laplacians(const GradedCochainComplex& c) {
    std::vector<Laplacian> out;
    for (int p = 0; p < c.degree_count(); ++p) {
        const Index n = c.dim(p);
        Matrix op = Matrix::Zero(n, n);
        if (p + 1 < c.degree_count()) {
            const Matrix d = c.coboundary(p);
            op += gram_adjoint(d, c.gram(p), c.gram(p + 1)) * d;
        }
        if (p > 0) {
            const Matrix d = c.coboundary(p - 1);
            op += d * gram_adjoint(d, c.gram(p - 1), c.gram(p));
        }
        out.push_back(Laplacian{std::move(op), c.gram(p)});
    }
    return out;
}

std::vector<Laplacian> laplacians(const TwistedComplex& t) {
    std::vector<Laplacian> out;
    for (Parity k : {Parity::Even, Parity::Odd}) {
        const Parity other = flip(k);
        const Matrix& out_d = t.d(k);
        const Matrix& in_d = t.d(other);
        Matrix op = gram_adjoint(out_d, t.gram(k), t.gram(other)) * out_d;
        op += in_d * gram_adjoint(in_d, t.gram(other), t.gram(k));
        out.push_back(Laplacian{std::move(op), t.gram(k)});
    }
    return out;
}

double telescoped_log_torsion(const GradedCochainComplex& c, const SpectralOptions& options) {
    double log_tau = 0.0;
    for (int p = 0; p + 1 < c.degree_count(); ++p) {
        const auto det = gram_normal_pseudodet(c.coboundary(p), c.gram(p), c.gram(p + 1), options);
        log_tau += (p % 2 == 0 ? 0.5 : -0.5) * det.log_value;
    }
    return log_tau;
}

TorsionElement reidemeister_torsion(const GradedCochainComplex& c, const SpectralOptions& options) {
    TorsionElement out;
    out.convention_tag = kGradedConvention;
    const auto lap = laplacians(c);
    for (int p = 0; p < c.degree_count(); ++p) {
        const auto spectrum = hermitian_spectrum(lap[static_cast<std::size_t>(p)].op,
                                                 lap[static_cast<std::size_t>(p)].gram, options);
        const auto det = pseudodet(spectrum);
        append(out.warnings, det.warnings, "degree " + std::to_string(p));
        const double exponent = ((p + 1) % 2 == 0 ? 1.0 : -1.0) * 0.5 * p;
        out.log_scalar += exponent * det.log_value;
        out.harmonic_bases.push_back(harmonic_basis(spectrum, "degree " + std::to_string(p)));
    }

    const double telescoped = telescoped_log_torsion(c, options);
    const double rel = std::abs(std::expm1(telescoped - out.log_scalar));
    if (rel > 1e-10) {
        std::ostringstream msg;
        msg << "ConventionMismatch: Laplacian and telescoped formulas differ by relative " << rel;
        out.warnings.push_back(msg.str());
    }
    return out;
}

TorsionElement twisted_torsion(const TwistedComplex& t, const SpectralOptions& options) {
    TorsionElement out;
    out.convention_tag = kParityConvention;
    const auto even = gram_normal_pseudodet(t.d(Parity::Even), t.gram(Parity::Even), t.gram(Parity::Odd), options);
    const auto odd = gram_normal_pseudodet(t.d(Parity::Odd), t.gram(Parity::Odd), t.gram(Parity::Even), options);
    append(out.warnings, even.warnings, "even");
    append(out.warnings, odd.warnings, "odd");
    out.log_scalar = 0.5 * even.log_value - 0.5 * odd.log_value;

    const auto lap = laplacians(t);
    for (Parity k : {Parity::Even, Parity::Odd}) {
        const auto& l = lap[static_cast<std::size_t>(k)];
        const auto spectrum = hermitian_spectrum(l.op, l.gram, options);
        append(out.warnings, spectrum.warnings, std::string(to_string(k)) + " Laplacian");
        out.harmonic_bases.push_back(harmonic_basis(spectrum, to_string(k)));
    }
    return out;
}

}  // namespace torsion
