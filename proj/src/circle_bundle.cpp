#include "torsion/circle_bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace torsion {

namespace {

struct ParityBlocks {
    Matrix d;   // d_H3 out of parity k
    Matrix f;   // F on parity k
    Matrix h2;  // H2 on parity k
};

std::array<ParityBlocks, 2> parity_blocks(const BundleData& b) {
    std::array<ParityBlocks, 2> out;
    for (Parity k : {Parity::Even, Parity::Odd}) {
        auto& blk = out[static_cast<std::size_t>(k)];
        blk.d = parity_coboundary(b.base, k) + b.h3.parity_matrix(b.base, k);
        blk.f = b.curvature.parity_matrix(b.base, k);
        blk.h2 = b.h2.parity_matrix(b.base, k);
    }
    return out;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void check_shapes(const BundleData& b) {
    if (b.curvature.shift != 2)
        throw Error(ErrorKind::ShapeMismatch, "curvature operator must raise degree by 2");
    if (b.h2.shift != 2)
        throw Error(ErrorKind::ShapeMismatch, "H2 operator must raise degree by 2");
    if (b.h3.shift != 3)
        throw Error(ErrorKind::ShapeMismatch, "H3 operator must raise degree by 3");
    b.curvature.check_shape(b.base);
    b.h2.check_shape(b.base);
    b.h3.check_shape(b.base);
    const double r = b.radius.r();
    if (!(b.radius.value > 0.0) || !std::isfinite(b.radius.value) || !std::isfinite(r))
        throw Error(ErrorKind::InvalidRadius, "fibre radius must be positive and finite");
}

Matrix block_2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    Matrix out(a.rows() + c.rows(), a.cols() + b.cols());
    if (a.size()) out.topLeftCorner(a.rows(), a.cols()) = a;
    if (b.size()) out.topRightCorner(b.rows(), b.cols()) = b;
    if (c.size()) out.bottomLeftCorner(c.rows(), c.cols()) = c;
    if (d.size()) out.bottomRightCorner(d.rows(), d.cols()) = d;
    return out;
}

}  // namespace

void validate(const BundleData& b, double tol) {
    check_shapes(b);
    const auto blk = parity_blocks(b);
    double scale = 1.0;
    for (const auto& x : blk)
        scale = std::max({scale, x.d.norm(), x.f.norm(), x.h2.norm()});
    const double bound = tol * scale * scale;

    for (Parity k : {Parity::Even, Parity::Odd}) {
        const auto& here = blk[static_cast<std::size_t>(k)];
        const auto& there = blk[static_cast<std::size_t>(flip(k))];
        const std::string where = std::string(" on the ") + to_string(k) + " part";
        if (max_abs(there.d * here.d + here.f * here.h2) > bound)
            throw Error(ErrorKind::InvalidFlux, "d_H3^2 + F H2 = 0 fails" + where);
        if (max_abs(here.d * here.f - there.f * here.d) > bound)
            throw Error(ErrorKind::InvalidFlux, "F does not commute with d_H3" + where);
        if (max_abs(there.h2 * here.d - here.d * here.h2) > bound)
            throw Error(ErrorKind::InvalidFlux, "H2 does not commute with d_H3" + where);
        if (max_abs(here.h2 * here.f + there.d * here.d) > bound)
            throw Error(ErrorKind::InvalidFlux, "H2 F + d_H3^2 = 0 fails" + where);
    }
}

InvariantComplex build_invariant_complex(const BundleData& b) {
    validate(b);
    const auto blk = parity_blocks(b);
    const double r = b.radius.r();
    const auto& ev = blk[0];
    const auto& od = blk[1];

    // Out of even [C^ev | C^od] into odd [C^od | C^ev].
    Matrix d_even = block_2x2(ev.d, od.f / r, r * ev.h2, -od.d);
    // Out of odd [C^od | C^ev] into even [C^ev | C^od].
    Matrix d_odd = block_2x2(od.d, ev.f / r, r * od.h2, -ev.d);

    const Matrix g_ev = b.base.parity_gram(Parity::Even);
    const Matrix g_od = b.base.parity_gram(Parity::Odd);
    InvariantComplex out{TwistedComplex(std::move(d_even), std::move(d_odd), block_diagonal({g_ev, g_od}),
                                        block_diagonal({g_od, g_ev})),
                         r,
                         {g_ev.rows(), g_od.rows()}};
    return out;
}

double square_zero_residual(const BundleData& b) {
    return build_invariant_complex(b).complex.square_zero_residual();
}

TorsionElement invariant_twisted_torsion(const BundleData& b, const SpectralOptions& options) {
    return twisted_torsion(build_invariant_complex(b).complex, options);
}

BundleData t_dualize(const BundleData& b) {
    BundleData out{b.base, b.h2, b.curvature, b.h3, b.radius.dual()};
    return out;
}

// ---------------------------------------------------------------------------
// T and S

Matrix t_duality_matrix(const GradedCochainComplex& base, Parity k, const DualitySigns& signs) {
    const Index lead = base.parity_dim(k);          // w1 in C^k
    const Index trail = base.parity_dim(flip(k));  // w2 in C^{k-1}
    const auto i = static_cast<std::size_t>(k);
    // Target parity k+1: [C^{k+1} | C^k] = [w2 slot | w1 slot].
    Matrix t = Matrix::Zero(trail + lead, lead + trail);
    if (trail) t.block(0, lead, trail, trail) = Matrix::Identity(trail, trail) * double(signs.s[i]);
    if (lead) t.block(trail, 0, lead, lead) = Matrix::Identity(lead, lead) * double(signs.t[i]);
    return t;
}

Matrix s_duality_matrix(const GradedCochainComplex& base, Parity k, const DualitySigns& signs) {
    // Signed permutation: the inverse is the transpose.
    return t_duality_matrix(base, k, signs).transpose();
}

namespace {

void require_parity_dim(const GradedCochainComplex& base, const ParityElement& x) {
    if (x.coefficients.size() != base.total_dim())
        throw Error(ErrorKind::ParityMismatch, std::string("element has length ") +
                                                   std::to_string(x.coefficients.size()) + ", the " +
                                                   to_string(x.parity) + " space has dimension " +
                                                   std::to_string(base.total_dim()));
}

}  // namespace

ParityElement t_duality_map(const BundleData& b, const ParityElement& x) {
    require_parity_dim(b.base, x);
    return ParityElement{flip(x.parity), t_duality_matrix(b.base, x.parity) * x.coefficients};
}

ParityElement s_duality_map(const BundleData& b, const ParityElement& y) {
    require_parity_dim(b.base, y);
    const Parity k = flip(y.parity);
    return ParityElement{k, s_duality_matrix(b.base, k) * y.coefficients};
}

// ---------------------------------------------------------------------------
// Verification

namespace {

RealVector positive_spectrum(const Matrix& d, const Matrix& gram_from, const Matrix& gram_to,
                             const SpectralOptions& options) {
    if (d.cols() == 0)
        return RealVector(0);
    return hermitian_spectrum(gram_adjoint(d, gram_from, gram_to) * d, gram_from, options).positive_eigenvalues();
}

double spectrum_mismatch(const RealVector& a, const RealVector& b) {
    if (a.size() != b.size())
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (Index i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a(i) - b(i)) / std::max(std::abs(a(i)), std::abs(b(i))));
    return worst;
}

}  // namespace

DualityReport verify_t_duality(const BundleData& b, const SpectralOptions& options, double tol) {
    const BundleData dual = t_dualize(b);
    const InvariantComplex primal_c = build_invariant_complex(b);
    const InvariantComplex dual_c = build_invariant_complex(dual);
    const TwistedComplex& x = primal_c.complex;
    const TwistedComplex& y = dual_c.complex;

    DualityReport report;
    report.torsion = twisted_torsion(x, options);
    report.dual_torsion = twisted_torsion(y, options);
    report.product_log = report.torsion.log_scalar + report.dual_torsion.log_scalar;

    const auto primal_dims = report.torsion.kernel_dims();
    const auto dual_dims = report.dual_torsion.kernel_dims();
    report.cohomology_dims = {primal_dims[0], primal_dims[1], dual_dims[0], dual_dims[1]};

    for (Parity k : {Parity::Even, Parity::Odd}) {
        const Parity k1 = flip(k);
        const Matrix t_k = t_duality_matrix(b.base, k);
        const Matrix t_k1 = t_duality_matrix(b.base, k1);
        const Matrix s_k = s_duality_matrix(b.base, k);

        report.intertwining_residual =
            std::max(report.intertwining_residual, operator_norm(t_k1 * x.d(k) - y.d(k1) * t_k));
        report.isometry_residual =
            std::max(report.isometry_residual, operator_norm(t_k.adjoint() * y.gram(k1) * t_k - x.gram(k)));
        report.inverse_residual = std::max(
            report.inverse_residual, operator_norm(s_k * t_k - Matrix::Identity(x.dim(k), x.dim(k))));

        const RealVector primal_spec = positive_spectrum(x.d(k), x.gram(k), x.gram(k1), options);
        const RealVector dual_spec = positive_spectrum(y.d(k1), y.gram(k1), y.gram(k), options);
        report.spectral_transport_residual =
            std::max(report.spectral_transport_residual, spectrum_mismatch(primal_spec, dual_spec));

        const Matrix& eta = report.torsion.harmonic_bases[static_cast<std::size_t>(k)].columns;
        const Matrix& eta_dual = report.dual_torsion.harmonic_bases[static_cast<std::size_t>(k1)].columns;
        double harmonic = 0.0;
        if (eta.cols() != eta_dual.cols()) {
            harmonic = std::numeric_limits<double>::infinity();
        } else if (eta.cols() > 0) {
            const Matrix overlap = eta_dual.adjoint() * y.gram(k1) * (t_k * eta);
            harmonic = std::abs(std::abs(overlap.determinant()) - 1.0);
        }
        report.harmonic_transport_residual = std::max(report.harmonic_transport_residual, harmonic);
    }

    if (std::abs(report.product_log) > tol) {
        std::ostringstream msg;
        msg << "log tau + log tau_dual = " << report.product_log << " exceeds " << tol;
        throw Error(ErrorKind::DualityViolation, msg.str());
    }
    return report;
}

// ---------------------------------------------------------------------------
// Deformations

DriftReport deformation_experiment(const DeformationPath& path, int steps, const SpectralOptions& options,
                                   std::string name) {
    if (steps < 1)
        throw Error(ErrorKind::PathInvalid, "need at least one step");
    DriftReport report;
    report.path = std::move(name);
    for (int i = 0; i <= steps; ++i) {
        const double u = static_cast<double>(i) / steps;
        double log_tau = 0.0;
        try {
            log_tau = invariant_twisted_torsion(path(u), options).log_scalar;
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "at u = " << u << ": " << e.what();
            throw Error(ErrorKind::PathInvalid, msg.str());
        }
        report.samples.push_back({u, log_tau});
        report.max_relative_drift =
            std::max(report.max_relative_drift, std::abs(std::expm1(log_tau - report.samples.front().log_scalar)));
    }
    return report;
}

DeformationPath constant_path(BundleData b) {
    return [b = std::move(b)](double) { return b; };
}

DeformationPath gram_scaling_path(BundleData b, int degree, double from, double to) {
    if (degree < 0 || degree >= b.base.degree_count())
        throw Error(ErrorKind::PathInvalid, "no degree " + std::to_string(degree) + " in the base");
    return [b = std::move(b), degree, from, to](double u) {
        std::vector<Matrix> grams = b.base.grams();
        grams[static_cast<std::size_t>(degree)] *= from + u * (to - from);
        BundleData out = b;
        out.base = b.base.with_grams(std::move(grams));
        return out;
    };
}

DeformationPath flux_path(BundleData b, GradedOperator delta_h3) {
    return [b = std::move(b), delta = std::move(delta_h3)](double u) {
        BundleData out = b;
        out.h3 = sum(b.h3, scaled(delta, u));
        return out;
    };
}

DeformationPath curvature_path(BundleData b, GradedOperator delta_f) {
    return [b = std::move(b), delta = std::move(delta_f)](double u) {
        BundleData out = b;
        out.curvature = sum(b.curvature, scaled(delta, u));
        return out;
    };
}

}  // namespace torsion
