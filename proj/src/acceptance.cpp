#include "torsion/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "torsion/builders.hpp"
#include "torsion/workbench.hpp"

namespace torsion {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double relative_error(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::string sci(double x) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(2) << x;
    return out.str();
}

std::string num(double x) {
    std::ostringstream out;
    out << std::setprecision(13) << x;
    return out.str();
}

GradedCochainComplex simplicial_complex_of(const SimplicialComplex& k) { return coboundary_matrices(k); }

struct NamedComplex {
    std::string name;
    GradedCochainComplex complex;
};

std::vector<NamedComplex> hodge_models() {
    std::vector<NamedComplex> out;
    for (int n = 3; n <= 8; ++n)
        out.push_back({"cycle(" + std::to_string(n) + ")", simplicial_complex_of(cycle_complex(n))});
    for (int n : {3, 4})
        out.push_back({"simplex_boundary(" + std::to_string(n) + ")", simplicial_complex_of(simplex_boundary(n))});
    for (int k = 1; k <= 4; ++k)
        out.push_back({"lens(5,1," + std::to_string(k) + ")", lens_complex(5, 1, k)});
    return out;
}

struct NamedBundle {
    std::string name;
    BundleData bundle;
};

std::vector<NamedBundle> duality_bundles() {
    std::vector<NamedBundle> out;
    for (int k : {1, 2, 3})
        for (double r : {0.5, 1.0, 2.0, 3.0})
            out.push_back({"hopf(1," + std::to_string(k) + "," + num(r) + ")", hopf_bundle(1.0, k, r)});
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        out.push_back({"random(" + std::to_string(seed) + ")", random_bundle(seed)});
    return out;
}

// ---------------------------------------------------------------------------

CriterionResult structural_exactness() {
    const auto start = Clock::now();
    CriterionResult c{1, "structural exactness", true, ""};
    int exact = 0;
    std::string first_failure;
    auto check_exact = [&](const std::string& name, const GradedCochainComplex& cx) {
        const auto& d = cx.coboundaries();
        for (std::size_t p = 0; p + 1 < d.size(); ++p) {
            const Matrix sq = d[p + 1] * d[p];
            if (sq.size() && sq.cwiseAbs().maxCoeff() != 0.0) {
                c.passed = false;
                if (first_failure.empty())
                    first_failure = name;
                return;
            }
        }
        ++exact;
    };
    for (int n = 3; n <= 8; ++n)
        check_exact("cycle(" + std::to_string(n) + ")", simplicial_complex_of(cycle_complex(n)));
    for (int n = 1; n <= 5; ++n)
        check_exact("simplex_boundary(" + std::to_string(n) + ")", simplicial_complex_of(simplex_boundary(n)));
    for (int k = 0; k <= 4; ++k)
        check_exact("lens(5,1," + std::to_string(k) + ")", lens_complex(5, 1, k));

    double worst = 0.0;
    std::size_t bundles = 0;
    for (const auto& b : duality_bundles()) {
        worst = std::max(worst, square_zero_residual(b.bundle));
        worst = std::max(worst, square_zero_residual(t_dualize(b.bundle)));
        ++bundles;
    }
    if (worst > 1e-12)
        c.passed = false;
    const double elapsed = seconds_since(start);
    if (elapsed >= 5.0)
        c.passed = false;
    c.detail = std::to_string(exact) + " cochain builders exactly square-zero; worst bundle residual " + sci(worst) +
               " over " + std::to_string(bundles) + " bundles and their duals (bound 1e-12)";
    if (!first_failure.empty())
        c.detail += "; first nonzero square: " + first_failure;
    if (elapsed >= 5.0)
        c.detail += "; runtime bound of 5 s exceeded";
    return c;
}

CriterionResult hodge_correctness() {
    CriterionResult c{2, "Hodge kernel dims equal cohomology dims", true, ""};
    int matched = 0;
    for (const auto& m : hodge_models()) {
        const auto oracle = cohomology_dimensions(m.complex);
        const auto kernels = reidemeister_torsion(m.complex).kernel_dims();
        if (oracle == kernels) {
            ++matched;
        } else if (c.passed) {
            c.passed = false;
            c.detail = "mismatch on " + m.name + "; ";
        }
    }
    c.detail += std::to_string(matched) + "/" + std::to_string(hodge_models().size()) + " models match exactly";
    return c;
}

CriterionResult circle_torsion() {
    CriterionResult c{3, "circle torsion equals n", true, ""};
    double worst = 0.0;
    for (int n = 3; n <= 8; ++n) {
        const double tau = reidemeister_torsion(simplicial_complex_of(cycle_complex(n))).scalar();
        worst = std::max(worst, relative_error(tau, n));
    }
    c.passed = worst <= 1e-9;
    c.detail = "cycle(3..8): worst relative error " + sci(worst) + " (bound 1e-9)";
    return c;
}

CriterionResult lens_space() {
    CriterionResult c{4, "lens space torsion and character distinction", true, ""};
    const double expected = 4.0 * std::pow(std::sin(std::numbers::pi / 5.0), 2);
    std::vector<double> tau;
    for (int k = 1; k <= 4; ++k)
        tau.push_back(reidemeister_torsion(lens_complex(5, 1, k)).scalar());
    const double err = relative_error(tau[0], expected);
    const bool value_ok = err <= 1e-9;

    std::vector<std::string> collisions;
    for (int i = 1; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (relative_error(tau[static_cast<std::size_t>(i)], tau[static_cast<std::size_t>(j)]) <= 1e-9)
                collisions.push_back("k=" + std::to_string(i + 1) + ",k=" + std::to_string(j + 1));
    c.passed = value_ok && collisions.empty();

    std::ostringstream d;
    d << "k=1: " << num(tau[0]) << " vs 4 sin^2(pi/5) = " << num(expected) << ", rel err " << sci(err)
      << "; k=2,3,4: " << num(tau[1]) << ", " << num(tau[2]) << ", " << num(tau[3]);
    if (collisions.empty()) {
        d << "; pairwise distinct";
    } else {
        d << "; coincide at";
        for (const auto& s : collisions)
            d << " (" << s << ")";
        d << ": conjugate characters k and p-k give equal |w-1|^2";
    }
    c.detail = d.str();
    return c;
}

CriterionResult twisted_consistency() {
    CriterionResult c{5, "twisted torsion at zero flux equals Reidemeister torsion", true, ""};
    double worst = 0.0;
    const std::vector<SimplicialComplex> models{cycle_complex(3), simplex_boundary(3), simplex_boundary(4)};
    for (const auto& k : models) {
        const GradedCochainComplex cx = simplicial_complex_of(k);
        const double graded = reidemeister_torsion(cx).scalar();
        const double twisted = twisted_torsion(twisted_differential(k, cx, {})).scalar();
        worst = std::max(worst, relative_error(twisted, graded));
    }
    c.passed = worst <= 1e-10;
    c.detail = "cycle(3), simplex_boundary(3), simplex_boundary(4): worst relative error " + sci(worst) +
               " (bound 1e-10)";
    return c;
}

CriterionResult top_flux_scaling() {
    CriterionResult c{6, "top-degree flux scales torsion by |c|", true, ""};
    const SimplicialComplex k = orient(simplex_boundary(4));
    const GradedCochainComplex cx = simplicial_complex_of(k);
    const int top = k.dimension();
    Cochain h{top, Vector(k.count(top))};
    for (Index i = 0; i < h.coefficients.size(); ++i)
        h.coefficients(i) = static_cast<double>(i + 1);
    const double base_pairing = pair_with_fundamental_class(k, h);
    const double base_log = twisted_torsion(twisted_differential(k, cx, {h})).log_scalar;

    double worst = 0.0;
    bool acyclic = true;
    bool pairing_exact = base_pairing != 0.0;
    for (double s : {2.0, -2.0, 0.5, -0.5, 3.0}) {
        const Cochain hs{top, h.coefficients * s};
        const TorsionElement t = twisted_torsion(twisted_differential(k, cx, {hs}));
        worst = std::max(worst, relative_error(std::exp(t.log_scalar - base_log), std::abs(s)));
        acyclic = acyclic && t.acyclic();
        pairing_exact = pairing_exact && pair_with_fundamental_class(k, hs) == s * base_pairing;
    }
    c.passed = worst <= 1e-9 && acyclic && pairing_exact;
    c.detail = "simplex_boundary(4), <h,[K]> = " + num(base_pairing) + ": worst ratio error " + sci(worst) +
               " (bound 1e-9); twisted cohomology " + (acyclic ? "vanishes" : "does not vanish") + "; pairing " +
               (pairing_exact ? "scales exactly" : "does not scale exactly");
    return c;
}

CriterionResult duality_inversion(const std::vector<NamedBundle>& bundles) {
    const auto start = Clock::now();
    CriterionResult c{7, "T-duality inverts the torsion", true, ""};
    double worst = 0.0;
    std::string worst_name;
    for (const auto& b : bundles) {
        const double sum = invariant_twisted_torsion(b.bundle).log_scalar +
                           invariant_twisted_torsion(t_dualize(b.bundle)).log_scalar;
        if (std::abs(sum) >= worst) {
            worst = std::abs(sum);
            worst_name = b.name;
        }
    }
    const BundleData hand = hopf_bundle(1.0, 2.0, 1.0);
    const double tau = invariant_twisted_torsion(hand).scalar();
    const double dual = invariant_twisted_torsion(t_dualize(hand)).scalar();
    const double hand_err = std::max(relative_error(tau, 2.0), relative_error(dual, 0.5));
    const double elapsed = seconds_since(start);
    c.passed = worst <= 1e-8 && hand_err <= 1e-10 && elapsed < 10.0;
    c.detail = std::to_string(bundles.size()) + " bundles: worst |log tau + log tau_dual| " + sci(worst) + " at " +
               worst_name + " (bound 1e-8); hopf(1,2,1) gives " + num(tau) + " and dual " + num(dual);
    if (elapsed >= 10.0)
        c.detail += "; runtime bound of 10 s exceeded";
    return c;
}

CriterionResult duality_contracts(const std::vector<NamedBundle>& bundles, std::vector<DualityReport>& reports) {
    CriterionResult c{8, "T-map isometry, intertwining, inverse and spectral transport", true, ""};
    double iso = 0.0, inter = 0.0, inv = 0.0, spec = 0.0;
    for (const auto& b : bundles) {
        reports.push_back(verify_t_duality(b.bundle));
        const auto& r = reports.back();
        iso = std::max(iso, r.isometry_residual);
        inter = std::max(inter, r.intertwining_residual);
        inv = std::max(inv, r.inverse_residual);
        spec = std::max(spec, r.spectral_transport_residual);
    }
    c.passed = iso <= 1e-12 && inter <= 1e-12 && inv <= 1e-12 && spec <= 1e-10;
    c.detail = "isometry " + sci(iso) + ", intertwining " + sci(inter) + ", S T - id " + sci(inv) +
               " (bounds 1e-12); spectral transport " + sci(spec) + " (bound 1e-10)";
    return c;
}

CriterionResult involution(const std::vector<NamedBundle>& bundles, const std::vector<DualityReport>& reports) {
    CriterionResult c{9, "duality is an involution and swaps cohomology parities", true, ""};
    int involutive = 0, swapped = 0;
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        if (t_dualize(t_dualize(bundles[i].bundle)) == bundles[i].bundle)
            ++involutive;
        const auto& d = reports[i].cohomology_dims;
        if (d[0] == d[3] && d[1] == d[2])
            ++swapped;
    }
    const auto n = static_cast<int>(bundles.size());
    c.passed = involutive == n && swapped == n;
    c.detail = std::to_string(involutive) + "/" + std::to_string(n) + " exact involutions; " +
               std::to_string(swapped) + "/" + std::to_string(n) + " parity swaps of twisted cohomology";
    return c;
}

Report suite_report(SuiteSummary s) {
    Report r;
    r.command = "suite";
    r.model = "builtin";
    r.input_digest = content_digest(nlohmann::json("suite"));
    r.convention = std::string(kGradedConvention) + "+" + kParityConvention;
    r.tolerance = SpectralOptions{}.relative_tol;
    r.result = std::move(s);
    return r;
}

CriterionResult determinism(Clock::time_point suite_start, const SuiteSummary& first) {
    CriterionResult c{10, "determinism and report round-trip", true, ""};
    const std::string a = emit(suite_report(first), Format::Json);
    const std::string b = emit(suite_report(run_core_criteria()), Format::Json);
    const bool identical_json = a == b;

    std::vector<Report> reports{suite_report(first)};
    RunOptions drift;
    drift.steps = 4;
    RunOptions top_flux;
    top_flux.flux = "top(2)";
    reports.push_back(run("reidemeister", "cycle(3)"));
    reports.push_back(run("reidemeister", "lens(5,1,1)"));
    reports.push_back(run("twisted", "simplex_boundary(4)", top_flux));
    reports.push_back(run("bundle-torsion", "hopf(1,2,1)"));
    reports.push_back(run("t-dual", "random(7)"));
    reports.push_back(run("verify-duality", "hopf(1,2,1)"));
    reports.push_back(run("deform", "hopf(1,2,1)", drift));
    Report warned = run("reidemeister", "cycle(4)");
    warned.warnings.push_back("SpectralGapWarning: synthetic");
    reports.push_back(warned);

    int round_trips = 0;
    for (const auto& r : reports)
        if (parse_report(emit(r, Format::Json)) == r && emit(parse_report(emit(r, Format::Json)), Format::Json) ==
                                                             emit(r, Format::Json))
            ++round_trips;

    const double elapsed = seconds_since(suite_start);
    c.passed = identical_json && round_trips == static_cast<int>(reports.size()) && elapsed < 60.0;
    c.detail = std::string("repeated battery json ") + (identical_json ? "byte-identical" : "differs") + "; " +
               std::to_string(round_trips) + "/" + std::to_string(reports.size()) + " reports round-trip";
    if (elapsed >= 60.0)
        c.detail += "; runtime bound of 60 s exceeded";
    return c;
}

}  // namespace

SuiteSummary run_core_criteria() {
    SuiteSummary s;
    auto guarded = [&](int id, const std::string& name, const std::function<CriterionResult()>& fn) {
        try {
            s.criteria.push_back(fn());
        } catch (const std::exception& e) {
            s.criteria.push_back({id, name, false, std::string("raised ") + e.what()});
        }
    };
    guarded(1, "structural exactness", structural_exactness);
    guarded(2, "Hodge kernel dims equal cohomology dims", hodge_correctness);
    guarded(3, "circle torsion equals n", circle_torsion);
    guarded(4, "lens space torsion and character distinction", lens_space);
    guarded(5, "twisted torsion at zero flux equals Reidemeister torsion", twisted_consistency);
    guarded(6, "top-degree flux scales torsion by |c|", top_flux_scaling);

    std::vector<NamedBundle> bundles;
    std::vector<DualityReport> reports;
    try {
        bundles = duality_bundles();
    } catch (const std::exception& e) {
        for (int id : {7, 8, 9})
            s.criteria.push_back({id, "duality bundles", false, std::string("raised ") + e.what()});
        return s;
    }
    guarded(7, "T-duality inverts the torsion", [&] { return duality_inversion(bundles); });
    guarded(8, "T-map isometry, intertwining, inverse and spectral transport",
            [&] { return duality_contracts(bundles, reports); });
    if (reports.size() == bundles.size())
        guarded(9, "duality is an involution and swaps cohomology parities",
                [&] { return involution(bundles, reports); });
    else
        s.criteria.push_back({9, "duality is an involution and swaps cohomology parities", false,
                              "skipped: duality reports unavailable"});
    return s;
}

SuiteSummary run_acceptance_suite() {
    const auto start = Clock::now();
    SuiteSummary s = run_core_criteria();
    try {
        s.criteria.push_back(determinism(start, s));
    } catch (const std::exception& e) {
        s.criteria.push_back({10, "determinism and report round-trip", false, std::string("raised ") + e.what()});
    }
    return s;
}

}  // namespace torsion
