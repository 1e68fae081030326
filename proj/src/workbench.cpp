#include "torsion/workbench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include "torsion/acceptance.hpp"
#include "torsion/builders.hpp"

namespace torsion {

namespace {

std::string fmt(double x) {
    std::ostringstream out;
    out << std::setprecision(17) << x;
    return out.str();
}

SpectralOptions spectral(const RunOptions& o) {
    SpectralOptions s;
    if (o.tol)
        s.relative_tol = *o.tol;
    return s;
}

const ComplexModel& require_complex(const ModelFile& m, const std::string& command) {
    if (const auto* c = std::get_if<ComplexModel>(&m.payload))
        return *c;
    throw Error(ErrorKind::ValidationError, command + " needs a complex.v1 model");
}

BundleData as_bundle(const ModelFile& m, const RunOptions& o) {
    BundleData b;
    if (const auto* c = std::get_if<ComplexModel>(&m.payload)) {
        if (c->local_system && c->local_system->rank > 1)
            throw Error(ErrorKind::ValidationError, "bundle bases with local systems are not supported");
        b = trivial_bundle(c->complex);
    } else {
        b = std::get<BundleData>(m.payload);
    }
    if (o.radius) {
        b.radius = FiberRadius{*o.radius, false};
        validate(b);
    }
    return b;
}

std::vector<std::string> merged(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Flux for the twisted command: zero, c times a top cochain, or a file.
TwistedComplex twisted_complex(const ComplexModel& c, const std::string& flux) {
    static const std::regex top(R"(^\s*top\s*(\(\s*([-+0-9.eE]+)\s*\))?\s*$)");
    std::smatch m;
    if (flux == "zero")
        return twisted_differential(c.complex, {});

    std::vector<Cochain> cochains;
    if (std::regex_match(flux, m, top)) {
        const double scale = m[2].matched ? std::stod(m[2]) : 1.0;
        if (!c.simplicial && !c.unit_products)
            throw Error(ErrorKind::ValidationError, "top flux needs a simplicial or unit-product model");
        const int degree = c.complex.top_degree();
        Cochain h{degree, Vector::Zero(c.complex.dim(degree))};
        if (h.coefficients.size() == 0)
            throw Error(ErrorKind::ValidationError, "model has no top cells");
        h.coefficients(0) = scale;
        cochains.push_back(std::move(h));
    } else {
        std::ifstream in(flux);
        if (!in)
            throw Error(ErrorKind::ValidationError, "flux \"" + flux + "\" is neither zero, top(c), nor a readable file");
        std::stringstream buffer;
        buffer << in.rdbuf();
        cochains = parse_flux_json(buffer.str());
    }

    if (c.simplicial) {
        if (c.local_system && c.local_system->rank > 1)
            throw Error(ErrorKind::ValidationError, "flux on a local system of rank > 1 is not supported");
        return twisted_differential(*c.simplicial, c.complex, cochains);
    }
    if (!c.unit_products)
        throw Error(ErrorKind::ValidationError, "cochain model has no product structure for a nonzero flux");
    std::vector<GradedOperator> ops;
    for (const auto& h : cochains)
        ops.push_back(unit_multiplication(c.complex, h));
    return twisted_differential(c.complex, ops);
}

DeformationPath deformation(const BundleData& b, const std::string& name) {
    if (name == "constant")
        return constant_path(b);
    if (name == "gram")
        return gram_scaling_path(b, 0, 1.0, 2.0);
    if (name == "flux")
        return flux_path(b, b.h3);
    if (name == "curvature")
        return curvature_path(b, b.curvature);
    throw Error(ErrorKind::ValidationError, "unknown deformation path \"" + name +
                                                "\" (constant, gram, flux, curvature)");
}

}  // namespace

Report run(const std::string& command, const ModelFile& model, const RunOptions& o) {
    const auto start = std::chrono::steady_clock::now();
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw Error(ErrorKind::UnknownCommand, "\"" + command + "\"");

    Report r;
    r.command = command;
    r.model = model.metadata.name;
    r.input_digest = content_digest(to_json(model));
    const SpectralOptions opts = spectral(o);
    r.tolerance = opts.relative_tol;
    if (o.tol)
        r.options["tol"] = fmt(*o.tol);
    if (o.radius)
        r.options["radius"] = fmt(*o.radius);
    if (o.seed)
        r.options["seed"] = std::to_string(*o.seed);

    if (command == "reidemeister") {
        const TorsionElement t = reidemeister_torsion(require_complex(model, command).complex, opts);
        r.convention = t.convention_tag;
        r.result = summarize(t);
        r.warnings = t.warnings;
    } else if (command == "twisted") {
        const std::string flux = o.flux.value_or("zero");
        r.options["flux"] = flux;
        const TorsionElement t = twisted_torsion(twisted_complex(require_complex(model, command), flux), opts);
        r.convention = t.convention_tag;
        r.result = summarize(t);
        r.warnings = t.warnings;
    } else if (command == "bundle-torsion") {
        const TorsionElement t = invariant_twisted_torsion(as_bundle(model, o), opts);
        r.convention = t.convention_tag;
        r.result = summarize(t);
        r.warnings = t.warnings;
    } else if (command == "t-dual") {
        const BundleData dual = t_dualize(as_bundle(model, o));
        const TorsionElement t = invariant_twisted_torsion(dual, opts);
        nlohmann::json dual_model = bundle_to_json(dual);
        dual_model["schema"] = "bundle.v1";
        r.convention = t.convention_tag;
        r.result = DualBundleSummary{std::move(dual_model), summarize(t)};
        r.warnings = t.warnings;
    } else if (command == "verify-duality") {
        const DualityReport d = verify_t_duality(as_bundle(model, o), opts);
        r.convention = d.torsion.convention_tag;
        r.result = summarize(d);
        r.warnings = merged(d.torsion.warnings, d.dual_torsion.warnings);
    } else if (command == "deform") {
        if (o.steps < 1)
            throw Error(ErrorKind::ValidationError, "steps must be positive");
        r.options["steps"] = std::to_string(o.steps);
        r.options["path"] = o.path;
        const DriftReport d = deformation_experiment(deformation(as_bundle(model, o), o.path), o.steps, opts, o.path);
        r.convention = kParityConvention;
        r.result = summarize(d);
    } else {  // suite
        r.options.clear();
        r.model = "builtin";
        r.input_digest = content_digest(nlohmann::json("suite"));
        r.tolerance = SpectralOptions{}.relative_tol;
        r.convention = std::string(kGradedConvention) + "+" + kParityConvention;
        r.result = run_acceptance_suite();
        if (o.tol)
            r.warnings.push_back("--tol is ignored by suite; pinned tolerances apply");
    }
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

Report run(const std::string& command, const std::string& model, const RunOptions& o) {
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw Error(ErrorKind::UnknownCommand, "\"" + command + "\"");
    if (command == "suite")
        return run(command, ModelFile{"complex.v1", ComplexModel{}, {"builtin", "", std::nullopt}}, o);
    std::string spec = model;
    if (spec == "random") {
        if (!o.seed)
            throw Error(ErrorKind::ValidationError, "a bare random model needs --seed");
        spec = "random(" + std::to_string(*o.seed) + ")";
    }
    Report r = run(command, load_model(spec), o);
    if (o.seed && model != "random")
        r.warnings.push_back("--seed ignored: model is not a bare random");
    return r;
}

}  // namespace torsion
