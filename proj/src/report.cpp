#include "torsion/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "torsion/model_io.hpp"

namespace torsion {

using nlohmann::json;

TorsionSummary summarize(const TorsionElement& t) {
    return {t.log_scalar, t.scalar(), t.kernel_dims()};
}

DualitySummary summarize(const DualityReport& d) {
    DualitySummary s;
    s.torsion = summarize(d.torsion);
    s.dual_torsion = summarize(d.dual_torsion);
    s.product = std::exp(d.product_log);
    s.product_log = d.product_log;
    s.cohomology_dims = d.cohomology_dims;
    s.intertwining_residual = d.intertwining_residual;
    s.isometry_residual = d.isometry_residual;
    s.inverse_residual = d.inverse_residual;
    s.spectral_transport_residual = d.spectral_transport_residual;
    s.harmonic_transport_residual = d.harmonic_transport_residual;
    return s;
}

DriftSummary summarize(const DriftReport& d) { return {d.path, d.samples, d.max_relative_drift}; }

bool SuiteSummary::all_passed() const {
    for (const auto& c : criteria)
        if (!c.passed)
            return false;
    return !criteria.empty();
}

// ---------------------------------------------------------------------------
// json

namespace {

// json has no inf/nan, so those travel as strings.
json number(double x) {
    if (std::isfinite(x))
        return x;
    if (std::isnan(x))
        return "nan";
    return x > 0 ? "inf" : "-inf";
}

double number(const json& j) {
    if (j.is_number())
        return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorKind::ParseError, "expected a number, got \"" + s + "\"");
}

json torsion_json(const TorsionSummary& t) {
    return {{"log_scalar", number(t.log_scalar)}, {"scalar", number(t.scalar)}, {"kernel_dims", t.kernel_dims}};
}

TorsionSummary torsion_from(const json& j) {
    return {number(j.at("log_scalar")), number(j.at("scalar")), j.at("kernel_dims").get<std::vector<Index>>()};
}

struct ResultToJson {
    json operator()(const TorsionSummary& t) const {
        json j = torsion_json(t);
        j["kind"] = "torsion";
        return j;
    }
    json operator()(const DualitySummary& d) const {
        return {{"kind", "duality"},
                {"torsion", torsion_json(d.torsion)},
                {"dual_torsion", torsion_json(d.dual_torsion)},
                {"product", number(d.product)},
                {"product_log", number(d.product_log)},
                {"cohomology_dims", d.cohomology_dims},
                {"intertwining_residual", number(d.intertwining_residual)},
                {"isometry_residual", number(d.isometry_residual)},
                {"inverse_residual", number(d.inverse_residual)},
                {"spectral_transport_residual", number(d.spectral_transport_residual)},
                {"harmonic_transport_residual", number(d.harmonic_transport_residual)}};
    }
    json operator()(const DriftSummary& d) const {
        json samples = json::array();
        for (const auto& s : d.samples)
            samples.push_back({{"parameter", number(s.parameter)}, {"log_scalar", number(s.log_scalar)}});
        return {{"kind", "drift"},
                {"path", d.path},
                {"samples", samples},
                {"max_relative_drift", number(d.max_relative_drift)}};
    }
    json operator()(const DualBundleSummary& d) const {
        return {{"kind", "dual_bundle"}, {"dual_model", d.dual_model}, {"dual_torsion", torsion_json(d.dual_torsion)}};
    }
    json operator()(const SuiteSummary& s) const {
        json criteria = json::array();
        for (const auto& c : s.criteria)
            criteria.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        return {{"kind", "suite"}, {"criteria", criteria}, {"all_passed", s.all_passed()}};
    }
};

ReportResult result_from(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "torsion")
        return torsion_from(j);
    if (kind == "duality") {
        DualitySummary d;
        d.torsion = torsion_from(j.at("torsion"));
        d.dual_torsion = torsion_from(j.at("dual_torsion"));
        d.product = number(j.at("product"));
        d.product_log = number(j.at("product_log"));
        d.cohomology_dims = j.at("cohomology_dims").get<std::array<Index, 4>>();
        d.intertwining_residual = number(j.at("intertwining_residual"));
        d.isometry_residual = number(j.at("isometry_residual"));
        d.inverse_residual = number(j.at("inverse_residual"));
        d.spectral_transport_residual = number(j.at("spectral_transport_residual"));
        d.harmonic_transport_residual = number(j.at("harmonic_transport_residual"));
        return d;
    }
    if (kind == "drift") {
        DriftSummary d;
        d.path = j.at("path").get<std::string>();
        for (const auto& s : j.at("samples"))
            d.samples.push_back({number(s.at("parameter")), number(s.at("log_scalar"))});
        d.max_relative_drift = number(j.at("max_relative_drift"));
        return d;
    }
    if (kind == "dual_bundle")
        return DualBundleSummary{j.at("dual_model"), torsion_from(j.at("dual_torsion"))};
    if (kind == "suite") {
        SuiteSummary s;
        for (const auto& c : j.at("criteria"))
            s.criteria.push_back({c.at("id").get<int>(), c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                                  c.at("detail").get<std::string>()});
        return s;
    }
    throw Error(ErrorKind::ParseError, "unknown result kind \"" + kind + "\"");
}

}  // namespace

json report_to_json(const Report& r) {
    return {{"schema", "report.v1"},
            {"command", r.command},
            {"model", r.model},
            {"input_digest", r.input_digest},
            {"options", r.options},
            {"convention", r.convention},
            {"tolerance", number(r.tolerance)},
            {"result", std::visit(ResultToJson{}, r.result)},
            {"warnings", r.warnings}};
}

Report report_from_json(const json& j) {
    if (j.value("schema", "") != "report.v1")
        throw Error(ErrorKind::ParseError, "not a report.v1 document");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.input_digest = j.at("input_digest").get<std::string>();
    r.options = j.at("options").get<std::map<std::string, std::string>>();
    r.convention = j.at("convention").get<std::string>();
    r.tolerance = number(j.at("tolerance"));
    r.result = result_from(j.at("result"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

Report parse_report(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, parse_error_location(text, e.byte) + ": " + e.what());
    }
    try {
        return report_from_json(j);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

// ---------------------------------------------------------------------------
// text

namespace {

struct Style {
    bool on;
    std::string bold(const std::string& s) const { return on ? "\x1b[1m" + s + "\x1b[0m" : s; }
    std::string green(const std::string& s) const { return on ? "\x1b[32m" + s + "\x1b[0m" : s; }
    std::string red(const std::string& s) const { return on ? "\x1b[31m" + s + "\x1b[0m" : s; }
    std::string yellow(const std::string& s) const { return on ? "\x1b[33m" + s + "\x1b[0m" : s; }
};

std::string fmt(double x) {
    std::ostringstream out;
    out << std::setprecision(12) << x;
    return out.str();
}

std::string dims(const std::vector<Index>& d) {
    std::ostringstream out;
    for (std::size_t i = 0; i < d.size(); ++i)
        out << (i ? " " : "") << d[i];
    return out.str();
}

void row(std::ostream& out, const std::string& key, const std::string& value) {
    out << "  " << std::left << std::setw(28) << key << value << '\n';
}

struct ResultToText {
    std::ostream& out;
    const Style& style;

    void torsion(const TorsionSummary& t, const std::string& prefix) const {
        row(out, prefix + "tau", fmt(t.scalar));
        row(out, prefix + "log tau", fmt(t.log_scalar));
        row(out, prefix + "kernel dims", dims(t.kernel_dims));
    }
    void operator()(const TorsionSummary& t) const { torsion(t, ""); }
    void operator()(const DualitySummary& d) const {
        torsion(d.torsion, "");
        torsion(d.dual_torsion, "dual ");
        row(out, "tau * tau_dual", fmt(d.product));
        row(out, "product log", fmt(d.product_log));
        row(out, "cohomology (ev od | ev od)", std::to_string(d.cohomology_dims[0]) + " " +
                                                   std::to_string(d.cohomology_dims[1]) + " | " +
                                                   std::to_string(d.cohomology_dims[2]) + " " +
                                                   std::to_string(d.cohomology_dims[3]));
        row(out, "intertwining residual", fmt(d.intertwining_residual));
        row(out, "isometry residual", fmt(d.isometry_residual));
        row(out, "inverse residual", fmt(d.inverse_residual));
        row(out, "spectral transport", fmt(d.spectral_transport_residual));
        row(out, "harmonic transport", fmt(d.harmonic_transport_residual));
    }
    void operator()(const DriftSummary& d) const {
        row(out, "path", d.path);
        row(out, "max relative drift", fmt(d.max_relative_drift));
        out << "  " << std::left << std::setw(14) << "u" << "log tau\n";
        for (const auto& s : d.samples)
            out << "  " << std::left << std::setw(14) << fmt(s.parameter) << fmt(s.log_scalar) << '\n';
    }
    void operator()(const DualBundleSummary& d) const {
        torsion(d.dual_torsion, "dual ");
        out << "  dual model\n" << d.dual_model.dump(2) << '\n';
    }
    void operator()(const SuiteSummary& s) const {
        for (const auto& c : s.criteria) {
            out << "  " << (c.passed ? style.green("PASS") : style.red("FAIL")) << "  " << std::setw(2)
                << std::right << c.id << "  " << c.name << '\n';
            out << "              " << c.detail << '\n';
        }
        out << "  " << (s.all_passed() ? style.green("all criteria passed") : style.red("some criteria failed"))
            << '\n';
    }
};

}  // namespace

std::string emit(const Report& r, Format format, bool color) {
    if (format == Format::Json)
        return report_to_json(r).dump(2) + "\n";

    const Style style{color};
    std::ostringstream out;
    out << style.bold("torsion " + r.command) << "  " << r.model << '\n';
    row(out, "digest", r.input_digest);
    row(out, "convention", r.convention);
    row(out, "tolerance", fmt(r.tolerance));
    if (r.elapsed > 0.0)
        row(out, "elapsed (s)", fmt(r.elapsed));
    for (const auto& [k, v] : r.options)
        row(out, "option " + k, v);
    std::visit(ResultToText{out, style}, r.result);
    if (!r.warnings.empty()) {
        out << style.yellow("warnings") << '\n';
        for (const auto& w : r.warnings)
            out << "  - " << w << '\n';
    }
    return out.str();
}

}  // namespace torsion
