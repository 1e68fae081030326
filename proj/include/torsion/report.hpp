#ifndef TORSION_REPORT_HPP
#define TORSION_REPORT_HPP

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "torsion/circle_bundle.hpp"
#include "torsion/torsion_engine.hpp"

namespace torsion {

struct TorsionSummary {
    double log_scalar = 0.0;
    double scalar = 0.0;
    std::vector<Index> kernel_dims;  // per degree, or (even, odd)

    bool operator==(const TorsionSummary&) const = default;
};

TorsionSummary summarize(const TorsionElement& t);

struct DualitySummary {
    TorsionSummary torsion;
    TorsionSummary dual_torsion;
    double product = 0.0;  // tau * tau_dual
    double product_log = 0.0;
    std::array<Index, 4> cohomology_dims{};
    double intertwining_residual = 0.0;
    double isometry_residual = 0.0;
    double inverse_residual = 0.0;
    double spectral_transport_residual = 0.0;
    double harmonic_transport_residual = 0.0;

    bool operator==(const DualitySummary&) const = default;
};

DualitySummary summarize(const DualityReport& d);

struct DriftSummary {
    std::string path;
    std::vector<DeformationSample> samples;
    double max_relative_drift = 0.0;

    bool operator==(const DriftSummary&) const = default;
};

DriftSummary summarize(const DriftReport& d);

/// Output of t-dual: the dual model and its torsion.
struct DualBundleSummary {
    nlohmann::json dual_model;
    TorsionSummary dual_torsion;

    bool operator==(const DualBundleSummary&) const = default;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;

    bool operator==(const CriterionResult&) const = default;
};

struct SuiteSummary {
    std::vector<CriterionResult> criteria;

    bool all_passed() const;
    bool operator==(const SuiteSummary&) const = default;
};

using ReportResult = std::variant<TorsionSummary, DualitySummary, DriftSummary, DualBundleSummary, SuiteSummary>;

struct Report {
    std::string command;
    std::string model;
    std::string input_digest;
    std::map<std::string, std::string> options;
    std::string convention;
    double tolerance = 0.0;
    ReportResult result;
    std::vector<std::string> warnings;
    /// Wall-clock seconds. Text output only; json stays deterministic.
    double elapsed = 0.0;

    bool operator==(const Report& o) const {
        return command == o.command && model == o.model && input_digest == o.input_digest && options == o.options &&
               convention == o.convention && tolerance == o.tolerance && result == o.result && warnings == o.warnings;
    }
};

enum class Format { Json, Text };

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// json: pretty-printed report.v1 with a trailing newline. text: summary for
/// terminals, styled with ANSI escapes when color is set.
std::string emit(const Report& r, Format format, bool color = false);

/// Inverse of emit(r, Format::Json). Throws ParseError.
Report parse_report(std::string_view text);

}  // namespace torsion

#endif
