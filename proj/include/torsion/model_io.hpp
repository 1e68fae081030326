#ifndef TORSION_MODEL_IO_HPP
#define TORSION_MODEL_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "torsion/chain_models.hpp"
#include "torsion/circle_bundle.hpp"

namespace torsion {

/// A Z-graded model: either simplicial (with the complex derived from it) or
/// a directly given cochain complex.
struct ComplexModel {
    std::optional<SimplicialComplex> simplicial;
    std::optional<LocalSystem> local_system;
    GradedCochainComplex complex;
    /// Degree 0 is a one-dimensional unit and all positive-degree products
    /// vanish (minimal sphere models). Enables flux on cochain models.
    bool unit_products = false;
};

struct ModelMetadata {
    std::string name;
    std::string description;
    std::optional<std::uint64_t> seed;
};

struct ModelFile {
    std::string schema;  // "complex.v1" or "bundle.v1"
    std::variant<ComplexModel, BundleData> payload;
    ModelMetadata metadata;

    bool is_bundle() const noexcept { return std::holds_alternative<BundleData>(payload); }
};

/**
 * Loads a model from a file path or a builder expression:
 * cycle(n), simplex_boundary(n), lens(p,q,k), minimal_sphere(n),
 * hopf(f,h2,r), random(seed[,b,a,c]).
 *
 * Throws ParseError (with line and column), UnknownBuilder, or
 * ValidationError naming the violated invariant.
 */
ModelFile load_model(std::string_view path_or_expression);

ModelFile parse_model_json(std::string_view text);
ModelFile build_model(std::string_view expression);

nlohmann::json to_json(const ModelFile& model);
nlohmann::json complex_to_json(const ComplexModel& model);
nlohmann::json bundle_to_json(const BundleData& bundle);
BundleData bundle_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json cochain_to_json(const Cochain& c);
Cochain cochain_from_json(const nlohmann::json& j);

/// A single cochain object, a list of them, or {"flux": [...]}.
std::vector<Cochain> parse_flux_json(std::string_view text);

/// "sha256:<hex>" of the canonical JSON dump.
std::string content_digest(const nlohmann::json& j);

/// Parse error message with 1-based line and column for a byte offset.
std::string parse_error_location(std::string_view text, std::size_t byte);

}  // namespace torsion

#endif
