#include "torsion/model_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "torsion/builders.hpp"

namespace torsion {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Matrices and cochains

namespace {

json scalar_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex scalar_from_json(const json& j) {
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorKind::ValidationError, "expected a number or [re, im], got " + j.dump());
}

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorKind::ValidationError, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(scalar_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array())
        throw Error(ErrorKind::ValidationError, "matrix must be a list of rows");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = rows ? static_cast<Index>(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw Error(ErrorKind::ValidationError, "matrix rows have unequal length");
        for (Index k = 0; k < cols; ++k)
            m(i, k) = scalar_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

json cochain_to_json(const Cochain& c) {
    json coeffs = json::array();
    for (Index i = 0; i < c.coefficients.size(); ++i)
        coeffs.push_back(scalar_to_json(c.coefficients(i)));
    return {{"degree", c.degree}, {"coefficients", coeffs}};
}

Cochain cochain_from_json(const json& j) {
    Cochain c;
    c.degree = require(j, "degree").get<int>();
    const json& coeffs = require(j, "coefficients");
    c.coefficients = Vector(static_cast<Index>(coeffs.size()));
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        c.coefficients(static_cast<Index>(i)) = scalar_from_json(coeffs[i]);
    return c;
}

// ---------------------------------------------------------------------------
// complex.v1

namespace {

std::vector<Simplex> maximal_simplices(const SimplicialComplex& k) {
    std::set<Simplex> covered;
    std::vector<Simplex> out;
    for (int p = k.dimension(); p >= 0; --p) {
        for (const auto& s : k.simplices(p)) {
            if (!covered.count(s))
                out.push_back(s);
            for (std::size_t i = 0; i < s.size() && s.size() > 1; ++i) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
                covered.insert(f);
            }
        }
    }
    // Highest dimension first; within a dimension lexicographic.
    return out;
}

bool all_identity(const GradedCochainComplex& c) {
    for (int p = 0; p < c.degree_count(); ++p)
        if (!identical(c.gram(p), Matrix::Identity(c.dim(p), c.dim(p))))
            return false;
    return true;
}

json cochain_complex_to_json(const GradedCochainComplex& c, bool unit_products) {
    json j = {{"kind", "cochain"}, {"dims", c.dims()}};
    json cob = json::array();
    for (const auto& d : c.coboundaries())
        cob.push_back(matrix_to_json(d));
    j["coboundary"] = cob;
    if (!all_identity(c)) {
        json grams = json::array();
        for (const auto& g : c.grams())
            grams.push_back(matrix_to_json(g));
        j["gram"] = grams;
    }
    if (unit_products)
        j["products"] = "unit";
    return j;
}

Matrix shaped(Matrix m, Index rows, Index cols) {
    if (m.size() == 0)
        return Matrix::Zero(rows, cols);
    return m;
}

ComplexModel complex_model_from_json(const json& j) {
    ComplexModel model;
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "simplicial") {
        std::vector<Simplex> tops = require(j, "top_simplices").get<std::vector<Simplex>>();
        const bool mixed = j.value("allow_mixed_dimensions", false);
        SimplicialComplex k = build_simplicial(std::move(tops), mixed);
        if (j.contains("orientation")) {
            const json& o = j.at("orientation");
            k = o == "auto" ? orient(k) : k.with_orientation(o.get<std::vector<int>>());
        }
        if (j.contains("local_system")) {
            const json& ls = j.at("local_system");
            LocalSystem local = LocalSystem::trivial(require(ls, "rank").get<int>());
            for (const auto& e : ls.value("edges", json::array())) {
                const auto edge = require(e, "edge").get<std::vector<int>>();
                if (edge.size() != 2)
                    throw Error(ErrorKind::ValidationError, "local system edges are vertex pairs");
                local.edge_holonomy[{std::min(edge[0], edge[1]), std::max(edge[0], edge[1])}] =
                    edge[0] < edge[1] ? matrix_from_json(require(e, "matrix"))
                                      : Matrix(matrix_from_json(require(e, "matrix")).adjoint());
            }
            model.local_system = std::move(local);
        }
        model.complex = coboundary_matrices(k, model.local_system);
        model.simplicial = std::move(k);
    } else if (kind == "cochain") {
        const auto dims = require(j, "dims").get<std::vector<Index>>();
        std::vector<Matrix> cob;
        if (j.contains("coboundary")) {
            std::size_t p = 0;
            for (const auto& m : j.at("coboundary")) {
                const Index rows = p + 1 < dims.size() ? dims[p + 1] : 0;
                const Index cols = p < dims.size() ? dims[p] : 0;
                cob.push_back(shaped(matrix_from_json(m), rows, cols));
                ++p;
            }
        }
        std::vector<Matrix> grams;
        if (j.contains("gram")) {
            std::size_t p = 0;
            for (const auto& g : j.at("gram")) {
                const Index n = p < dims.size() ? dims[p] : 0;
                grams.push_back(shaped(matrix_from_json(g), n, n));
                ++p;
            }
        }
        model.complex = GradedCochainComplex(dims, std::move(cob), std::move(grams));
        if (j.contains("products")) {
            if (j.at("products") != "unit")
                throw Error(ErrorKind::ValidationError, "only \"products\": \"unit\" is supported");
            if (model.complex.dim(0) != 1)
                throw Error(ErrorKind::ValidationError, "unit products need a one-dimensional degree 0");
            model.unit_products = true;
        }
    } else {
        throw Error(ErrorKind::ValidationError, "unknown complex kind \"" + kind + "\"");
    }
    return model;
}

json operator_to_json(const GradedOperator& op) {
    json blocks = json::array();
    for (const auto& b : op.blocks)
        blocks.push_back(matrix_to_json(b));
    return blocks;
}

GradedOperator operator_from_json(const json& j, int shift, const GradedCochainComplex& base) {
    GradedOperator op{shift, {}};
    if (!j.is_array())
        throw Error(ErrorKind::ValidationError, "operator must be a list of per-degree matrices");
    int p = 0;
    for (const auto& m : j) {
        op.blocks.push_back(shaped(matrix_from_json(m), base.dim(p + shift), base.dim(p)));
        ++p;
    }
    return op;
}

}  // namespace

json complex_to_json(const ComplexModel& model) {
    if (!model.simplicial)
        return cochain_complex_to_json(model.complex, model.unit_products);
    const SimplicialComplex& k = *model.simplicial;
    json j = {{"kind", "simplicial"}, {"top_simplices", maximal_simplices(k)}};
    bool pure = true;
    for (const auto& s : maximal_simplices(k))
        pure = pure && static_cast<int>(s.size()) - 1 == k.dimension();
    if (!pure)
        j["allow_mixed_dimensions"] = true;
    if (k.orientation())
        j["orientation"] = *k.orientation();
    if (model.local_system) {
        json edges = json::array();
        for (const auto& [edge, u] : model.local_system->edge_holonomy)
            edges.push_back({{"edge", {edge.first, edge.second}}, {"matrix", matrix_to_json(u)}});
        j["local_system"] = {{"rank", model.local_system->rank}, {"edges", edges}};
    }
    return j;
}

json bundle_to_json(const BundleData& b) {
    json j = {{"base", cochain_complex_to_json(b.base, false)},
              {"F_op", operator_to_json(b.curvature)},
              {"H2_op", operator_to_json(b.h2)},
              {"H3_op", operator_to_json(b.h3)}};
    if (b.radius.inverted)
        j["inverse_radius"] = b.radius.value;
    else
        j["radius"] = b.radius.value;
    return j;
}

BundleData bundle_from_json(const json& j) {
    const ComplexModel base = complex_model_from_json(require(j, "base"));
    if (base.local_system)
        throw Error(ErrorKind::ValidationError, "bundle bases with local systems are not supported");
    BundleData b;
    b.base = base.complex;
    b.curvature = operator_from_json(j.value("F_op", json::array()), 2, b.base);
    b.h2 = operator_from_json(j.value("H2_op", json::array()), 2, b.base);
    b.h3 = operator_from_json(j.value("H3_op", json::array()), 3, b.base);
    if (j.contains("inverse_radius"))
        b.radius = FiberRadius{j.at("inverse_radius").get<double>(), true};
    else
        b.radius = FiberRadius{require(j, "radius").get<double>(), false};
    validate(b);
    return b;
}

json to_json(const ModelFile& model) {
    json j;
    if (const auto* c = std::get_if<ComplexModel>(&model.payload))
        j = complex_to_json(*c);
    else
        j = bundle_to_json(std::get<BundleData>(model.payload));
    j["schema"] = model.schema;
    if (!model.metadata.name.empty())
        j["name"] = model.metadata.name;
    if (!model.metadata.description.empty())
        j["description"] = model.metadata.description;
    if (model.metadata.seed)
        j["seed"] = *model.metadata.seed;
    return j;
}

// ---------------------------------------------------------------------------
// Loading

std::string parse_error_location(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

namespace {

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, parse_error_location(text, e.byte) + ": " + e.what());
    }
}

template <typename Fn>
auto validated(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ValidationError || e.kind() == ErrorKind::ParseError)
            throw;
        throw Error(ErrorKind::ValidationError, e.what());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ValidationError, e.what());
    }
}

}  // namespace

ModelFile parse_model_json(std::string_view text) {
    const json j = parse_json_text(text);
    return validated([&] {
        ModelFile model;
        model.schema = require(j, "schema").get<std::string>();
        if (model.schema == "complex.v1")
            model.payload = complex_model_from_json(j);
        else if (model.schema == "bundle.v1")
            model.payload = bundle_from_json(j);
        else
            throw Error(ErrorKind::ValidationError, "unrecognised schema \"" + model.schema + "\"");
        model.metadata.name = j.value("name", "");
        model.metadata.description = j.value("description", "");
        if (j.contains("seed"))
            model.metadata.seed = j.at("seed").get<std::uint64_t>();
        return model;
    });
}

namespace {

std::vector<double> parse_args(const std::string& text) {
    std::vector<double> args;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) {
            if (!args.empty() || in.good())
                throw Error(ErrorKind::ParseError, "empty builder argument");
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "builder argument \"" + item + "\" is not a number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw Error(ErrorKind::ParseError, "builder argument \"" + item + "\" is not a number");
        args.push_back(v);
    }
    return args;
}

int as_int(double v, const char* what) {
    if (std::nearbyint(v) != v)
        throw Error(ErrorKind::ValidationError, std::string(what) + " must be an integer");
    return static_cast<int>(v);
}

void arity(const std::string& name, const std::vector<double>& args, std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
        throw Error(ErrorKind::ParseError, name + " takes " + std::to_string(lo) +
                                               (lo == hi ? "" : "-" + std::to_string(hi)) + " arguments");
}

ModelFile complex_file(ComplexModel model, std::string name, std::string description) {
    return ModelFile{"complex.v1", std::move(model), {std::move(name), std::move(description), std::nullopt}};
}

}  // namespace

ModelFile build_model(std::string_view expression) {
    static const std::regex pattern(R"(^\s*([a-z_]+)\s*\((.*)\)\s*$)");
    std::smatch m;
    const std::string text(expression);
    if (!std::regex_match(text, m, pattern))
        throw Error(ErrorKind::UnknownBuilder, "\"" + text + "\" is neither a file nor a builder expression");
    const std::string name = m[1];
    const auto args = parse_args(m[2]);

    if (name == "cycle") {
        arity(name, args, 1, 1);
        const int n = as_int(args[0], "n");
        ComplexModel c{cycle_complex(n), std::nullopt, {}, false};
        c.simplicial = orient(*c.simplicial);
        c.complex = coboundary_matrices(*c.simplicial);
        return complex_file(std::move(c), text, "triangulated circle with " + std::to_string(n) + " vertices");
    }
    if (name == "simplex_boundary") {
        arity(name, args, 1, 1);
        const int n = as_int(args[0], "n");
        ComplexModel c{orient(simplex_boundary(n)), std::nullopt, {}, false};
        c.complex = coboundary_matrices(*c.simplicial);
        return complex_file(std::move(c), text, "boundary of the " + std::to_string(n) + "-simplex");
    }
    if (name == "lens") {
        arity(name, args, 3, 3);
        ComplexModel c{std::nullopt, std::nullopt,
                       lens_complex(as_int(args[0], "p"), as_int(args[1], "q"), as_int(args[2], "k")), false};
        return complex_file(std::move(c), text, "cellular lens space with a U(1) character");
    }
    if (name == "minimal_sphere") {
        arity(name, args, 1, 1);
        ComplexModel c{std::nullopt, std::nullopt, minimal_sphere(as_int(args[0], "n")), true};
        return complex_file(std::move(c), text, "minimal model of a sphere");
    }
    if (name == "hopf") {
        arity(name, args, 3, 3);
        return ModelFile{"bundle.v1", hopf_bundle(args[0], args[1], args[2]),
                         {text, "circle bundle over the minimal S^2 model", std::nullopt}};
    }
    if (name == "random") {
        arity(name, args, 1, 4);
        if (args[0] < 0)
            throw Error(ErrorKind::ValidationError, "seed must be nonnegative");
        const auto seed = static_cast<std::uint64_t>(as_int(args[0], "seed"));
        RandomBundleShape shape;
        if (args.size() > 1) shape.even_generators = as_int(args[1], "b");
        if (args.size() > 2) shape.odd_generators = as_int(args[2], "a");
        if (args.size() > 3) shape.acyclic_pairs = as_int(args[3], "c");
        return ModelFile{"bundle.v1", random_bundle(seed, shape),
                         {text, "seeded random formal bundle", seed}};
    }
    throw Error(ErrorKind::UnknownBuilder, "no builder named \"" + name + "\"");
}

ModelFile load_model(std::string_view path_or_expression) {
    const std::filesystem::path path{std::string(path_or_expression)};
    std::error_code ec;
    if (std::filesystem::is_regular_file(path, ec)) {
        std::ifstream in(path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        ModelFile model = parse_model_json(buffer.str());
        if (model.metadata.name.empty())
            model.metadata.name = path.filename().string();
        return model;
    }
    if (path_or_expression.find('(') == std::string_view::npos)
        throw Error(ErrorKind::UnknownBuilder,
                    "\"" + std::string(path_or_expression) + "\" is neither a file nor a builder expression");
    try {
        return build_model(path_or_expression);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::UnknownBuilder || e.kind() == ErrorKind::ParseError ||
            e.kind() == ErrorKind::ValidationError)
            throw;
        throw Error(ErrorKind::ValidationError, e.what());
    }
}

std::vector<Cochain> parse_flux_json(std::string_view text) {
    const json j = parse_json_text(text);
    return validated([&] {
        std::vector<Cochain> out;
        const json& list = j.is_object() && j.contains("flux") ? j.at("flux") : j;
        if (list.is_array()) {
            for (const auto& c : list)
                out.push_back(cochain_from_json(c));
        } else {
            out.push_back(cochain_from_json(list));
        }
        return out;
    });
}

std::string content_digest(const json& j) {
    const std::string text = j.dump();
    unsigned char hash[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), hash, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    out << "sha256:";
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(hash[i]);
    return out.str();
}

}  // namespace torsion
