#ifndef TORSION_WORKBENCH_HPP
#define TORSION_WORKBENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torsion/model_io.hpp"
#include "torsion/report.hpp"

namespace torsion {

struct RunOptions {
    /// Relative kernel tolerance factor. Exploratory commands only; suite ignores it.
    std::optional<double> tol;
    /// "zero", "top(c)", or a path to a cochain json file.
    std::optional<std::string> flux;
    std::optional<double> radius;
    /// Seed for a bare "random" model.
    std::optional<std::uint64_t> seed;
    int steps = 10;
    /// Deformation path: constant, gram, flux, curvature.
    std::string path = "gram";
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"reidemeister", "twisted",       "bundle-torsion", "t-dual",
                                                "verify-duality", "deform", "suite"};
    return names;
}

/// Dispatches one command. The model argument is ignored by suite.
/// Throws UnknownCommand and any module error.
Report run(const std::string& command, const std::string& model, const RunOptions& options = {});

/// Same, on an already loaded model.
Report run(const std::string& command, const ModelFile& model, const RunOptions& options = {});

}  // namespace torsion

#endif
