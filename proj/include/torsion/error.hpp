#ifndef TORSION_ERROR_HPP
#define TORSION_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace torsion {

enum class ErrorKind {
    // chain_models
    InvalidSimplex,
    DuplicateSimplex,
    InconsistentDimension,
    NonUnitaryHolonomy,
    NonFlatLocalSystem,
    NotSquareZero,
    DegreeMismatch,
    FluxNotClosed,
    FluxNotNilpotent,
    FluxHasDegreeOne,
    FluxEvenDegree,
    NotOriented,
    NotOrientable,
    InvalidOrientation,
    NotTopDegree,
    // spectral
    NotHermitian,
    GramNotPositive,
    NegativeEigenvalue,
    // circle_bundle
    ShapeMismatch,
    InvalidFlux,
    InvalidRadius,
    ParityMismatch,
    DualityViolation,
    PathInvalid,
    // workbench
    ParseError,
    UnknownBuilder,
    ValidationError,
    UnknownCommand,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace torsion

#endif
