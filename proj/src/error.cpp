#include "torsion/error.hpp"

namespace torsion {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidSimplex: return "InvalidSimplex";
        case ErrorKind::DuplicateSimplex: return "DuplicateSimplex";
        case ErrorKind::InconsistentDimension: return "InconsistentDimension";
        case ErrorKind::NonUnitaryHolonomy: return "NonUnitaryHolonomy";
        case ErrorKind::NonFlatLocalSystem: return "NonFlatLocalSystem";
        case ErrorKind::NotSquareZero: return "NotSquareZero";
        case ErrorKind::DegreeMismatch: return "DegreeMismatch";
        case ErrorKind::FluxNotClosed: return "FluxNotClosed";
        case ErrorKind::FluxNotNilpotent: return "FluxNotNilpotent";
        case ErrorKind::FluxHasDegreeOne: return "FluxHasDegreeOne";
        case ErrorKind::FluxEvenDegree: return "FluxEvenDegree";
        case ErrorKind::NotOriented: return "NotOriented";
        case ErrorKind::NotOrientable: return "NotOrientable";
        case ErrorKind::InvalidOrientation: return "InvalidOrientation";
        case ErrorKind::NotTopDegree: return "NotTopDegree";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::GramNotPositive: return "GramNotPositive";
        case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::InvalidFlux: return "InvalidFlux";
        case ErrorKind::InvalidRadius: return "InvalidRadius";
        case ErrorKind::ParityMismatch: return "ParityMismatch";
        case ErrorKind::DualityViolation: return "DualityViolation";
        case ErrorKind::PathInvalid: return "PathInvalid";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnknownBuilder: return "UnknownBuilder";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::UnknownCommand: return "UnknownCommand";
    }
    return "Unknown";
}

}  // namespace torsion
