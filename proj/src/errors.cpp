#include "kmsphase/errors.hpp"

namespace kmsphase {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroRow: return "ZeroRow";
        case ErrorCode::ZeroColumn: return "ZeroColumn";
        case ErrorCode::EnergyNotAboveOne: return "EnergyNotAboveOne";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotBoolean: return "NotBoolean";
        case ErrorCode::ConfigParse: return "ConfigParse";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::LengthTooLarge: return "LengthTooLarge";
        case ErrorCode::DegenerateShells: return "DegenerateShells";
        case ErrorCode::NotIrreducible: return "NotIrreducible";
        case ErrorCode::DivergentNormalizer: return "DivergentNormalizer";
        case ErrorCode::ZeroMeasure: return "ZeroMeasure";
        case ErrorCode::NegativeDefect: return "NegativeDefect";
        case ErrorCode::NotSubinvariant: return "NotSubinvariant";
        case ErrorCode::TooLargeForExhaustive: return "TooLargeForExhaustive";
        case ErrorCode::NotFixedPoint: return "NotFixedPoint";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::NotInvariant: return "NotInvariant";
        case ErrorCode::EigenspaceTooLarge: return "EigenspaceTooLarge";
        case ErrorCode::ConditionDaggerFails: return "ConditionDaggerFails";
        case ErrorCode::EnergyBelowTwo: return "EnergyBelowTwo";
        case ErrorCode::BelowAbscissa: return "BelowAbscissa";
        case ErrorCode::NoConvergence: return "NoConvergence";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivergentNormalizer:
        case ErrorCode::NoConvergence:
        case ErrorCode::DegenerateShells:
        case ErrorCode::EigenspaceTooLarge:
            return false;
        default:
            return true;
    }
}

Error::Error(ErrorCode code, std::string message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), index_(index) {}

}  // namespace kmsphase
