#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kmsphase {

enum class ErrorCode {
    // input validation
    ZeroRow,
    ZeroColumn,
    EnergyNotAboveOne,
    DimensionMismatch,
    NotBoolean,
    ConfigParse,
    InvalidArgument,
    // words
    LengthTooLarge,
    DegenerateShells,
    // structural preconditions
    NotIrreducible,
    // states / invariance
    DivergentNormalizer,
    ZeroMeasure,
    NegativeDefect,
    NotSubinvariant,
    TooLargeForExhaustive,
    NotFixedPoint,
    NotNormalized,
    NegativeEntry,
    NotInvariant,
    EigenspaceTooLarge,
    // star
    ConditionDaggerFails,
    EnergyBelowTwo,
    BelowAbscissa,
    // numerics
    NoConvergence,
};

std::string_view to_string(ErrorCode code);

// Validation errors map to CLI exit status 1, numeric failures to 2.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::optional<std::size_t> index = std::nullopt);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

}  // namespace kmsphase
