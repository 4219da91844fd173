#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ifd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failures of the numerics proper; the CLI maps these to exit code 2.
struct NumericError : Error {
    using Error::Error;
};

struct InvalidInput : Error {
    using Error::Error;
};

struct DomainError : NumericError {
    using NumericError::NumericError;
};

struct NotPositiveDefinite : NumericError {
    using NumericError::NumericError;
};

struct SeriesDiverges : NumericError {
    using NumericError::NumericError;
};

struct StepTooLarge : NumericError {
    using NumericError::NumericError;
};

struct DegenerateMassError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct UnsupportedPixelCount : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct InsufficientSweep : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct ConfigError : Error {
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace ifd
