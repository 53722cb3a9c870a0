#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace puckergrade {

enum class ErrorCode {
    // image I/O
    FileNotFound,
    UnsupportedFormat,
    CorruptData,
    Io,
    // otsu
    InvalidThreshold,
    DegenerateHistogram,
    // spectral
    NotSquare,
    ConventionMismatch,
    DegenerateFeature,
    // som
    InvalidDimensions,
    DimensionMismatch,
    IterationOutOfRange,
    InvalidSchedule,
    EmptyTrainingSet,
    EmptyPrototypes,
    UnlabeledModel,
    // metrics
    NonPositiveThickness,
    NonPositiveLength,
    // synth / grades
    InvalidGrade,
    // pipeline
    MissingGrade,
    ConfigMismatch,
    InvalidConfig,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptData: return "CorruptData";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::DegenerateHistogram: return "DegenerateHistogram";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::ConventionMismatch: return "ConventionMismatch";
    case ErrorCode::DegenerateFeature: return "DegenerateFeature";
    case ErrorCode::InvalidDimensions: return "InvalidDimensions";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IterationOutOfRange: return "IterationOutOfRange";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::EmptyPrototypes: return "EmptyPrototypes";
    case ErrorCode::UnlabeledModel: return "UnlabeledModel";
    case ErrorCode::NonPositiveThickness: return "NonPositiveThickness";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::InvalidGrade: return "InvalidGrade";
    case ErrorCode::MissingGrade: return "MissingGrade";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

} // namespace puckergrade
