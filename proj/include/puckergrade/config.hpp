#pragma once

#include "puckergrade/som.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace puckergrade {

// Every tunable of the grading pipeline. Text form is `key = value` lines with `#` comments;
// omitted keys keep their defaults.
struct PipelineConfig {
    std::size_t transform_size = 256;
    std::size_t feature_side = 100;
    bool include_dc = false;
    bool binarize = false;
    std::size_t som_rows = 10;
    std::size_t som_cols = 10;
    double alpha0 = 0.35;
    std::optional<double> d0;                // auto: ceil(0.75 * max(rows, cols) / 2)
    std::optional<std::size_t> iterations;   // auto: 200 * training samples
    som::ClassifyMode classify_mode = som::ClassifyMode::BmuDistance;
    std::uint64_t seed = 42;

    [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_side * feature_side; }

    // Fills d0 / iterations from the defaults rule when unset.
    [[nodiscard]] som::TrainingSchedule schedule(std::size_t sample_count) const;
    [[nodiscard]] PipelineConfig resolved(std::size_t sample_count) const;

    // Throws InvalidConfig when a field is out of range.
    void validate() const;

    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] static PipelineConfig parse(std::string_view text);
    [[nodiscard]] static PipelineConfig load(const std::filesystem::path& path);

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

[[nodiscard]] std::string to_string(som::ClassifyMode mode);
[[nodiscard]] som::ClassifyMode parse_classify_mode(std::string_view text);

// Applies PUCKERGRADE_SEED when set. Throws InvalidConfig if it is not an unsigned integer.
void apply_environment(PipelineConfig& config);

} // namespace puckergrade
