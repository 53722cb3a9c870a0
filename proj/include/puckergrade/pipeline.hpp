#pragma once

#include "puckergrade/config.hpp"
#include "puckergrade/grade.hpp"
#include "puckergrade/image.hpp"
#include "puckergrade/model_io.hpp"
#include "puckergrade/som.hpp"
#include "puckergrade/spectral.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace puckergrade::pipeline {

struct LabeledPath {
    std::filesystem::path file;
    Grade grade;
};

struct LabeledSample {
    std::string name;
    GrayImage image;
    Grade grade;
};

// `filename<TAB>grade` lines; relative filenames resolve against the labels file's directory.
[[nodiscard]] std::vector<LabeledPath> read_labels(const std::filesystem::path& tsv);
[[nodiscard]] std::vector<LabeledSample> load_samples(const std::filesystem::path& tsv);

// (optional Otsu binarization) -> square resample -> separable DFT -> amplitude -> block-mean features.
[[nodiscard]] spectral::FeatureVector extract(const GrayImage& img, const PipelineConfig& config);

struct TrainedModel {
    som::Model model;
    PipelineConfig config; // resolved: d0 and iterations are concrete
    double error_before = 0.0;
    double error_after = 0.0;
};

// Trains on every sample, then labels nodes with per-grade mean feature vectors.
// Throws MissingGrade unless all five grades are present.
[[nodiscard]] TrainedModel train(const PipelineConfig& config, std::span<const LabeledSample> samples);

// PKSM0002 bytes with the resolved config embedded.
[[nodiscard]] std::vector<std::uint8_t> model_bytes(const TrainedModel& trained);

TrainedModel run_train(const PipelineConfig& config, const std::filesystem::path& labels,
                       const std::filesystem::path& model_out);

struct LoadedModel {
    som::Model model;
    PipelineConfig config;
};

// Uses the embedded config when present (PKSM0002), the fallback otherwise (PKSM0001).
// Throws ConfigMismatch when the map dimension differs from feature_side^2.
[[nodiscard]] LoadedModel open_model(som::ModelFile file, const PipelineConfig& fallback);
[[nodiscard]] LoadedModel open_model(const std::filesystem::path& path, const PipelineConfig& fallback);

[[nodiscard]] som::Classification classify(const LoadedModel& loaded, const GrayImage& img);

[[nodiscard]] som::Classification run_classify(const std::filesystem::path& model, const std::filesystem::path& image,
                                               const PipelineConfig& fallback);

struct EvaluationEntry {
    std::string name;
    Grade truth;
    Grade predicted;
    som::NodeIndex node;
    double distance = 0.0;
};

struct EvaluationReport {
    std::vector<EvaluationEntry> entries; // sorted by name
    // confusion[truth - 1][predicted - 1]
    std::array<std::array<std::size_t, Grade::kCount>, Grade::kCount> confusion{};

    [[nodiscard]] std::size_t correct() const noexcept;
    [[nodiscard]] std::size_t total() const noexcept;
    [[nodiscard]] double accuracy() const noexcept; // percent

    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] std::string to_tsv() const;
};

[[nodiscard]] EvaluationReport evaluate(const LoadedModel& loaded, std::span<const LabeledSample> samples);

[[nodiscard]] EvaluationReport run_evaluate(const std::filesystem::path& model, const std::filesystem::path& labels,
                                            const PipelineConfig& fallback);

} // namespace puckergrade::pipeline
