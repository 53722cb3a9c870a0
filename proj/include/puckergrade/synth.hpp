#pragma once

#include "puckergrade/grade.hpp"
#include "puckergrade/image.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace puckergrade::synth {

// One sinusoidal wrinkle: height(x, y) = amplitude * sin(2 pi f (x cos o + y sin o) / N + phase).
struct WrinkleComponent {
    double amplitude = 0.0;   // pixels of height
    double frequency = 0.0;   // cycles per image width
    double phase = 0.0;       // radians
    double orientation = 0.0; // radians from the seam axis (horizontal)
};

struct WrinkleField {
    std::size_t size = 0;
    std::vector<double> height;    // size x size, row-major
    std::vector<double> slope_x;   // dh/dx
    std::vector<double> slope_y;   // dh/dy
    std::vector<WrinkleComponent> params;
};

// Generator constants. Severity is the steepness of each wrinkle component.
inline constexpr std::size_t kComponents = 4;
inline constexpr double kMaxSlope = 0.03;              // grade 1 per-component slope
inline constexpr double kMaxOrientationDegrees = 20.0;
inline constexpr double kLowestFrequency = 2.0;        // cycles per image
inline constexpr double kFrequencyBandSpacing = 1.0;   // component k starts at lowest + k * spacing
inline constexpr double kFrequencyBandWidth = 0.2;   // before snapping to whole cycles
inline constexpr double kLightElevationDegrees = 30.0; // light comes from the left (-x)
inline constexpr double kBaseIntensity = 40.0;
inline constexpr double kShadingGain = 180.0;
inline constexpr double kSeamDarkening = 60.0;
inline constexpr double kNoiseSigma = 2.0;

// kMaxSlope * (5 - grade) / 4: grade 5 is flat, grade 1 the steepest.
[[nodiscard]] double slope_scale(Grade grade);

[[nodiscard]] WrinkleField wrinkle_field(Grade grade, std::uint64_t seed, std::size_t size);

// Rows [first, last) occupied by the seam line at mid-height.
struct RowBand {
    std::size_t first = 0;
    std::size_t last = 0;
};
[[nodiscard]] RowBand seam_band(std::size_t size);

// Lambertian rendering of the wrinkle field under oblique light, with a dark seam band and
// Gaussian pixel noise. Deterministic in (grade, seed, size).
[[nodiscard]] GrayImage generate_sample(Grade grade, std::uint64_t seed, std::size_t size);

// Mean central-difference gradient magnitude over interior pixels at least 2 rows away from the seam band.
[[nodiscard]] double mean_off_band_gradient(const GrayImage& img);
// Population standard deviation of the same off-band pixels.
[[nodiscard]] double off_band_stddev(const GrayImage& img);

enum class Role : std::uint8_t { Train = 0, Test = 1 };
[[nodiscard]] std::string to_string(Role role);

struct DatasetSpec {
    std::array<std::size_t, Grade::kCount> train_per_grade{};
    std::array<std::size_t, Grade::kCount> test_per_grade{};
    std::uint64_t seed = 42;
    std::size_t size = 256;

    // Spreads totals over grades 1..5; lower grades take the remainder (21 test -> 5,4,4,4,4).
    [[nodiscard]] static DatasetSpec from_totals(std::size_t train, std::size_t test, std::uint64_t seed,
                                                 std::size_t size);
};

struct LabeledImage {
    std::string name; // g<grade>_<role>_<idx>.png
    Grade grade;
    Role role;
    GrayImage image;
};

struct Dataset {
    std::vector<LabeledImage> train;
    std::vector<LabeledImage> test;
};

// Per-sample seed derived from (dataset seed, role, grade, index).
[[nodiscard]] std::uint64_t sample_seed(std::uint64_t seed, Role role, Grade grade, std::size_t index);

[[nodiscard]] Dataset generate_dataset(const DatasetSpec& spec);

// Writes every image as PNG plus labels.tsv (all images), train.tsv and test.tsv.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

} // namespace puckergrade::synth
