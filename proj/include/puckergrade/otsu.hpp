#pragma once

#include "puckergrade/image.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace puckergrade::otsu {

inline constexpr std::size_t kLevels = 256;
inline constexpr std::size_t kMaxThreshold = kLevels - 2;

struct Histogram {
    std::array<std::uint64_t, kLevels> bins{};
    std::uint64_t total = 0;

    [[nodiscard]] double probability(std::size_t level) const {
        return static_cast<double>(bins[level]) / static_cast<double>(total);
    }
};

// Statistics of the two classes split at t: class 1 = [0..t], class 2 = [t+1..255].
// An empty class has mean and variance 0.
struct ClassStats {
    std::size_t threshold = 0;
    double w1 = 0.0;
    double w2 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double s1sq = 0.0;
    double s2sq = 0.0;
};

struct BinaryImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<bool> bits;

    // 0 / 255 rendering, used for P5 output and for feeding the spectral stage.
    [[nodiscard]] GrayImage to_gray() const;
};

[[nodiscard]] Histogram histogram(const GrayImage& img);
[[nodiscard]] Histogram histogram_from_bins(const std::array<std::uint64_t, kLevels>& bins);

// Throws InvalidThreshold when t > 254.
[[nodiscard]] ClassStats class_stats(const Histogram& h, std::size_t t);

// Weighted within-class variance w1 s1^2 + w2 s2^2.
[[nodiscard]] double within_class_variance(const Histogram& h, std::size_t t);

// Between-class variance w1 w2 (m1 - m2)^2.
[[nodiscard]] double between_class_variance(const Histogram& h, std::size_t t);

[[nodiscard]] double total_variance(const Histogram& h);

// Minimizer of the within-class variance over t in [0, 254], smallest t on ties.
// Throws DegenerateHistogram when every pixel shares one intensity.
[[nodiscard]] std::size_t otsu_threshold(const Histogram& h);

// bit = intensity > t
[[nodiscard]] BinaryImage binarize(const GrayImage& img, std::size_t t);

} // namespace puckergrade::otsu
