#include "puckergrade/otsu.hpp"

#include "puckergrade/error.hpp"

#include <algorithm>
#include <string>

namespace puckergrade::otsu {

namespace {

struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;
};

Moments class_moments(const Histogram& h, std::size_t first, std::size_t last) {
    Moments m;
    double weighted = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        m.count += h.bins[i];
        weighted += static_cast<double>(i) * static_cast<double>(h.bins[i]);
    }
    if (m.count == 0) {
        return m;
    }
    const double n = static_cast<double>(m.count);
    m.mean = weighted / n;
    double spread = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double d = static_cast<double>(i) - m.mean;
        spread += d * d * static_cast<double>(h.bins[i]);
    }
    m.variance = spread / n;
    return m;
}

void check_threshold(std::size_t t) {
    if (t > kMaxThreshold) {
        throw Error(ErrorCode::InvalidThreshold, "threshold must lie in [0, 254], got " + std::to_string(t));
    }
}

} // namespace

GrayImage BinaryImage::to_gray() const {
    std::vector<std::uint8_t> out(bits.size());
    std::transform(bits.begin(), bits.end(), out.begin(), [](bool b) { return b ? std::uint8_t{255} : std::uint8_t{0}; });
    return GrayImage(width, height, std::move(out));
}

Histogram histogram(const GrayImage& img) {
    Histogram h;
    for (std::uint8_t v : img.pixels()) {
        ++h.bins[v];
    }
    h.total = img.pixels().size();
    return h;
}

Histogram histogram_from_bins(const std::array<std::uint64_t, kLevels>& bins) {
    Histogram h;
    h.bins = bins;
    for (std::uint64_t c : bins) {
        h.total += c;
    }
    return h;
}

ClassStats class_stats(const Histogram& h, std::size_t t) {
    check_threshold(t);
    const Moments lower = class_moments(h, 0, t);
    const Moments upper = class_moments(h, t + 1, kLevels - 1);
    const double total = static_cast<double>(h.total);

    ClassStats s;
    s.threshold = t;
    s.w1 = static_cast<double>(lower.count) / total;
    s.w2 = static_cast<double>(upper.count) / total;
    s.m1 = lower.mean;
    s.m2 = upper.mean;
    s.s1sq = lower.variance;
    s.s2sq = upper.variance;
    return s;
}

double within_class_variance(const Histogram& h, std::size_t t) {
    const ClassStats s = class_stats(h, t);
    return s.w1 * s.s1sq + s.w2 * s.s2sq;
}

double between_class_variance(const Histogram& h, std::size_t t) {
    const ClassStats s = class_stats(h, t);
    const double d = s.m1 - s.m2;
    return s.w1 * s.w2 * d * d;
}

double total_variance(const Histogram& h) {
    return class_moments(h, 0, kLevels - 1).variance;
}

std::size_t otsu_threshold(const Histogram& h) {
    const auto occupied = std::count_if(h.bins.begin(), h.bins.end(), [](std::uint64_t c) { return c != 0; });
    if (occupied < 2) {
        throw Error(ErrorCode::DegenerateHistogram, "all pixels share one intensity");
    }
    std::size_t best = 0;
    double best_value = within_class_variance(h, 0);
    for (std::size_t t = 1; t <= kMaxThreshold; ++t) {
        const double v = within_class_variance(h, t);
        if (v < best_value) {
            best_value = v;
            best = t;
        }
    }
    return best;
}

BinaryImage binarize(const GrayImage& img, std::size_t t) {
    BinaryImage out;
    out.width = img.width();
    out.height = img.height();
    out.bits.reserve(img.pixels().size());
    for (std::uint8_t v : img.pixels()) {
        out.bits.push_back(v > t);
    }
    return out;
}

} // namespace puckergrade::otsu
