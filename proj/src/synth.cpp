#include "puckergrade/synth.hpp"

#include "puckergrade/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace puckergrade::synth {

namespace {

constexpr double kDegrees = std::numbers::pi / 180.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

// Uniform [0, 1) from the top 53 bits; identical on every standard library.
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11U) * 0x1.0p-53;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

// Box-Muller, hand-rolled so the noise stream does not depend on the library's normal_distribution.
class GaussianStream {
public:
    explicit GaussianStream(std::mt19937_64& gen) : gen_(gen) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(gen_); // (0, 1]
        const double u2 = uniform01(gen_);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64& gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

void require_size(std::size_t size) {
    if (size < 4) {
        throw Error(ErrorCode::InvalidDimensions, "synthetic images need size >= 4");
    }
}

bool is_off_band(std::size_t row, const RowBand& band, std::size_t size) {
    constexpr std::size_t margin = 2;
    if (row == 0 || row + 1 >= size) {
        return false;
    }
    return row + margin < band.first || row >= band.last + margin;
}

} // namespace

double slope_scale(Grade grade) {
    return kMaxSlope * static_cast<double>(Grade::kMax - grade.value()) / 4.0;
}

namespace {

WrinkleField build_field(Grade grade, std::mt19937_64& gen, std::size_t size) {
    require_size(size);
    const double scale = slope_scale(grade);
    const auto n = static_cast<double>(size);

    WrinkleField field;
    field.size = size;
    for (std::size_t k = 0; k < kComponents; ++k) {
        WrinkleComponent c;
        const double band_start = kLowestFrequency + static_cast<double>(k) * kFrequencyBandSpacing;
        const double frequency = uniform(gen, band_start, band_start + kFrequencyBandWidth);
        const double orientation = uniform(gen, -kMaxOrientationDegrees, kMaxOrientationDegrees) * kDegrees;
        c.phase = uniform(gen, 0.0, 2.0 * std::numbers::pi);
        // Snap the wave vector to whole cycles so the wrinkle tiles the image and its spectrum
        // does not leak into neighbouring bins; keep the snapped angle inside the orientation limit.
        const double kx = std::max(1.0, std::round(frequency * std::cos(orientation)));
        const double ky_limit = std::floor(kx * std::tan(kMaxOrientationDegrees * kDegrees) + 1e-9);
        const double ky = std::clamp(std::round(frequency * std::sin(orientation)), -ky_limit, ky_limit);
        c.frequency = std::hypot(kx, ky);
        c.orientation = std::atan2(ky, kx);
        // Peak slope of the component equals the grade's slope scale.
        c.amplitude = scale * n / (2.0 * std::numbers::pi * c.frequency);
        field.params.push_back(c);
    }

    field.height.assign(size * size, 0.0);
    field.slope_x.assign(size * size, 0.0);
    field.slope_y.assign(size * size, 0.0);
    for (const WrinkleComponent& c : field.params) {
        const double omega = 2.0 * std::numbers::pi * c.frequency / n;
        const double ux = std::cos(c.orientation);
        const double uy = std::sin(c.orientation);
        for (std::size_t y = 0; y < size; ++y) {
            for (std::size_t x = 0; x < size; ++x) {
                const double arg =
                    omega * (static_cast<double>(x) * ux + static_cast<double>(y) * uy) + c.phase;
                const double d = c.amplitude * omega * std::cos(arg);
                const std::size_t i = y * size + x;
                field.height[i] += c.amplitude * std::sin(arg);
                field.slope_x[i] += d * ux;
                field.slope_y[i] += d * uy;
            }
        }
    }
    return field;
}

} // namespace

WrinkleField wrinkle_field(Grade grade, std::uint64_t seed, std::size_t size) {
    std::mt19937_64 gen(seed);
    return build_field(grade, gen, size);
}

RowBand seam_band(std::size_t size) {
    const std::size_t width = std::max<std::size_t>(2, size / 64);
    const std::size_t first = size / 2 - width / 2;
    return {first, first + width};
}

GrayImage generate_sample(Grade grade, std::uint64_t seed, std::size_t size) {
    // Noise continues the generator after the wrinkle draws.
    std::mt19937_64 gen(seed);
    const WrinkleField field = build_field(grade, gen, size);
    GaussianStream noise(gen);

    const double elevation = kLightElevationDegrees * kDegrees;
    const double light_x = -std::cos(elevation);
    const double light_z = std::sin(elevation);
    const RowBand band = seam_band(size);

    GrayImage img(size, size);
    for (std::size_t y = 0; y < size; ++y) {
        const bool on_seam = y >= band.first && y < band.last;
        for (std::size_t x = 0; x < size; ++x) {
            const std::size_t i = y * size + x;
            // Surface normal of z = h(x, y) is (-h_x, -h_y, 1) / |.|.
            const double hx = field.slope_x[i];
            const double hy = field.slope_y[i];
            const double inv_norm = 1.0 / std::sqrt(hx * hx + hy * hy + 1.0);
            const double lambert = (-hx * light_x + light_z) * inv_norm;
            double v = kBaseIntensity + kShadingGain * lambert;
            if (on_seam) {
                v -= kSeamDarkening;
            }
            v += kNoiseSigma * noise.next();
            img.at(y, x) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
        }
    }
    return img;
}

double mean_off_band_gradient(const GrayImage& img) {
    const RowBand band = seam_band(img.height());
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t y = 1; y + 1 < img.height(); ++y) {
        if (!is_off_band(y, band, img.height())) {
            continue;
        }
        for (std::size_t x = 1; x + 1 < img.width(); ++x) {
            const double gx = (static_cast<double>(img.at(y, x + 1)) - img.at(y, x - 1)) / 2.0;
            const double gy = (static_cast<double>(img.at(y + 1, x)) - img.at(y - 1, x)) / 2.0;
            acc += std::sqrt(gx * gx + gy * gy);
            ++count;
        }
    }
    return count == 0 ? 0.0 : acc / static_cast<double>(count);
}

double off_band_stddev(const GrayImage& img) {
    const RowBand band = seam_band(img.height());
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t y = 0; y < img.height(); ++y) {
        if (!is_off_band(y, band, img.height())) {
            continue;
        }
        for (std::size_t x = 0; x < img.width(); ++x) {
            const double v = img.at(y, x);
            sum += v;
            sum_sq += v * v;
            ++count;
        }
    }
    if (count == 0) {
        return 0.0;
    }
    const double mean = sum / static_cast<double>(count);
    return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean));
}

std::string to_string(Role role) {
    return role == Role::Train ? "train" : "test";
}

DatasetSpec DatasetSpec::from_totals(std::size_t train, std::size_t test, std::uint64_t seed, std::size_t size) {
    DatasetSpec spec;
    spec.seed = seed;
    spec.size = size;
    for (std::size_t g = 0; g < Grade::kCount; ++g) {
        spec.train_per_grade[g] = train / Grade::kCount + (g < train % Grade::kCount ? 1 : 0);
        spec.test_per_grade[g] = test / Grade::kCount + (g < test % Grade::kCount ? 1 : 0);
    }
    return spec;
}

std::uint64_t sample_seed(std::uint64_t seed, Role role, Grade grade, std::size_t index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(role) + 1));
    h = splitmix64(h ^ static_cast<std::uint64_t>(grade.value()));
    return splitmix64(h ^ static_cast<std::uint64_t>(index));
}

Dataset generate_dataset(const DatasetSpec& spec) {
    require_size(spec.size);
    Dataset out;
    for (const Role role : {Role::Train, Role::Test}) {
        const auto& counts = role == Role::Train ? spec.train_per_grade : spec.test_per_grade;
        auto& bucket = role == Role::Train ? out.train : out.test;
        for (int g = Grade::kMin; g <= Grade::kMax; ++g) {
            const Grade grade(g);
            for (std::size_t i = 0; i < counts[grade.index()]; ++i) {
                std::string name = "g" + std::to_string(g) + "_" + to_string(role) + "_" + std::to_string(i) + ".png";
                bucket.push_back(LabeledImage{std::move(name), grade, role,
                                              generate_sample(grade, sample_seed(spec.seed, role, grade, i), spec.size)});
            }
        }
    }
    return out;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream all(dir / "labels.tsv", std::ios::trunc);
    std::ofstream train(dir / "train.tsv", std::ios::trunc);
    std::ofstream test(dir / "test.tsv", std::ios::trunc);
    if (!all || !train || !test) {
        throw Error(ErrorCode::Io, "cannot write label files in " + dir.string());
    }
    for (const auto* bucket : {&dataset.train, &dataset.test}) {
        for (const LabeledImage& item : *bucket) {
            save_png(item.image, dir / item.name);
            const std::string line = item.name + "\t" + std::to_string(item.grade.value()) + "\n";
            all << line;
            (item.role == Role::Train ? train : test) << line;
        }
    }
}

} // namespace puckergrade::synth
