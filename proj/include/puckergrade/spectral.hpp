#pragma once

#include "puckergrade/image.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace puckergrade::spectral {

using Complex = std::complex<double>;

// Square N x N grid, row-major. Row index is the first transform index (m or k).
template <typename T>
struct SquareGrid {
    std::size_t n = 0;
    std::vector<T> values;

    SquareGrid() = default;
    explicit SquareGrid(std::size_t size, T fill = T{}) : n(size), values(size * size, fill) {}

    [[nodiscard]] T& at(std::size_t row, std::size_t col) { return values[row * n + col]; }
    [[nodiscard]] const T& at(std::size_t row, std::size_t col) const { return values[row * n + col]; }

    friend bool operator==(const SquareGrid&, const SquareGrid&) = default;
};

using AmplitudeMap = SquareGrid<double>;

// Normalization convention carried by a spectrum.
enum class Convention : std::uint8_t {
    // Forward transform scaled by 1/N^2, inverse unscaled (exact round trip).
    ForwardScaled = 1,
};

struct Spectrum {
    std::size_t n = 0;
    std::vector<Complex> values;
    Convention convention = Convention::ForwardScaled;

    [[nodiscard]] const Complex& at(std::size_t k, std::size_t l) const { return values[k * n + l]; }
    [[nodiscard]] Complex& at(std::size_t k, std::size_t l) { return values[k * n + l]; }
};

// Intermediate of the separable transform: P(k, n), the 1/N-scaled transform of every column.
struct RowTransform {
    SquareGrid<Complex> values;
};

struct RealField {
    SquareGrid<double> values;
    double max_imaginary_residue = 0.0;
};

struct FeatureVector {
    std::size_t side = 0;
    std::vector<double> data;
};

// Center-crop to min(width, height), then area-resample to n x n.
[[nodiscard]] GrayImage prepare_square(const GrayImage& img, std::size_t n);

// Direct double sum, O(N^4). Reference implementation.
[[nodiscard]] Spectrum dft2_naive(const GrayImage& img);

// Column pass: P(k, n) = (1/N) sum_m f(m, n) e^{-i 2 pi k m / N}.
[[nodiscard]] RowTransform column_pass(const GrayImage& img);
// Row pass: F(k, l) = (1/N) sum_n P(k, n) e^{-i 2 pi l n / N}.
[[nodiscard]] Spectrum row_pass(const RowTransform& partial);

// Separable transform, O(N^3): row_pass(column_pass(img)).
[[nodiscard]] Spectrum dft2(const GrayImage& img);
[[nodiscard]] Spectrum dft2(const SquareGrid<double>& field);

// Unscaled inverse of a ForwardScaled spectrum.
[[nodiscard]] RealField idft2(const Spectrum& spec);

[[nodiscard]] AmplitudeMap amplitude(const Spectrum& spec);
// Values in (-pi, pi]; zero bins have phase 0.
[[nodiscard]] SquareGrid<double> phase(const Spectrum& spec);

// Rotates both axes so index 0 (DC) lands at floor(N/2).
template <typename T>
[[nodiscard]] SquareGrid<T> center_shift(const SquareGrid<T>& grid) {
    SquareGrid<T> out(grid.n);
    const std::size_t half = grid.n / 2;
    for (std::size_t r = 0; r < grid.n; ++r) {
        for (std::size_t c = 0; c < grid.n; ++c) {
            out.at((r + half) % grid.n, (c + half) % grid.n) = grid.at(r, c);
        }
    }
    return out;
}

// Centered, log(1 + v) compressed, rescaled to [0, 255]. A flat map renders all 0.
[[nodiscard]] GrayImage spectrum_image(const SquareGrid<double>& values);

// Linear rescale of a phase map from [-pi, pi] to [0, 255], centered like spectrum_image.
[[nodiscard]] GrayImage phase_image(const SquareGrid<double>& phases);

// Block-mean down-sampling of the centered amplitude map to side x side, L2-normalized.
// Throws DegenerateFeature if the vector is zero before normalization, up to rounding relative to the peak amplitude.
[[nodiscard]] FeatureVector extract_features(const AmplitudeMap& amps, std::size_t side, bool include_dc);

// Block boundaries used by extract_features: side + 1 offsets, trailing blocks take the remainder.
[[nodiscard]] std::vector<std::size_t> block_edges(std::size_t length, std::size_t blocks);

// u32 LE side, then side^2 f64 LE values.
[[nodiscard]] std::vector<std::uint8_t> encode_features(const FeatureVector& fv);
[[nodiscard]] FeatureVector decode_features(std::span<const std::uint8_t> bytes);

} // namespace puckergrade::spectral
