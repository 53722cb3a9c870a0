#include "puckergrade/spectral.hpp"

#include "puckergrade/detail/byte_io.hpp"
#include "puckergrade/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace puckergrade::spectral {

namespace {

constexpr double kDegenerateTolerance = 1e-12;

// twiddle[j] = exp(-i 2 pi j / N)
std::vector<Complex> twiddles(std::size_t n) {
    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        out[j] = Complex(std::cos(angle), -std::sin(angle));
    }
    return out;
}

void require_square(const GrayImage& img) {
    if (img.empty() || !img.is_square()) {
        throw Error(ErrorCode::NotSquare, "transform requires a non-empty N x N image, got " +
                                              std::to_string(img.width()) + "x" + std::to_string(img.height()));
    }
}

SquareGrid<double> to_field(const GrayImage& img) {
    require_square(img);
    SquareGrid<double> field(img.width());
    std::transform(img.pixels().begin(), img.pixels().end(), field.values.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v); });
    return field;
}

// Transforms every column of src along the row index: out(k, c) = sum_m src(m, c) w[(k m) mod N].
template <typename T>
SquareGrid<Complex> transform_columns(const SquareGrid<T>& src, const std::vector<Complex>& w) {
    const std::size_t n = src.n;
    SquareGrid<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex* dst = &out.at(k, 0);
        for (std::size_t m = 0; m < n; ++m) {
            const Complex tw = w[(k * m) % n];
            const T* row = &src.at(m, 0);
            for (std::size_t c = 0; c < n; ++c) {
                dst[c] += row[c] * tw;
            }
        }
    }
    return out;
}

// Transforms every row along the column index: out(r, l) = sum_c src(r, c) w[(l c) mod N].
SquareGrid<Complex> transform_rows(const SquareGrid<Complex>& src, const std::vector<Complex>& w) {
    const std::size_t n = src.n;
    SquareGrid<Complex> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        const Complex* row = &src.at(r, 0);
        for (std::size_t l = 0; l < n; ++l) {
            Complex acc{};
            std::size_t idx = 0;
            for (std::size_t c = 0; c < n; ++c) {
                acc += row[c] * w[idx];
                idx += l;
                if (idx >= n) {
                    idx -= n;
                }
            }
            out.at(r, l) = acc;
        }
    }
    return out;
}

void scale_down(SquareGrid<Complex>& grid) {
    const double n = static_cast<double>(grid.n);
    for (Complex& v : grid.values) {
        v /= n;
    }
}

RowTransform column_pass_field(const SquareGrid<double>& field) {
    RowTransform partial{transform_columns(field, twiddles(field.n))};
    scale_down(partial.values);
    return partial;
}

double rescale_to_byte(double v, double lo, double hi) {
    if (!(hi > lo)) {
        return 0.0;
    }
    return std::floor((v - lo) / (hi - lo) * 255.0 + 0.5);
}

} // namespace

GrayImage prepare_square(const GrayImage& img, std::size_t n) {
    if (n == 0 || img.empty()) {
        throw Error(ErrorCode::InvalidDimensions, "prepare_square needs n >= 1 and a non-empty image");
    }
    const std::size_t side = std::min(img.width(), img.height());
    const std::size_t x0 = (img.width() - side) / 2;
    const std::size_t y0 = (img.height() - side) / 2;

    if (side == n) {
        GrayImage out(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                out.at(r, c) = img.at(y0 + r, x0 + c);
            }
        }
        return out;
    }

    // weights(i, j): overlap of output cell i with source cell j, in units of output cells.
    const double scale = static_cast<double>(side) / static_cast<double>(n);
    std::vector<std::vector<std::pair<std::size_t, double>>> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) * scale;
        const double hi = static_cast<double>(i + 1) * scale;
        const auto first = static_cast<std::size_t>(std::floor(lo));
        const auto last = std::min(side - 1, static_cast<std::size_t>(std::ceil(hi)) - 1);
        for (std::size_t j = first; j <= last; ++j) {
            const double overlap = std::min(hi, static_cast<double>(j + 1)) - std::max(lo, static_cast<double>(j));
            if (overlap > 0.0) {
                weights[i].emplace_back(j, overlap / scale);
            }
        }
    }

    // Horizontal pass into a side x n buffer, then vertical.
    std::vector<double> horizontal(side * n, 0.0);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double acc = 0.0;
            for (const auto& [j, w] : weights[c]) {
                acc += w * img.at(y0 + r, x0 + j);
            }
            horizontal[r * n + c] = acc;
        }
    }
    GrayImage out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double acc = 0.0;
            for (const auto& [j, w] : weights[r]) {
                acc += w * horizontal[j * n + c];
            }
            out.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::floor(acc + 0.5), 0.0, 255.0));
        }
    }
    return out;
}

Spectrum dft2_naive(const GrayImage& img) {
    const SquareGrid<double> f = to_field(img);
    const std::size_t n = f.n;
    const auto w = twiddles(n);
    const double norm = static_cast<double>(n) * static_cast<double>(n);
    Spectrum spec{n, std::vector<Complex>(n * n), Convention::ForwardScaled};
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            Complex acc{};
            for (std::size_t m = 0; m < n; ++m) {
                for (std::size_t c = 0; c < n; ++c) {
                    acc += f.at(m, c) * w[(k * m + l * c) % n];
                }
            }
            spec.at(k, l) = acc / norm;
        }
    }
    return spec;
}

RowTransform column_pass(const GrayImage& img) {
    return column_pass_field(to_field(img));
}

Spectrum row_pass(const RowTransform& partial) {
    const std::size_t n = partial.values.n;
    SquareGrid<Complex> full = transform_rows(partial.values, twiddles(n));
    scale_down(full);
    return Spectrum{n, std::move(full.values), Convention::ForwardScaled};
}

Spectrum dft2(const GrayImage& img) {
    return row_pass(column_pass(img));
}

Spectrum dft2(const SquareGrid<double>& field) {
    if (field.n == 0) {
        throw Error(ErrorCode::NotSquare, "empty field");
    }
    return row_pass(column_pass_field(field));
}

RealField idft2(const Spectrum& spec) {
    if (spec.convention != Convention::ForwardScaled) {
        throw Error(ErrorCode::ConventionMismatch, "inverse expects a forward-1/N^2 spectrum");
    }
    if (spec.n == 0 || spec.values.size() != spec.n * spec.n) {
        throw Error(ErrorCode::InvalidDimensions, "malformed spectrum");
    }
    auto w = twiddles(spec.n);
    for (Complex& v : w) {
        v = std::conj(v);
    }
    SquareGrid<Complex> grid(spec.n);
    grid.values = spec.values;
    const SquareGrid<Complex> spatial = transform_rows(transform_columns(grid, w), w);

    RealField out{SquareGrid<double>(spec.n), 0.0};
    for (std::size_t i = 0; i < spatial.values.size(); ++i) {
        out.values.values[i] = spatial.values[i].real();
        out.max_imaginary_residue = std::max(out.max_imaginary_residue, std::abs(spatial.values[i].imag()));
    }
    return out;
}

AmplitudeMap amplitude(const Spectrum& spec) {
    AmplitudeMap out(spec.n);
    std::transform(spec.values.begin(), spec.values.end(), out.values.begin(),
                   [](const Complex& v) { return std::abs(v); });
    return out;
}

SquareGrid<double> phase(const Spectrum& spec) {
    SquareGrid<double> out(spec.n);
    std::transform(spec.values.begin(), spec.values.end(), out.values.begin(), [](const Complex& v) {
        if (v.real() == 0.0 && v.imag() == 0.0) {
            return 0.0;
        }
        const double p = std::atan2(v.imag(), v.real());
        return p <= -std::numbers::pi ? std::numbers::pi : p;
    });
    return out;
}

GrayImage spectrum_image(const SquareGrid<double>& values) {
    if (values.n == 0) {
        throw Error(ErrorCode::InvalidDimensions, "empty amplitude map");
    }
    SquareGrid<double> shifted = center_shift(values);
    for (double& v : shifted.values) {
        v = std::log1p(v);
    }
    const auto [lo, hi] = std::minmax_element(shifted.values.begin(), shifted.values.end());
    GrayImage out(values.n, values.n);
    for (std::size_t i = 0; i < shifted.values.size(); ++i) {
        out.pixels()[i] = static_cast<std::uint8_t>(rescale_to_byte(shifted.values[i], *lo, *hi));
    }
    return out;
}

GrayImage phase_image(const SquareGrid<double>& phases) {
    if (phases.n == 0) {
        throw Error(ErrorCode::InvalidDimensions, "empty phase map");
    }
    const SquareGrid<double> shifted = center_shift(phases);
    GrayImage out(phases.n, phases.n);
    for (std::size_t i = 0; i < shifted.values.size(); ++i) {
        out.pixels()[i] =
            static_cast<std::uint8_t>(rescale_to_byte(shifted.values[i], -std::numbers::pi, std::numbers::pi));
    }
    return out;
}

std::vector<std::size_t> block_edges(std::size_t length, std::size_t blocks) {
    const std::size_t base = length / blocks;
    const std::size_t remainder = length % blocks;
    std::vector<std::size_t> edges(blocks + 1, 0);
    for (std::size_t i = 0; i < blocks; ++i) {
        edges[i + 1] = edges[i] + base + (i >= blocks - remainder ? 1 : 0);
    }
    return edges;
}

FeatureVector extract_features(const AmplitudeMap& amps, std::size_t side, bool include_dc) {
    if (side == 0 || amps.n < side) {
        throw Error(ErrorCode::InvalidDimensions,
                    "feature side must be in [1, N], got " + std::to_string(side) + " for N=" + std::to_string(amps.n));
    }
    AmplitudeMap source = amps;
    if (!include_dc) {
        source.at(0, 0) = 0.0;
    }
    const AmplitudeMap centered = center_shift(source);
    const auto edges = block_edges(amps.n, side);

    FeatureVector fv{side, std::vector<double>(side * side, 0.0)};
    for (std::size_t br = 0; br < side; ++br) {
        for (std::size_t bc = 0; bc < side; ++bc) {
            double acc = 0.0;
            for (std::size_t r = edges[br]; r < edges[br + 1]; ++r) {
                for (std::size_t c = edges[bc]; c < edges[bc + 1]; ++c) {
                    acc += centered.at(r, c);
                }
            }
            const auto cells = static_cast<double>((edges[br + 1] - edges[br]) * (edges[bc + 1] - edges[bc]));
            fv.data[br * side + bc] = acc / cells;
        }
    }

    double norm_sq = 0.0;
    for (double v : fv.data) {
        norm_sq += v * v;
    }
    // Rounding leaves ~1e-14 relative residue off DC for a constant image; treat that as zero.
    const double scale = std::max(1.0, *std::max_element(amps.values.begin(), amps.values.end()));
    if (!(std::sqrt(norm_sq) > kDegenerateTolerance * scale)) {
        throw Error(ErrorCode::DegenerateFeature, "amplitude map is zero outside the excluded DC bin");
    }
    const double norm = std::sqrt(norm_sq);
    for (double& v : fv.data) {
        v /= norm;
    }
    return fv;
}

std::vector<std::uint8_t> encode_features(const FeatureVector& fv) {
    detail::ByteWriter w;
    w.put(static_cast<std::uint32_t>(fv.side));
    for (double v : fv.data) {
        w.put_f64(v);
    }
    return std::move(w).take();
}

FeatureVector decode_features(std::span<const std::uint8_t> bytes) {
    detail::ByteReader r(bytes);
    FeatureVector fv;
    fv.side = r.get<std::uint32_t>();
    const std::size_t count = fv.side * fv.side;
    if (r.remaining() != count * sizeof(double)) {
        throw Error(ErrorCode::CorruptData, "feature payload size does not match side");
    }
    fv.data.resize(count);
    for (double& v : fv.data) {
        v = r.get_f64();
    }
    return fv;
}

} // namespace puckergrade::spectral
