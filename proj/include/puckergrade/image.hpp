#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace puckergrade {

// 8-bit grayscale raster, row-major. Row index m, column index n.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] bool empty() const noexcept { return pixels_.empty(); }
    [[nodiscard]] bool is_square() const noexcept { return width_ == height_; }

    [[nodiscard]] std::uint8_t at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
    [[nodiscard]] std::uint8_t& at(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }

    [[nodiscard]] std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    [[nodiscard]] std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

class RgbImage {
public:
    RgbImage() = default;
    RgbImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::span<const Rgb> pixels() const noexcept { return pixels_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<Rgb> pixels_;
};

using AnyImage = std::variant<GrayImage, RgbImage>;

// BT.601 luma with round-half-up: (299 r + 587 g + 114 b + 500) / 1000.
[[nodiscard]] std::uint8_t luma(Rgb px) noexcept;
[[nodiscard]] GrayImage to_grayscale(const RgbImage& img);
[[nodiscard]] GrayImage to_grayscale(const AnyImage& img);

// Decodes PNG (by signature) or binary PGM (P5, maxval 255).
// PNG grayscale (with or without alpha) yields a GrayImage; anything with color yields an RgbImage.
[[nodiscard]] AnyImage load_image(const std::filesystem::path& path);
[[nodiscard]] AnyImage decode_image(std::span<const std::uint8_t> bytes);

// load_image followed by to_grayscale.
[[nodiscard]] GrayImage load_gray(const std::filesystem::path& path);

[[nodiscard]] std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
[[nodiscard]] GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

[[nodiscard]] std::vector<std::uint8_t> encode_png(const GrayImage& img);
[[nodiscard]] std::vector<std::uint8_t> encode_png(const RgbImage& img);
void save_png(const GrayImage& img, const std::filesystem::path& path);
void save_png(const RgbImage& img, const std::filesystem::path& path);

// Writes PNG or PGM depending on the extension (".pgm" selects PGM, anything else PNG).
void save_image(const GrayImage& img, const std::filesystem::path& path);

[[nodiscard]] std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace puckergrade
