#include "puckergrade/image.hpp"

#include "puckergrade/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace puckergrade {

namespace {

void check_dimensions(std::size_t width, std::size_t height, std::size_t count) {
    if (width == 0 || height == 0) {
        throw Error(ErrorCode::CorruptData, "image dimensions must be positive");
    }
    if (count != width * height) {
        throw Error(ErrorCode::CorruptData, "pixel count does not match dimensions");
    }
}

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool is_png(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= kPngSignature.size() &&
           std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin());
}

bool is_pgm(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5';
}

// ---------------------------------------------------------------------------
// libpng glue

struct ReadCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t offset = 0;
};

void png_read_from_cursor(png_structp png, png_bytep out, png_size_t length) {
    auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cursor->offset + length > cursor->bytes.size()) {
        png_error(png, "truncated PNG stream");
    }
    std::memcpy(out, cursor->bytes.data() + cursor->offset, length);
    cursor->offset += length;
}

void png_append_to_vector(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

void png_error_to_longjmp(png_structp png, png_const_charp) {
    png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

AnyImage decode_png(std::span<const std::uint8_t> bytes) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_longjmp,
                                             png_warning_ignore);
    if (png == nullptr) {
        throw Error(ErrorCode::Io, "png_create_read_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(ErrorCode::Io, "png_create_info_struct failed");
    }

    ReadCursor cursor{bytes, 0};
    // Declared before setjmp so they survive a longjmp back here.
    std::vector<std::uint8_t> raster;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    bool color = false;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::CorruptData, "malformed or truncated PNG");
    }

    png_set_read_fn(png, &cursor, png_read_from_cursor);
    png_read_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (bit_depth == 16) {
        png_set_strip_16(png);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    // Alpha (including palette tRNS expanded to alpha) is discarded, not composited.
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    color = (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) != 0;
    const std::size_t channels = png_get_channels(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    if (width == 0 || height == 0 || channels != (color ? 3U : 1U)) {
        png_error(png, "unexpected layout");
    }

    raster.resize(stride * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = raster.data() + y * stride;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (!color) {
        std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
        for (png_uint_32 y = 0; y < height; ++y) {
            std::memcpy(pixels.data() + static_cast<std::size_t>(y) * width, raster.data() + y * stride, width);
        }
        return GrayImage(width, height, std::move(pixels));
    }
    std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
        const std::uint8_t* row = raster.data() + y * stride;
        for (png_uint_32 x = 0; x < width; ++x) {
            pixels[static_cast<std::size_t>(y) * width + x] = Rgb{row[3 * x], row[3 * x + 1], row[3 * x + 2]};
        }
    }
    return RgbImage(width, height, std::move(pixels));
}

std::vector<std::uint8_t> encode_png_raw(std::size_t width, std::size_t height, int color_type,
                                         std::span<const std::uint8_t> raster) {
    const std::size_t channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_longjmp,
                                              png_warning_ignore);
    if (png == nullptr) {
        throw Error(ErrorCode::Io, "png_create_write_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::Io, "png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    std::vector<png_const_bytep> rows(height);
    for (std::size_t y = 0; y < height; ++y) {
        rows[y] = raster.data() + y * width * channels;
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::Io, "PNG encoding failed");
    }
    png_set_write_fn(png, &out, png_append_to_vector, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

// ---------------------------------------------------------------------------
// PGM

std::size_t skip_pgm_space(std::span<const std::uint8_t> bytes, std::size_t pos) {
    while (pos < bytes.size()) {
        if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') {
                ++pos;
            }
        } else if (std::isspace(bytes[pos]) != 0) {
            ++pos;
        } else {
            break;
        }
    }
    return pos;
}

long long read_pgm_int(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    pos = skip_pgm_space(bytes, pos);
    if (pos < bytes.size() && bytes[pos] == '-') {
        throw Error(ErrorCode::CorruptData, "negative PGM header field");
    }
    if (pos >= bytes.size() || std::isdigit(bytes[pos]) == 0) {
        throw Error(ErrorCode::CorruptData, "malformed PGM header");
    }
    long long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) != 0) {
        value = value * 10 + (bytes[pos] - '0');
        if (value > (1LL << 31)) {
            throw Error(ErrorCode::CorruptData, "PGM header field too large");
        }
        ++pos;
    }
    return value;
}

} // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {
    check_dimensions(width, height, pixels_.size());
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dimensions(width, height, pixels_.size());
}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dimensions(width, height, pixels_.size());
}

std::uint8_t luma(Rgb px) noexcept {
    const unsigned weighted = 299U * px.r + 587U * px.g + 114U * px.b + 500U;
    return static_cast<std::uint8_t>(std::min(weighted / 1000U, 255U));
}

GrayImage to_grayscale(const RgbImage& img) {
    std::vector<std::uint8_t> out;
    out.reserve(img.pixels().size());
    for (const Rgb& px : img.pixels()) {
        out.push_back(luma(px));
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

GrayImage to_grayscale(const AnyImage& img) {
    if (const auto* gray = std::get_if<GrayImage>(&img)) {
        return *gray;
    }
    return to_grayscale(std::get<RgbImage>(img));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(ErrorCode::FileNotFound, path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot open for writing: " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::Io, "write failed: " + path.string());
    }
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) {
        throw Error(ErrorCode::CorruptData, "empty file");
    }
    if (!is_pgm(bytes)) {
        throw Error(ErrorCode::UnsupportedFormat, "not a binary PGM (P5) stream");
    }
    std::size_t pos = 2;
    const long long width = read_pgm_int(bytes, pos);
    const long long height = read_pgm_int(bytes, pos);
    const long long maxval = read_pgm_int(bytes, pos);
    if (width <= 0 || height <= 0) {
        throw Error(ErrorCode::CorruptData, "PGM dimensions must be positive");
    }
    if (maxval != 255) {
        throw Error(ErrorCode::UnsupportedFormat, "only maxval 255 PGM is supported");
    }
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size() || std::isspace(bytes[pos]) == 0) {
        throw Error(ErrorCode::CorruptData, "missing raster after PGM header");
    }
    ++pos;
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < count) {
        throw Error(ErrorCode::CorruptData, "truncated PGM raster");
    }
    std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
    return GrayImage(static_cast<std::size_t>(width), static_cast<std::size_t>(height), std::move(pixels));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

AnyImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) {
        throw Error(ErrorCode::CorruptData, "empty file");
    }
    if (is_png(bytes)) {
        return decode_png(bytes);
    }
    if (is_pgm(bytes)) {
        return decode_pgm(bytes);
    }
    throw Error(ErrorCode::UnsupportedFormat, "expected PNG or binary PGM");
}

AnyImage load_image(const std::filesystem::path& path) {
    return decode_image(read_file(path));
}

GrayImage load_gray(const std::filesystem::path& path) {
    return to_grayscale(load_image(path));
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    return encode_png_raw(img.width(), img.height(), PNG_COLOR_TYPE_GRAY, img.pixels());
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    std::vector<std::uint8_t> raster;
    raster.reserve(img.pixels().size() * 3);
    for (const Rgb& px : img.pixels()) {
        raster.push_back(px.r);
        raster.push_back(px.g);
        raster.push_back(px.b);
    }
    return encode_png_raw(img.width(), img.height(), PNG_COLOR_TYPE_RGB, raster);
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    write_file(path, encode_pgm(img));
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
    write_file(path, encode_png(img));
}

void save_png(const RgbImage& img, const std::filesystem::path& path) {
    write_file(path, encode_png(img));
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") {
        save_pgm(img, path);
    } else {
        save_png(img, path);
    }
}

} // namespace puckergrade
