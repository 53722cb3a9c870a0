#include "puckergrade/error.hpp"
#include "puckergrade/image.hpp"
#include "puckergrade/spectral.hpp"
#include "puckergrade/synth.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

namespace puckergrade {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return {s.begin(), s.end()};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("puckergrade_test_" + name);
}

template <typename F>
ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::Io;
}

TEST(ImageCore, DecodesTinyP5) {
    auto bytes = bytes_of("P5\n2 2\n255\n");
    for (std::uint8_t v : {0, 255, 128, 64}) {
        bytes.push_back(v);
    }
    const AnyImage img = decode_image(bytes);
    ASSERT_TRUE(std::holds_alternative<GrayImage>(img));
    EXPECT_EQ(std::get<GrayImage>(img), GrayImage(2, 2, {0, 255, 128, 64}));
}

TEST(ImageCore, P5HeaderCommentsAreSkipped) {
    auto bytes = bytes_of("P5\n# made by hand\n1 1\n255\n");
    bytes.push_back(7);
    EXPECT_EQ(decode_pgm(bytes), GrayImage(1, 1, {7}));
}

TEST(ImageCore, ZeroByteFileIsCorrupt) {
    const auto path = temp_path("empty.pgm");
    write_file(path, {});
    EXPECT_EQ(error_code_of([&] { (void)load_image(path); }), ErrorCode::CorruptData);
}

TEST(ImageCore, MissingFile) {
    EXPECT_EQ(error_code_of([] { (void)load_image("/nonexistent/definitely/not/here.png"); }),
              ErrorCode::FileNotFound);
}

TEST(ImageCore, UnsupportedFormats) {
    EXPECT_EQ(error_code_of([] { (void)decode_image(bytes_of("GIF89a........")); }), ErrorCode::UnsupportedFormat);
    // ASCII PGM is not accepted.
    EXPECT_EQ(error_code_of([] { (void)decode_image(bytes_of("P2\n1 1\n255\n7\n")); }), ErrorCode::UnsupportedFormat);
    EXPECT_EQ(error_code_of([] { (void)decode_image(bytes_of("P5\n1 1\n65535\n\x01\x02")); }),
              ErrorCode::UnsupportedFormat);
}

TEST(ImageCore, CorruptPgm) {
    EXPECT_EQ(error_code_of([] { (void)decode_image(bytes_of("P5\n4 4\n255\n\x01\x02")); }), ErrorCode::CorruptData);
    EXPECT_EQ(error_code_of([] { (void)decode_image(bytes_of("P5\n0 4\n255\n")); }), ErrorCode::CorruptData);
    EXPECT_EQ(error_code_of([] { (void)decode_image(bytes_of("P5\n-1 4\n255\n")); }), ErrorCode::CorruptData);
    EXPECT_EQ(error_code_of([] { (void)decode_image(bytes_of("P5\n")); }), ErrorCode::CorruptData);
}

TEST(ImageCore, CorruptPng) {
    auto png = encode_png(GrayImage(4, 4, 9));
    png.resize(png.size() / 2);
    EXPECT_EQ(error_code_of([&] { (void)decode_image(png); }), ErrorCode::CorruptData);
}

TEST(ImageCore, SynthPngRoundTripIsPixelIdentical) {
    const GrayImage original = synth::generate_sample(Grade(2), 42, 4);
    const auto path = temp_path("roundtrip4.png");
    save_png(original, path);
    const AnyImage reloaded = load_image(path);
    ASSERT_TRUE(std::holds_alternative<GrayImage>(reloaded));
    EXPECT_EQ(std::get<GrayImage>(reloaded), original);
}

TEST(ImageCore, RgbPngRoundTrip) {
    std::mt19937 gen(3);
    std::vector<Rgb> px(5 * 3);
    for (Rgb& p : px) {
        p = Rgb{static_cast<std::uint8_t>(gen()), static_cast<std::uint8_t>(gen()), static_cast<std::uint8_t>(gen())};
    }
    const RgbImage original(5, 3, px);
    const AnyImage reloaded = decode_image(encode_png(original));
    ASSERT_TRUE(std::holds_alternative<RgbImage>(reloaded));
    EXPECT_EQ(std::get<RgbImage>(reloaded), original);
}

TEST(ImageCore, PgmEncodeDecodeReproducesBytes) {
    std::mt19937 gen(11);
    std::vector<std::uint8_t> px(7 * 5);
    for (auto& v : px) {
        v = static_cast<std::uint8_t>(gen());
    }
    const auto encoded = encode_pgm(GrayImage(7, 5, px));
    EXPECT_EQ(encode_pgm(decode_pgm(encoded)), encoded);
}

TEST(ImageCore, GrayscaleWeights) {
    EXPECT_EQ(luma({255, 255, 255}), 255);
    EXPECT_EQ(luma({0, 0, 0}), 0);
    // 29.9 + 88.05 + 22.8 = 140.75
    EXPECT_EQ(luma({100, 150, 200}), 141);
    // 0.299 * 1 + 0.587 * 1 = 0.886 -> 1; 0.5 exactly rounds up
    EXPECT_EQ(luma({1, 1, 0}), 1);
}

TEST(ImageCore, GrayTriplesAreFixedPoints) {
    for (int g = 0; g <= 255; ++g) {
        const auto v = static_cast<std::uint8_t>(g);
        EXPECT_EQ(luma({v, v, v}), v);
    }
}

TEST(ImageCore, ToGrayscaleImage) {
    const RgbImage rgb(2, 1, {Rgb{255, 255, 255}, Rgb{100, 150, 200}});
    EXPECT_EQ(to_grayscale(rgb), GrayImage(2, 1, {255, 141}));
}

TEST(ImageCore, InvalidDimensionsRejected) {
    EXPECT_THROW(GrayImage(0, 3), Error);
    EXPECT_THROW(GrayImage(2, 2, std::vector<std::uint8_t>(3)), Error);
}

} // namespace
} // namespace puckergrade
