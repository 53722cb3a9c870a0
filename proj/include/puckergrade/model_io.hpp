#pragma once

#include "puckergrade/som.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace puckergrade::som {

// Layout (all integers little-endian):
//   magic[8] | u32 rows | u32 cols | u32 dim | u64 seed
//   | rows*cols*dim f64 weights | rows*cols u8 labels | u8 classify mode
//   PKSM0002 only: | u32 config length | config bytes (UTF-8 key = value text)
inline constexpr std::string_view kMagicV1 = "PKSM0001";
inline constexpr std::string_view kMagicV2 = "PKSM0002";

struct ModelFile {
    Model model;
    std::optional<std::string> config; // present for PKSM0002
};

// Writes PKSM0002 when config is given, PKSM0001 otherwise.
[[nodiscard]] std::vector<std::uint8_t> encode_model(const Model& model, const std::optional<std::string>& config);
[[nodiscard]] ModelFile decode_model(std::span<const std::uint8_t> bytes);

void save_model(const std::filesystem::path& path, const Model& model, const std::optional<std::string>& config);
[[nodiscard]] ModelFile load_model(const std::filesystem::path& path);

} // namespace puckergrade::som
