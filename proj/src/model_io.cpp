#include "puckergrade/model_io.hpp"

#include "puckergrade/detail/byte_io.hpp"
#include "puckergrade/error.hpp"
#include "puckergrade/image.hpp"

#include <algorithm>
#include <limits>

namespace puckergrade::som {

namespace {

ClassifyMode mode_from_tag(std::uint8_t tag) {
    switch (tag) {
    case 0: return ClassifyMode::BmuDistance;
    case 1: return ClassifyMode::DotProduct;
    default: throw Error(ErrorCode::CorruptData, "unknown classify-mode tag " + std::to_string(tag));
    }
}

} // namespace

std::vector<std::uint8_t> encode_model(const Model& model, const std::optional<std::string>& config) {
    constexpr auto u32_max = std::numeric_limits<std::uint32_t>::max();
    if (model.rows() > u32_max || model.cols() > u32_max || model.dim() > u32_max) {
        throw Error(ErrorCode::InvalidDimensions, "model dimensions exceed the u32 file fields");
    }
    detail::ByteWriter w;
    w.put_string(std::string(config ? kMagicV2 : kMagicV1));
    w.put(static_cast<std::uint32_t>(model.rows()));
    w.put(static_cast<std::uint32_t>(model.cols()));
    w.put(static_cast<std::uint32_t>(model.dim()));
    w.put(static_cast<std::uint64_t>(model.seed()));
    for (double v : model.weights()) {
        w.put_f64(v);
    }
    w.put_bytes(model.labels());
    w.put(static_cast<std::uint8_t>(model.classify_mode()));
    if (config) {
        w.put(static_cast<std::uint32_t>(config->size()));
        w.put_string(*config);
    }
    return std::move(w).take();
}

ModelFile decode_model(std::span<const std::uint8_t> bytes) {
    detail::ByteReader r(bytes);
    const auto magic_bytes = r.get_bytes(kMagicV1.size());
    const std::string magic(magic_bytes.begin(), magic_bytes.end());
    if (magic != kMagicV1 && magic != kMagicV2) {
        throw Error(ErrorCode::UnsupportedFormat, "not a PKSM model file");
    }
    const std::size_t rows = r.get<std::uint32_t>();
    const std::size_t cols = r.get<std::uint32_t>();
    const std::size_t dim = r.get<std::uint32_t>();
    const std::uint64_t seed = r.get<std::uint64_t>();
    if (rows == 0 || cols == 0 || dim == 0) {
        throw Error(ErrorCode::CorruptData, "model dimensions must be positive");
    }
    const std::size_t nodes = rows * cols;
    if (r.remaining() / sizeof(double) / dim < nodes) {
        throw Error(ErrorCode::CorruptData, "truncated weight block");
    }
    std::vector<double> weights(nodes * dim);
    for (double& v : weights) {
        v = r.get_f64();
    }
    const auto label_bytes = r.get_bytes(nodes);
    std::vector<std::uint8_t> labels(label_bytes.begin(), label_bytes.end());
    if (std::any_of(labels.begin(), labels.end(), [](std::uint8_t l) { return l > Grade::kMax; })) {
        throw Error(ErrorCode::CorruptData, "node label out of range");
    }
    const ClassifyMode mode = mode_from_tag(r.get<std::uint8_t>());

    std::optional<std::string> config;
    if (magic == kMagicV2) {
        const std::size_t length = r.get<std::uint32_t>();
        const auto text = r.get_bytes(length);
        config.emplace(text.begin(), text.end());
    }
    if (r.remaining() != 0) {
        throw Error(ErrorCode::CorruptData, "trailing bytes after model payload");
    }
    return ModelFile{Model(rows, cols, dim, seed, std::move(weights), std::move(labels), mode), std::move(config)};
}

void save_model(const std::filesystem::path& path, const Model& model, const std::optional<std::string>& config) {
    write_file(path, encode_model(model, config));
}

ModelFile load_model(const std::filesystem::path& path) {
    return decode_model(read_file(path));
}

} // namespace puckergrade::som
