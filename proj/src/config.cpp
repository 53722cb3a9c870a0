#include "puckergrade/config.hpp"

#include "puckergrade/error.hpp"
#include "puckergrade/image.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace puckergrade {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error(ErrorCode::InvalidConfig, "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        bad_value(key, value);
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    bad_value(key, value);
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

} // namespace

std::string to_string(som::ClassifyMode mode) {
    return mode == som::ClassifyMode::DotProduct ? "dot-product" : "bmu-distance";
}

som::ClassifyMode parse_classify_mode(std::string_view text) {
    if (text == "bmu-distance") {
        return som::ClassifyMode::BmuDistance;
    }
    if (text == "dot-product") {
        return som::ClassifyMode::DotProduct;
    }
    bad_value("classify_mode", text);
}

som::TrainingSchedule PipelineConfig::schedule(std::size_t sample_count) const {
    som::TrainingSchedule s = som::TrainingSchedule::defaults(som_rows, som_cols, sample_count);
    s.alpha0 = alpha0;
    if (d0) {
        s.d0 = *d0;
    }
    if (iterations) {
        s.iterations = *iterations;
    }
    return s;
}

PipelineConfig PipelineConfig::resolved(std::size_t sample_count) const {
    PipelineConfig out = *this;
    const som::TrainingSchedule s = schedule(sample_count);
    out.d0 = s.d0;
    out.iterations = s.iterations;
    return out;
}

void PipelineConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
    if (transform_size < 1) {
        fail("transform_size must be >= 1");
    }
    if (feature_side < 1 || feature_side > transform_size) {
        fail("feature_side must lie in [1, transform_size]");
    }
    if (som_rows < 1 || som_cols < 1) {
        fail("som_rows and som_cols must be >= 1");
    }
    if (!(alpha0 > 0.0 && alpha0 <= 1.0)) {
        fail("alpha0 must lie in (0, 1]");
    }
    if (d0 && !(*d0 >= 0.0 && std::isfinite(*d0))) {
        fail("d0 must be finite and >= 0");
    }
    if (iterations && *iterations < 1) {
        fail("iterations must be >= 1");
    }
}

std::string PipelineConfig::to_text() const {
    std::ostringstream out;
    out << "transform_size = " << transform_size << "\n"
        << "feature_side = " << feature_side << "\n"
        << "include_dc = " << (include_dc ? "true" : "false") << "\n"
        << "binarize = " << (binarize ? "true" : "false") << "\n"
        << "som_rows = " << som_rows << "\n"
        << "som_cols = " << som_cols << "\n"
        << "alpha0 = " << format_double(alpha0) << "\n"
        << "d0 = " << (d0 ? format_double(*d0) : "auto") << "\n"
        << "iterations = " << (iterations ? std::to_string(*iterations) : "auto") << "\n"
        << "classify_mode = " << to_string(classify_mode) << "\n"
        << "seed = " << seed << "\n";
    return out.str();
}

PipelineConfig PipelineConfig::parse(std::string_view text) {
    PipelineConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "transform_size") {
            cfg.transform_size = parse_number<std::size_t>(key, value);
        } else if (key == "feature_side") {
            cfg.feature_side = parse_number<std::size_t>(key, value);
        } else if (key == "include_dc") {
            cfg.include_dc = parse_bool(key, value);
        } else if (key == "binarize") {
            cfg.binarize = parse_bool(key, value);
        } else if (key == "som_rows") {
            cfg.som_rows = parse_number<std::size_t>(key, value);
        } else if (key == "som_cols") {
            cfg.som_cols = parse_number<std::size_t>(key, value);
        } else if (key == "alpha0") {
            cfg.alpha0 = parse_number<double>(key, value);
        } else if (key == "d0") {
            cfg.d0 = value == "auto" ? std::nullopt : std::optional<double>(parse_number<double>(key, value));
        } else if (key == "iterations") {
            cfg.iterations =
                value == "auto" ? std::nullopt : std::optional<std::size_t>(parse_number<std::size_t>(key, value));
        } else if (key == "classify_mode") {
            cfg.classify_mode = parse_classify_mode(value);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(key, value);
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown key '" + std::string(key) + "'");
        }
    }
    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void apply_environment(PipelineConfig& config) {
    const char* seed = std::getenv("PUCKERGRADE_SEED");
    if (seed == nullptr || *seed == '\0') {
        return;
    }
    config.seed = parse_number<std::uint64_t>("PUCKERGRADE_SEED", trim(seed));
}

} // namespace puckergrade
