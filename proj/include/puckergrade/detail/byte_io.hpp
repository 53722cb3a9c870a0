#pragma once

#include "puckergrade/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace puckergrade::detail {

// Little-endian encoding of fixed-width integers and IEEE-754 doubles.
class ByteWriter {
public:
    template <typename T>
        requires std::is_integral_v<T>
    void put(T value) {
        using U = std::make_unsigned_t<T>;
        auto u = static_cast<U>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            bytes_.push_back(static_cast<std::uint8_t>(u & 0xFFU));
            u = static_cast<U>(u >> 8U);
        }
    }

    void put_f64(double value) { put(std::bit_cast<std::uint64_t>(value)); }

    void put_bytes(std::span<const std::uint8_t> raw) { bytes_.insert(bytes_.end(), raw.begin(), raw.end()); }

    void put_string(const std::string& s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

    [[nodiscard]] std::vector<std::uint8_t> take() && { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
        requires std::is_integral_v<T>
    [[nodiscard]] T get() {
        require(sizeof(T));
        std::make_unsigned_t<T> u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            u |= static_cast<std::make_unsigned_t<T>>(static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]) << (8U * i));
        }
        pos_ += sizeof(T);
        return static_cast<T>(u);
    }

    [[nodiscard]] double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }

    [[nodiscard]] std::span<const std::uint8_t> get_bytes(std::size_t count) {
        require(count);
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void require(std::size_t count) const {
        if (bytes_.size() - pos_ < count) {
            throw Error(ErrorCode::CorruptData, "unexpected end of data");
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace puckergrade::detail
