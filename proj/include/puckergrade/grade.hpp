#pragma once

#include "puckergrade/error.hpp"

#include <compare>
#include <string>

namespace puckergrade {

// Seam quality grade: 5 is the best seam, 1 the worst.
class Grade {
public:
    static constexpr int kMin = 1;
    static constexpr int kMax = 5;
    static constexpr int kCount = kMax - kMin + 1;

    explicit Grade(int value) : value_(value) {
        if (value < kMin || value > kMax) {
            throw Error(ErrorCode::InvalidGrade, "grade must be in [1, 5], got " + std::to_string(value));
        }
    }

    [[nodiscard]] constexpr int value() const noexcept { return value_; }
    // 0-based index for 5-element tables.
    [[nodiscard]] constexpr std::size_t index() const noexcept { return static_cast<std::size_t>(value_ - kMin); }

    friend constexpr auto operator<=>(const Grade&, const Grade&) = default;

private:
    int value_;
};

} // namespace puckergrade
