#pragma once

#include <cstdint>

namespace mbsc {

// Signed sample range [-2^(b-1), 2^(b-1) - 1].
struct AlphabetSpec {
    unsigned bits = 16;

    static constexpr unsigned kMinBits = 8;
    static constexpr unsigned kMaxBits = 16;

    std::int32_t lo() const noexcept { return -(std::int32_t{1} << (bits - 1)); }
    std::int32_t hi() const noexcept { return (std::int32_t{1} << (bits - 1)) - 1; }
    std::int64_t size() const noexcept { return std::int64_t{1} << bits; }
    bool contains(std::int64_t v) const noexcept { return v >= lo() && v <= hi(); }
    std::int32_t clamp(std::int64_t v) const noexcept {
        return static_cast<std::int32_t>(v < lo() ? lo() : (v > hi() ? hi() : v));
    }

    // Throws InvalidArgument unless kMinBits <= bits <= kMaxBits.
    void validate() const;

    friend bool operator==(const AlphabetSpec&, const AlphabetSpec&) = default;
};

}  // namespace mbsc
