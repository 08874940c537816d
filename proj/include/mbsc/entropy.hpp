#pragma once

#include <cstdint>

#include "mbsc/bitio.hpp"

namespace mbsc {

// Signed to unsigned folding: 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ...
constexpr std::uint64_t rice_map(std::int64_t e) noexcept {
    return e >= 0 ? static_cast<std::uint64_t>(e) << 1 : (static_cast<std::uint64_t>(-(e + 1)) << 1) | 1u;
}

constexpr std::int64_t rice_unmap(std::uint64_t v) noexcept {
    return (v & 1u) ? -static_cast<std::int64_t>(v >> 1) - 1 : static_cast<std::int64_t>(v >> 1);
}

// Code word length limits. A unary quotient of quotient_limit ones announces
// an escaped value sent in raw_bits plain bits.
struct EscapeSpec {
    unsigned tau = 64;
    unsigned raw_bits = 16;
    unsigned quotient_limit = 47;

    // Throws InvalidArgument when tau leaves no room for a unary quotient.
    static EscapeSpec make(unsigned tau, unsigned raw_bits);

    friend bool operator==(const EscapeSpec&, const EscapeSpec&) = default;
};

// Error statistics of one coding context, JPEG-LS style: A is the sum of
// absolute coded errors and N the number of coded samples, both halved when
// N reaches the halving interval.
struct GolombContext {
    std::uint64_t A = 2;
    std::uint64_t N = 1;
    std::uint32_t halving_interval = 16;

    // A = max(2, alphabet_size / 16), N = 1.
    static GolombContext initial(std::uint64_t alphabet_size, std::uint32_t halving_interval);

    void update(std::int64_t e) noexcept;

    friend bool operator==(const GolombContext&, const GolombContext&) = default;
};

// Smallest k with N * 2^k >= A.
unsigned select_order(const GolombContext& ctx) noexcept;

// Bits used to code mapped value v with Rice parameter k.
unsigned code_length(std::uint64_t v, unsigned k, const EscapeSpec& esc) noexcept;

// Emits one code word for v with parameter k. Returns the emitted bit count.
unsigned write_codeword(BitSink& sink, std::uint64_t v, unsigned k, const EscapeSpec& esc);
std::uint64_t read_codeword(BitSource& source, unsigned k, const EscapeSpec& esc);

// Codes e (already reduced to the error alphabet) with the context's current
// parameter and then updates the context. Returns the emitted bit count.
unsigned encode_error(BitSink& sink, std::int64_t e, GolombContext& ctx, const EscapeSpec& esc);
std::int64_t decode_error(BitSource& source, GolombContext& ctx, const EscapeSpec& esc);

// Same length and context update as encode_error, without producing bits.
unsigned measure_error(std::int64_t e, GolombContext& ctx, const EscapeSpec& esc) noexcept;

}  // namespace mbsc
