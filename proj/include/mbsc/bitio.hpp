#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mbsc {

// MSB-first bit writer over a growable byte buffer. Bits are packed without
// any alignment; padding is only added by flush() at the end of a stream.
class BitSink {
public:
    BitSink() = default;

    // Appends the n low-order bits of value, most significant first. n <= 64.
    void write_bits(std::uint64_t value, unsigned n);
    void write_bit(bool bit);
    // Appends `count` copies of `bit`.
    void write_run(bool bit, std::uint64_t count);

    std::uint64_t bit_count() const noexcept { return bitpos_; }

    // Returns the packed bytes; the final partial byte is zero-padded.
    // Writing may continue afterwards.
    const std::vector<std::uint8_t>& flush() noexcept { return buffer_; }
    std::vector<std::uint8_t> take() && { return std::move(buffer_); }

private:
    std::vector<std::uint8_t> buffer_;
    std::uint64_t bitpos_ = 0;
};

// MSB-first bit reader. Reading past the end throws EndOfStream.
class BitSource {
public:
    BitSource() = default;
    explicit BitSource(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint64_t read_bits(unsigned n);
    bool read_bit();
    // Counts consecutive one-bits, stopping after a zero-bit (consumed) or
    // once `limit` ones have been read (no terminator consumed).
    std::uint64_t read_unary(std::uint64_t limit);

    std::uint64_t position() const noexcept { return cursor_; }
    std::uint64_t bits_remaining() const noexcept { return bytes_.size() * 8 - cursor_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t cursor_ = 0;
};

}  // namespace mbsc
