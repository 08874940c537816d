#include "mbsc/bitio.hpp"

#include <cassert>

#include "mbsc/error.hpp"

namespace mbsc {

void BitSink::write_bits(std::uint64_t value, unsigned n) {
    assert(n <= 64);
    assert(n == 64 || value < (std::uint64_t{1} << n));
    while (n > 0) {
        const unsigned used = static_cast<unsigned>(bitpos_ & 7u);
        if (used == 0) buffer_.push_back(0);
        const unsigned room = 8 - used;
        const unsigned take = n < room ? n : room;
        const auto chunk = static_cast<std::uint8_t>((value >> (n - take)) & ((1u << take) - 1u));
        buffer_.back() |= static_cast<std::uint8_t>(chunk << (room - take));
        n -= take;
        bitpos_ += take;
    }
}

void BitSink::write_bit(bool bit) { write_bits(bit ? 1u : 0u, 1); }

void BitSink::write_run(bool bit, std::uint64_t count) {
    const std::uint64_t ones = ~std::uint64_t{0};
    while (count >= 64) {
        write_bits(bit ? ones : 0, 64);
        count -= 64;
    }
    if (count > 0) write_bits(bit ? (ones >> (64 - count)) : 0, static_cast<unsigned>(count));
}

std::uint64_t BitSource::read_bits(unsigned n) {
    assert(n <= 64);
    if (n > bits_remaining()) {
        throw Error(ErrorCode::EndOfStream, "read of " + std::to_string(n) + " bits past end of stream");
    }
    std::uint64_t value = 0;
    while (n > 0) {
        const unsigned used = static_cast<unsigned>(cursor_ & 7u);
        const unsigned avail = 8 - used;
        const unsigned take = n < avail ? n : avail;
        const unsigned byte = bytes_[static_cast<std::size_t>(cursor_ >> 3)];
        const unsigned chunk = (byte >> (avail - take)) & ((1u << take) - 1u);
        value = (take == 64 ? 0 : value << take) | chunk;
        n -= take;
        cursor_ += take;
    }
    return value;
}

bool BitSource::read_bit() { return read_bits(1) != 0; }

std::uint64_t BitSource::read_unary(std::uint64_t limit) {
    std::uint64_t ones = 0;
    while (ones < limit) {
        if (!read_bit()) return ones;
        ++ones;
    }
    return ones;
}

}  // namespace mbsc
