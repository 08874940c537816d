#include "mbsc/entropy.hpp"

#include <algorithm>
#include <string>

#include "mbsc/error.hpp"

namespace mbsc {

EscapeSpec EscapeSpec::make(unsigned tau, unsigned raw_bits) {
    if (tau < raw_bits + 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "code word bound tau=" + std::to_string(tau) + " too small for " + std::to_string(raw_bits) +
                        " raw bits");
    }
    return EscapeSpec{tau, raw_bits, tau - raw_bits - 1};
}

GolombContext GolombContext::initial(std::uint64_t alphabet_size, std::uint32_t halving_interval) {
    return GolombContext{std::max<std::uint64_t>(2, alphabet_size / 16), 1, halving_interval};
}

void GolombContext::update(std::int64_t e) noexcept {
    A += static_cast<std::uint64_t>(e < 0 ? -e : e);
    ++N;
    if (N >= halving_interval) {
        A >>= 1;
        N = std::max<std::uint64_t>(1, N >> 1);
    }
}

unsigned select_order(const GolombContext& ctx) noexcept {
    unsigned k = 0;
    while (k < 63 && (ctx.N << k) < ctx.A) ++k;
    return k;
}

namespace {

// Orders beyond the raw width would only lengthen every code word.
unsigned clamp_order(unsigned k, const EscapeSpec& esc) noexcept { return std::min(k, esc.raw_bits); }

}  // namespace

unsigned code_length(std::uint64_t v, unsigned k, const EscapeSpec& esc) noexcept {
    const std::uint64_t q = v >> k;
    if (q < esc.quotient_limit) return static_cast<unsigned>(q) + 1 + k;
    return esc.quotient_limit + esc.raw_bits;
}

unsigned write_codeword(BitSink& sink, std::uint64_t v, unsigned k, const EscapeSpec& esc) {
    const std::uint64_t q = v >> k;
    if (q < esc.quotient_limit) {
        sink.write_run(true, q);
        sink.write_bit(false);
        if (k > 0) sink.write_bits(v & ((std::uint64_t{1} << k) - 1), k);
        return static_cast<unsigned>(q) + 1 + k;
    }
    sink.write_run(true, esc.quotient_limit);
    sink.write_bits(v, esc.raw_bits);
    return esc.quotient_limit + esc.raw_bits;
}

std::uint64_t read_codeword(BitSource& source, unsigned k, const EscapeSpec& esc) {
    const std::uint64_t q = source.read_unary(esc.quotient_limit);
    if (q < esc.quotient_limit) {
        const std::uint64_t r = k > 0 ? source.read_bits(k) : 0;
        return (q << k) | r;
    }
    if (source.bits_remaining() < esc.raw_bits) {
        throw Error(ErrorCode::MalformedStream, "escape prefix without raw payload");
    }
    return source.read_bits(esc.raw_bits);
}

unsigned encode_error(BitSink& sink, std::int64_t e, GolombContext& ctx, const EscapeSpec& esc) {
    const unsigned k = clamp_order(select_order(ctx), esc);
    const unsigned bits = write_codeword(sink, rice_map(e), k, esc);
    ctx.update(e);
    return bits;
}

std::int64_t decode_error(BitSource& source, GolombContext& ctx, const EscapeSpec& esc) {
    const unsigned k = clamp_order(select_order(ctx), esc);
    const std::int64_t e = rice_unmap(read_codeword(source, k, esc));
    ctx.update(e);
    return e;
}

unsigned measure_error(std::int64_t e, GolombContext& ctx, const EscapeSpec& esc) noexcept {
    const unsigned k = clamp_order(select_order(ctx), esc);
    const unsigned bits = code_length(rice_map(e), k, esc);
    ctx.update(e);
    return bits;
}

}  // namespace mbsc
