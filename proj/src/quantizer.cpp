#include "mbsc/quantizer.hpp"

#include <bit>
#include <string>

#include "mbsc/error.hpp"

namespace mbsc {

void AlphabetSpec::validate() const {
    if (bits < kMinBits || bits > kMaxBits) {
        throw Error(ErrorCode::InvalidArgument, "bits per sample must be in [8, 16], got " + std::to_string(bits));
    }
}

std::int64_t quantize_error(std::int64_t e, unsigned delta) noexcept {
    const std::int64_t step = 2 * std::int64_t{delta} + 1;
    const std::int64_t q = ((e < 0 ? -e : e) + delta) / step;
    return e < 0 ? -q : q;
}

ErrorAlphabet::ErrorAlphabet(AlphabetSpec alphabet, unsigned delta)
    : alphabet_(alphabet), delta_(delta), step_(2 * std::int64_t{delta} + 1) {
    alphabet_.validate();
    const std::int64_t span = alphabet_.size() + 2 * std::int64_t{delta};
    modulus_ = (span + step_ - 1) / step_;
    raw_bits_ = static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(modulus_ - 1)));
}

std::int64_t ErrorAlphabet::reduce(std::int64_t q) const noexcept {
    std::int64_t r = q % modulus_;
    if (r < 0) r += modulus_;
    const std::int64_t upper = (modulus_ + 1) / 2 - 1;
    if (r > upper) r -= modulus_;
    return r;
}

bool ErrorAlphabet::is_residue(std::int64_t r) const noexcept {
    return r >= -(modulus_ / 2) && r <= (modulus_ + 1) / 2 - 1;
}

std::int64_t ErrorAlphabet::residue_for(std::int32_t x, std::int32_t prediction) const noexcept {
    return reduce(quantize_error(std::int64_t{x} - prediction, delta_));
}

std::int32_t ErrorAlphabet::reconstruct(std::int32_t prediction, std::int64_t residue) const noexcept {
    const std::int64_t low = std::int64_t{alphabet_.lo()} - delta_;
    const std::int64_t high = std::int64_t{alphabet_.hi()} + delta_;
    const std::int64_t period = modulus_ * step_;
    std::int64_t y = prediction + residue * step_;
    while (y < low) y += period;
    while (y > high) y -= period;
    return alphabet_.clamp(y);
}

}  // namespace mbsc
