#pragma once

#include <cstdint>

#include "mbsc/alphabet.hpp"

namespace mbsc {

// sign(e) * floor((|e| + delta) / (2 delta + 1)); q * (2 delta + 1) is within
// delta of e.
std::int64_t quantize_error(std::int64_t e, unsigned delta) noexcept;

// Alphabet of quantized, modulo-reduced prediction errors for one stream.
//
// The modulus D = ceil((|X| + 2 delta) / (2 delta + 1)) makes candidate
// reconstructions x_hat + (q + kD)(2 delta + 1) lie at least |X| + 2 delta
// apart, so exactly one of them falls in [lo - delta, hi + delta].
class ErrorAlphabet {
public:
    ErrorAlphabet(AlphabetSpec alphabet, unsigned delta);

    std::int64_t modulus() const noexcept { return modulus_; }
    std::int64_t step() const noexcept { return step_; }
    unsigned delta() const noexcept { return delta_; }
    const AlphabetSpec& samples() const noexcept { return alphabet_; }
    // Bits needed for the largest Rice-mapped residue.
    unsigned raw_bits() const noexcept { return raw_bits_; }

    // q mod D, centered into [-floor(D/2), ceil(D/2) - 1].
    std::int64_t reduce(std::int64_t q) const noexcept;
    bool is_residue(std::int64_t r) const noexcept;

    // Encoder side: quantized residue for sample x against prediction x_hat.
    std::int64_t residue_for(std::int32_t x, std::int32_t prediction) const noexcept;
    // Reconstruction implied by a residue, clamped to the sample alphabet.
    std::int32_t reconstruct(std::int32_t prediction, std::int64_t residue) const noexcept;

private:
    AlphabetSpec alphabet_;
    unsigned delta_;
    std::int64_t step_;
    std::int64_t modulus_;
    unsigned raw_bits_;
};

}  // namespace mbsc
