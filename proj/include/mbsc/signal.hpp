#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mbsc/alphabet.hpp"

namespace mbsc {

// m channels x N time instants of integer samples, stored channel-major.
class SignalMatrix {
public:
    SignalMatrix() = default;
    SignalMatrix(std::size_t channels, std::size_t samples, AlphabetSpec alphabet = {})
        : channels_(channels), samples_(samples), alphabet_(alphabet), data_(channels * samples, 0) {}

    std::size_t channels() const noexcept { return channels_; }
    std::size_t samples() const noexcept { return samples_; }
    const AlphabetSpec& alphabet() const noexcept { return alphabet_; }
    void set_alphabet(AlphabetSpec a) noexcept { alphabet_ = a; }
    double sampling_rate() const noexcept { return rate_; }
    void set_sampling_rate(double hz) noexcept { rate_ = hz; }

    std::int32_t& at(std::size_t channel, std::size_t n) noexcept { return data_[channel * samples_ + n]; }
    std::int32_t at(std::size_t channel, std::size_t n) const noexcept { return data_[channel * samples_ + n]; }

    std::span<const std::int32_t> channel(std::size_t c) const noexcept {
        return {data_.data() + c * samples_, samples_};
    }
    void gather(std::size_t n, std::span<std::int32_t> out) const noexcept {
        for (std::size_t c = 0; c < channels_; ++c) out[c] = at(c, n);
    }
    void scatter(std::size_t n, std::span<const std::int32_t> in) noexcept {
        for (std::size_t c = 0; c < channels_; ++c) at(c, n) = in[c];
    }

    // Throws OutOfDeclaredRange if any value lies outside the alphabet.
    void validate() const;

    friend bool operator==(const SignalMatrix& a, const SignalMatrix& b) noexcept {
        return a.channels_ == b.channels_ && a.samples_ == b.samples_ && a.data_ == b.data_;
    }

private:
    std::size_t channels_ = 0;
    std::size_t samples_ = 0;
    AlphabetSpec alphabet_{};
    double rate_ = 0.0;
    std::vector<std::int32_t> data_;
};

}  // namespace mbsc
