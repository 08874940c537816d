#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mbsc/signal.hpp"
#include "mbsc/topology.hpp"

namespace mbsc {

// One row per time instant, one column per channel. Without `bits`, the
// smallest of 8/12/16 bits covering the data is chosen.
SignalMatrix parse_csv(std::string_view text, std::optional<unsigned> bits = std::nullopt);
SignalMatrix load_csv(const std::filesystem::path& path, std::optional<unsigned> bits = std::nullopt);
std::string format_csv(const SignalMatrix& signal);
void store_csv(const SignalMatrix& signal, const std::filesystem::path& path);

struct RawSidecar {
    std::size_t channels = 0;
    unsigned bits = 16;
    double rate = 0.0;
};

RawSidecar parse_sidecar(std::string_view json_text);
std::string format_sidecar(const RawSidecar& sidecar);

// Little-endian int16 samples, channel-interleaved per time instant.
SignalMatrix load_raw(const std::filesystem::path& path, const std::filesystem::path& sidecar);
SignalMatrix parse_raw(std::string_view bytes, const RawSidecar& sidecar);
void store_raw(const SignalMatrix& signal, const std::filesystem::path& path, const std::filesystem::path& sidecar);

// Layout CSV: name,kind,x,y,z per channel, kind in {position, direction}.
// A leading header row starting with "name" is skipped.
SensorLayout parse_layout(std::string_view text);
SensorLayout load_layout(const std::filesystem::path& path);
std::string format_layout(const SensorLayout& layout);

enum class Coupling { Chain, Star };

struct SynthOptions {
    std::uint64_t seed = 1;
    std::size_t channels = 4;
    std::size_t samples = 1000;
    AlphabetSpec alphabet{};
    Coupling coupling = Coupling::Chain;
    // Std of each coupled channel's own AR(1) noise, relative to channel 0.
    double noise_scale = 0.3;
    // Gain applied to the coupled channel's lag 0..2 mix.
    double alpha = 0.9;
    std::array<double, 3> lag_mix{0.6, 0.3, 0.1};
    // Std of the loudest channel as a fraction of the alphabet size.
    double amplitude = 1.0 / 12.0;
};

// Stable sparse MVAR process: channel 0 is AR(3); channel i adds AR(1) noise
// to alpha * (mix of lags 0..2 of its coupled channel), where the coupled
// channel is i-1 (chain) or 0 (star). Deterministic in the seed.
SignalMatrix synth_mvar(const SynthOptions& options);

// Sensors on a line at x = 0, 1, 2, ...; its geometry tree is the chain.
SensorLayout line_layout(std::size_t channels);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mbsc
