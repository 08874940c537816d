#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbsc/codec.hpp"
#include "mbsc/signal.hpp"

namespace mbsc {

// Bits per scalar sample.
double compression_ratio(std::uint64_t total_bits, std::uint64_t scalar_samples);

struct Distortion {
    double mae = 0.0;
    // +inf when the reconstruction is exact.
    double snr_db = 0.0;
    std::int64_t max_abs = 0;
};

// Throws ShapeMismatch unless both signals have the same dimensions.
Distortion distortion(const SignalMatrix& original, const SignalMatrix& reconstructed);
std::vector<Distortion> distortion_per_channel(const SignalMatrix& original, const SignalMatrix& reconstructed);

struct EvalReport {
    unsigned delta = 0;
    double cr_bps = 0.0;
    double mae = 0.0;
    double mae_uv = 0.0;
    double snr_db = 0.0;
    std::int64_t mstarae = 0;
    std::uint64_t stop_time = 0;
    double encode_us = 0.0;
    double decode_us = 0.0;
    // Filled only by per-channel sweeps.
    std::vector<double> channel_cr_bps;
    std::vector<Distortion> channels;
};

// One encode/decode/measure cycle per delta. `scale_uv` converts sample
// counts to microvolts for the mae_uv column.
std::vector<EvalReport> rd_sweep(const SignalMatrix& signal, const CodecConfig& config,
                                 const std::optional<CodingTree>& tree, std::span<const unsigned> deltas,
                                 double scale_uv = 1.0, bool per_channel = false);

inline constexpr const char* kReportHeader = "delta,cr_bps,mae,mae_uv,snr_db,mstarae,n_s,enc_us,dec_us";
inline constexpr const char* kChannelReportHeader = "delta,channel,cr_bps,mae,mae_uv,snr_db,mstarae";

std::string format_report_csv(std::span<const EvalReport> reports, double scale_uv = 1.0, bool per_channel = false);

}  // namespace mbsc
