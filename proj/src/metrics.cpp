#include "mbsc/metrics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mbsc/error.hpp"

namespace mbsc {

double compression_ratio(std::uint64_t total_bits, std::uint64_t scalar_samples) {
    if (scalar_samples == 0) throw Error(ErrorCode::InvalidArgument, "compression ratio of an empty signal");
    return static_cast<double>(total_bits) / static_cast<double>(scalar_samples);
}

namespace {

void check_shapes(const SignalMatrix& a, const SignalMatrix& b) {
    if (a.channels() != b.channels() || a.samples() != b.samples()) {
        throw Error(ErrorCode::ShapeMismatch, "signals differ in shape");
    }
}

struct Accumulator {
    long double abs_sum = 0, err_power = 0, signal_power = 0;
    std::int64_t max_abs = 0;
    std::uint64_t count = 0;

    void add(std::int64_t x, std::int64_t y) {
        const std::int64_t d = x - y;
        const std::int64_t a = d < 0 ? -d : d;
        abs_sum += a;
        err_power += static_cast<long double>(d) * d;
        signal_power += static_cast<long double>(x) * x;
        max_abs = std::max(max_abs, a);
        ++count;
    }

    Distortion result() const {
        Distortion d;
        d.max_abs = max_abs;
        d.mae = count ? static_cast<double>(abs_sum / count) : 0.0;
        if (err_power == 0) {
            d.snr_db = std::numeric_limits<double>::infinity();
        } else {
            d.snr_db = static_cast<double>(10.0L * std::log10(signal_power / err_power));
        }
        return d;
    }
};

}  // namespace

Distortion distortion(const SignalMatrix& original, const SignalMatrix& reconstructed) {
    check_shapes(original, reconstructed);
    Accumulator acc;
    for (std::size_t c = 0; c < original.channels(); ++c) {
        for (std::size_t n = 0; n < original.samples(); ++n) acc.add(original.at(c, n), reconstructed.at(c, n));
    }
    return acc.result();
}

std::vector<Distortion> distortion_per_channel(const SignalMatrix& original, const SignalMatrix& reconstructed) {
    check_shapes(original, reconstructed);
    std::vector<Distortion> out;
    for (std::size_t c = 0; c < original.channels(); ++c) {
        Accumulator acc;
        for (std::size_t n = 0; n < original.samples(); ++n) acc.add(original.at(c, n), reconstructed.at(c, n));
        out.push_back(acc.result());
    }
    return out;
}

std::vector<EvalReport> rd_sweep(const SignalMatrix& signal, const CodecConfig& config,
                                 const std::optional<CodingTree>& tree, std::span<const unsigned> deltas,
                                 double scale_uv, bool per_channel) {
    using clock = std::chrono::steady_clock;
    const double vectors = static_cast<double>(std::max<std::size_t>(signal.samples(), 1));
    std::vector<EvalReport> reports;
    for (unsigned delta : deltas) {
        CodecConfig cfg = config;
        cfg.delta = delta;

        const auto t0 = clock::now();
        StreamEncoder enc(signal.channels(), signal.alphabet(), cfg, tree);
        std::vector<std::int32_t> v(signal.channels());
        for (std::size_t n = 0; n < signal.samples(); ++n) {
            signal.gather(n, v);
            enc.push(v);
        }
        const std::uint64_t stop_time = enc.engine().learning() ? enc.engine().samples_processed() : enc.engine().stop_time();
        const std::vector<std::uint64_t> channel_bits = enc.channel_bits();
        const auto bytes = enc.finish();
        const auto t1 = clock::now();
        const SignalMatrix decoded = decode_stream(bytes);
        const auto t2 = clock::now();

        const Distortion d = distortion(signal, decoded);
        EvalReport r;
        r.delta = delta;
        r.cr_bps = compression_ratio(bytes.size() * 8, signal.samples() * signal.channels());
        r.mae = d.mae;
        r.mae_uv = d.mae * scale_uv;
        r.snr_db = d.snr_db;
        r.mstarae = d.max_abs;
        r.stop_time = cfg.mode == TreeMode::Adaptive ? stop_time : 0;
        r.encode_us = std::chrono::duration<double, std::micro>(t1 - t0).count() / vectors;
        r.decode_us = std::chrono::duration<double, std::micro>(t2 - t1).count() / vectors;
        if (per_channel) {
            r.channels = distortion_per_channel(signal, decoded);
            for (auto bits : channel_bits) {
                r.channel_cr_bps.push_back(signal.samples() ? static_cast<double>(bits) / vectors : 0.0);
            }
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

namespace {

std::string fmt(double v, int precision = 4) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

}  // namespace

std::string format_report_csv(std::span<const EvalReport> reports, double scale_uv, bool per_channel) {
    std::string out = per_channel ? kChannelReportHeader : kReportHeader;
    out.push_back('\n');
    for (const auto& r : reports) {
        if (per_channel) {
            for (std::size_t c = 0; c < r.channels.size(); ++c) {
                const auto& d = r.channels[c];
                out += std::to_string(r.delta) + ',' + std::to_string(c) + ',' +
                       fmt(c < r.channel_cr_bps.size() ? r.channel_cr_bps[c] : 0.0) + ',' + fmt(d.mae) + ',' +
                       fmt(d.mae * scale_uv) + ',' + fmt(d.snr_db, 2) + ',' + std::to_string(d.max_abs) + '\n';
            }
            continue;
        }
        out += std::to_string(r.delta) + ',' + fmt(r.cr_bps) + ',' + fmt(r.mae) + ',' + fmt(r.mae_uv) + ',' +
               fmt(r.snr_db, 2) + ',' + std::to_string(r.mstarae) + ',' + std::to_string(r.stop_time) + ',' +
               fmt(r.encode_us, 2) + ',' + fmt(r.decode_us, 2) + '\n';
    }
    return out;
}

}  // namespace mbsc
