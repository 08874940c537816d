#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mbsc/alphabet.hpp"
#include "mbsc/bitio.hpp"
#include "mbsc/entropy.hpp"
#include "mbsc/predictor.hpp"
#include "mbsc/quantizer.hpp"
#include "mbsc/signal.hpp"
#include "mbsc/topology.hpp"

namespace mbsc {

enum class TreeMode : std::uint8_t { Fixed = 0, Adaptive = 1 };

struct CodecConfig {
    unsigned max_order = 7;
    double lambda = 0.99;
    std::uint16_t temperature = 32;
    std::uint16_t halving_interval = 16;
    // Code word bound; 0 selects 4 * bits.
    unsigned tau = 0;
    unsigned delta = 0;
    TreeMode mode = TreeMode::Fixed;
    StoppingRule stopping{};
    ChannelId root = 0;

    unsigned effective_tau(const AlphabetSpec& alphabet) const noexcept { return tau ? tau : 4 * alphabet.bits; }
    PredictorParams predictor_params() const noexcept;
    // Throws InvalidArgument or ConfigMismatch.
    void validate(std::size_t channels, const AlphabetSpec& alphabet) const;
};

inline constexpr std::uint8_t kStreamVersion = 1;

struct StreamHeader {
    std::uint8_t version = kStreamVersion;
    std::uint32_t channels = 0;
    AlphabetSpec alphabet{};
    std::uint64_t samples = 0;
    CodecConfig config{};
    // Fixed mode only.
    CodingTree tree{};
    bool has_debug_tree = false;
    std::size_t size_bytes = 0;
};

// Parses the header only; never touches the payload.
StreamHeader read_header(std::span<const std::uint8_t> bytes);

// Header length implied by the first kHeaderPrefixBytes bytes of a stream.
inline constexpr std::size_t kHeaderPrefixBytes = 9;
std::size_t header_size(std::span<const std::uint8_t> prefix);

// Work counters used to check per-sample cost scaling.
struct OpCounters {
    std::uint64_t learning_samples = 0;
    std::uint64_t learning_ops = 0;
    std::uint64_t steady_samples = 0;
    std::uint64_t steady_ops = 0;
};

// Prediction, quantization and context state shared by encoder and decoder.
// Both sides drive it with identical reconstructions so that every prediction,
// statistic and learned tree agrees exactly.
class CodingEngine {
public:
    CodingEngine(std::size_t channels, AlphabetSpec alphabet, const CodecConfig& config, const CodingTree& tree);
    ~CodingEngine();
    CodingEngine(CodingEngine&&) noexcept;
    CodingEngine& operator=(CodingEngine&&) noexcept;

    struct Coded {
        std::int64_t residue;
        unsigned bits;
    };

    // Processes one vector sample. `code` is called once per channel in
    // description order as code(channel, prediction, context, escape) and
    // returns the residue it emitted or read. Reconstructions go to `out`.
    template <class CodeOne>
    void step(CodeOne&& code, std::span<std::int32_t> out);

    const CodingTree& tree() const noexcept;
    bool learning() const noexcept;
    // Vector sample count at which the tree froze (0 when never learning).
    std::uint64_t stop_time() const noexcept;
    std::uint64_t samples_processed() const noexcept;
    const std::vector<double>& learning_costs() const noexcept;
    const OpCounters& counters() const noexcept;
    const ErrorAlphabet& error_alphabet() const noexcept;
    const EscapeSpec& escape() const noexcept;
    std::uint64_t state_hash() const;

private:
    struct Impl;
    struct Slot {
        std::int32_t prediction;
        GolombContext* context;
    };
    Slot begin_channel(std::size_t position);
    void end_channel(std::size_t position, const Coded& coded, std::span<std::int32_t> out);
    void end_step(std::span<const std::int32_t> out);

    std::unique_ptr<Impl> impl_;
};

template <class CodeOne>
void CodingEngine::step(CodeOne&& code, std::span<std::int32_t> out) {
    const std::size_t m = tree().channel_count();
    for (std::size_t pos = 0; pos < m; ++pos) {
        const ChannelId ch = pos == 0 ? tree().root() : tree().edges()[pos - 1].child;
        const Slot slot = begin_channel(pos);
        const Coded coded = code(ch, slot.prediction, *slot.context, escape());
        end_channel(pos, coded, out);
    }
    end_step(out);
}

class StreamEncoder {
public:
    // In fixed mode `tree` is required; adaptive mode starts from the star
    // tree rooted at config.root.
    StreamEncoder(std::size_t channels, AlphabetSpec alphabet, const CodecConfig& config,
                  const std::optional<CodingTree>& tree);

    // Codes one vector sample (one value per channel). Throws SampleOutOfRange.
    // Reconstructions are written to `reconstruction` when it is non-empty.
    void push(std::span<const std::int32_t> sample, std::span<std::int32_t> reconstruction = {});

    // Header plus payload; optionally appends the final tree as a trailer
    // block that decoders ignore.
    std::vector<std::uint8_t> finish(bool emit_debug_tree = false);

    const CodingEngine& engine() const noexcept { return engine_; }
    std::uint64_t payload_bits() const noexcept { return sink_.bit_count(); }
    // Payload bits spent on each channel so far.
    const std::vector<std::uint64_t>& channel_bits() const noexcept { return channel_bits_; }

private:
    std::size_t channels_;
    AlphabetSpec alphabet_;
    CodecConfig config_;
    CodingTree initial_tree_;
    CodingEngine engine_;
    BitSink sink_;
    std::vector<std::int32_t> scratch_;
    std::vector<std::uint64_t> channel_bits_;
};

class StreamDecoder {
public:
    explicit StreamDecoder(std::span<const std::uint8_t> bytes);

    const StreamHeader& header() const noexcept { return header_; }
    bool done() const noexcept { return decoded_ == header_.samples; }
    void next(std::span<std::int32_t> out);

    const CodingEngine& engine() const noexcept { return *engine_; }

private:
    StreamHeader header_;
    std::span<const std::uint8_t> bytes_;
    BitSource source_;
    std::unique_ptr<CodingEngine> engine_;
    std::uint64_t decoded_ = 0;
};

struct EncodeResult {
    std::vector<std::uint8_t> bytes;
    std::uint64_t stop_time = 0;
    CodingTree final_tree;
};

EncodeResult encode_stream(const SignalMatrix& signal, const CodecConfig& config,
                           const std::optional<CodingTree>& tree = std::nullopt, bool emit_debug_tree = false);
SignalMatrix decode_stream(std::span<const std::uint8_t> bytes);

// Final tree from the trailer written with emit_debug_tree, if present.
std::optional<CodingTree> read_debug_tree(std::span<const std::uint8_t> bytes);

}  // namespace mbsc
