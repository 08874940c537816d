#include "mbsc/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "mbsc/error.hpp"

namespace mbsc {

void SignalMatrix::validate() const {
    for (std::size_t c = 0; c < channels_; ++c) {
        for (std::size_t n = 0; n < samples_; ++n) {
            if (!alphabet_.contains(at(c, n))) {
                throw Error(ErrorCode::OutOfDeclaredRange, "sample " + std::to_string(at(c, n)) + " at channel " +
                                                               std::to_string(c) + ", time " + std::to_string(n) +
                                                               " outside " + std::to_string(alphabet_.bits) +
                                                               "-bit range");
            }
        }
    }
}

PredictorParams CodecConfig::predictor_params() const noexcept {
    PredictorParams p;
    p.max_order = max_order;
    p.lambda = lambda;
    p.temperature = temperature;
    return p;
}

void CodecConfig::validate(std::size_t channels, const AlphabetSpec& alphabet) const {
    alphabet.validate();
    auto bad = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
    if (channels == 0 || channels > 65535) bad("channel count must be in [1, 65535]");
    if (max_order > 31) bad("maximum prediction order must be <= 31");
    if (!(lambda > 0.0 && lambda < 1.0)) bad("forgetting factor must lie in (0, 1)");
    if (temperature == 0) bad("mixture temperature must be positive");
    if (halving_interval < 2) bad("halving interval must be >= 2");
    if (delta > 255) bad("delta must be <= 255");
    const unsigned t = effective_tau(alphabet);
    if (t <= alphabet.bits + 2 || t > 255) bad("code word bound tau must satisfy bits + 2 < tau <= 255");
    if (stopping.block == 0 || stopping.block > 65535) bad("block size must be in [1, 65535]");
    if (stopping.window == 0 || stopping.window > 255) bad("stopping window must be in [1, 255]");
    if (!(stopping.gamma >= 0.0)) bad("stopping threshold must be nonnegative");
    if (root >= channels) throw Error(ErrorCode::ConfigMismatch, "root channel outside channel range");
}

// ---------------------------------------------------------------------------
// Coding engine

namespace {

struct PairModel {
    PairModel(RegressorLayout layout, const PredictorParams& params, GolombContext ctx)
        : predictor(layout, params), context(ctx) {}
    SequentialPredictor predictor;
    GolombContext context;
};

}  // namespace

struct CodingEngine::Impl {
    std::size_t m;
    AlphabetSpec alphabet;
    CodecConfig config;
    PredictorParams params;
    ErrorAlphabet errors;
    EscapeSpec esc;
    CodingTree tree;
    std::vector<ChannelId> parents;

    // root_models[ref]; for a single channel the SelfOnly model sits at root.
    std::vector<std::unique_ptr<PairModel>> root_models;
    // pair_models[ref * m + target], target != root.
    std::vector<std::unique_ptr<PairModel>> pair_models;
    GolombContext root_context;

    std::vector<ChannelHistory> history;
    std::vector<std::int32_t> current;
    std::int32_t pending_prediction = 0;
    std::vector<double> regressor;

    bool learning = false;
    std::uint64_t stop_time = 0;
    std::uint64_t n = 0;
    PairStats stats;
    StoppingState stopping;
    OpCounters counters;
    std::uint64_t step_ops = 0;

    Impl(std::size_t channels, AlphabetSpec a, const CodecConfig& cfg, const CodingTree& t)
        : m(channels),
          alphabet(a),
          config(cfg),
          params(cfg.predictor_params()),
          errors(a, cfg.delta),
          esc(EscapeSpec::make(cfg.effective_tau(a), errors.raw_bits())),
          tree(t),
          parents(t.parents()),
          root_models(channels),
          pair_models(channels * channels),
          root_context(GolombContext::initial(static_cast<std::uint64_t>(errors.modulus()), cfg.halving_interval)),
          history(channels, ChannelHistory(cfg.max_order + 2)),
          current(channels, 0),
          regressor(regressor_size(RegressorLayout::PastOnly, cfg.max_order)),
          stats(channels, t.root()),
          stopping{cfg.stopping, {}} {
        learning = cfg.mode == TreeMode::Adaptive && m > 1;
        const ChannelId r = tree.root();
        if (m == 1) {
            root_models[r] = make_model(RegressorLayout::SelfOnly);
        } else if (learning) {
            for (ChannelId j = 0; j < m; ++j) {
                if (j != r) root_models[j] = make_model(RegressorLayout::PastOnly);
            }
            for (ChannelId i = 0; i < m; ++i) {
                if (i == r) continue;
                for (ChannelId j = 0; j < m; ++j) {
                    if (j != i) pair_models[j * m + i] = make_model(RegressorLayout::WithCurrent);
                }
            }
        } else {
            root_models[root_reference()] = make_model(RegressorLayout::PastOnly);
            for (const auto& e : tree.edges()) {
                pair_models[e.parent * m + e.child] = make_model(RegressorLayout::WithCurrent);
            }
        }
    }

    std::unique_ptr<PairModel> make_model(RegressorLayout layout) const {
        return std::make_unique<PairModel>(
            layout, params, GolombContext::initial(static_cast<std::uint64_t>(errors.modulus()), config.halving_interval));
    }

    ChannelId root_reference() const { return m == 1 ? tree.root() : tree.edges().front().child; }

    PairModel& root_model() { return *root_models[root_reference()]; }
    PairModel& pair_model(ChannelId ref, ChannelId target) { return *pair_models[ref * m + target]; }

    std::int32_t predict_root(PairModel& model, ChannelId ref) {
        const ChannelId r = tree.root();
        const auto layout = model.predictor.layout();
        build_regressor(layout, config.max_order, history[r], layout == RegressorLayout::SelfOnly ? nullptr : &history[ref],
                        0, regressor);
        model.predictor.predict(regressor);
        ++step_ops;
        return model.predictor.mix(alphabet);
    }

    std::int32_t predict_pair(PairModel& model, ChannelId ref, ChannelId target, std::int32_t ref_current) {
        build_regressor(RegressorLayout::WithCurrent, config.max_order, history[target], &history[ref], ref_current,
                        regressor);
        model.predictor.predict(regressor);
        ++step_ops;
        return model.predictor.mix(alphabet);
    }

    void update_hypothetical(std::span<const std::int32_t> recon) {
        const ChannelId r = tree.root();
        const ChannelId active_ref = root_reference();
        for (ChannelId j = 0; j < m; ++j) {
            if (j == r || j == active_ref) continue;
            auto& model = *root_models[j];
            predict_root(model, j);
            model.predictor.observe(recon[r]);
        }
        for (ChannelId i = 0; i < m; ++i) {
            if (i == r) continue;
            for (ChannelId j = 0; j < m; ++j) {
                if (j == i || j == parents[i]) continue;
                auto& model = pair_model(j, i);
                const std::int32_t pred = predict_pair(model, j, i, recon[j]);
                const std::int64_t residue = errors.residue_for(recon[i], pred);
                stats.add(j, i, measure_error(residue, model.context, esc));
                model.predictor.observe(recon[i]);
            }
        }
    }

    void set_tree(CodingTree next) {
        tree = std::move(next);
        parents = tree.parents();
    }

    void freeze() {
        learning = false;
        stop_time = n;
        const ChannelId r = tree.root();
        const ChannelId keep = root_reference();
        for (ChannelId j = 0; j < m; ++j) {
            if (j != keep) root_models[j].reset();
        }
        for (ChannelId i = 0; i < m; ++i) {
            for (ChannelId j = 0; j < m; ++j) {
                if (i == r || j != parents[i]) pair_models[j * m + i].reset();
            }
        }
    }
};

CodingEngine::CodingEngine(std::size_t channels, AlphabetSpec alphabet, const CodecConfig& config,
                           const CodingTree& tree) {
    config.validate(channels, alphabet);
    tree.validate(channels);
    if (tree.root() != config.root) throw Error(ErrorCode::ConfigMismatch, "coding tree root differs from configured root");
    impl_ = std::make_unique<Impl>(channels, alphabet, config, tree);
}

CodingEngine::~CodingEngine() = default;
CodingEngine::CodingEngine(CodingEngine&&) noexcept = default;
CodingEngine& CodingEngine::operator=(CodingEngine&&) noexcept = default;

const CodingTree& CodingEngine::tree() const noexcept { return impl_->tree; }
bool CodingEngine::learning() const noexcept { return impl_->learning; }
std::uint64_t CodingEngine::stop_time() const noexcept { return impl_->stop_time; }
std::uint64_t CodingEngine::samples_processed() const noexcept { return impl_->n; }
const std::vector<double>& CodingEngine::learning_costs() const noexcept { return impl_->stopping.costs; }
const OpCounters& CodingEngine::counters() const noexcept { return impl_->counters; }
const ErrorAlphabet& CodingEngine::error_alphabet() const noexcept { return impl_->errors; }
const EscapeSpec& CodingEngine::escape() const noexcept { return impl_->esc; }

CodingEngine::Slot CodingEngine::begin_channel(std::size_t position) {
    auto& s = *impl_;
    if (position == 0) {
        s.pending_prediction = s.predict_root(s.root_model(), s.root_reference());
        return {s.pending_prediction, &s.root_context};
    }
    // The parent precedes its child in description order, so its current
    // reconstruction is already known.
    const auto& e = s.tree.edges()[position - 1];
    auto& model = s.pair_model(e.parent, e.child);
    s.pending_prediction = s.predict_pair(model, e.parent, e.child, s.current[e.parent]);
    return {s.pending_prediction, &model.context};
}

void CodingEngine::end_channel(std::size_t position, const Coded& coded, std::span<std::int32_t> out) {
    auto& s = *impl_;
    if (!s.errors.is_residue(coded.residue)) {
        throw Error(ErrorCode::MalformedStream, "residue " + std::to_string(coded.residue) + " outside error alphabet");
    }
    const std::int32_t value = s.errors.reconstruct(s.pending_prediction, coded.residue);
    if (position == 0) {
        const ChannelId r = s.tree.root();
        s.current[r] = value;
        s.root_model().predictor.observe(value);
    } else {
        const auto& e = s.tree.edges()[position - 1];
        s.current[e.child] = value;
        s.pair_model(e.parent, e.child).predictor.observe(value);
        if (s.learning) s.stats.add(e.parent, e.child, coded.bits);
    }
    out[position == 0 ? s.tree.root() : s.tree.edges()[position - 1].child] = value;
}

void CodingEngine::end_step(std::span<const std::int32_t> out) {
    auto& s = *impl_;
    const bool was_learning = s.learning;
    if (s.learning) {
        s.update_hypothetical(out);
        s.stats.advance();
    }
    for (std::size_t c = 0; c < s.m; ++c) s.history[c].push(out[c]);
    ++s.n;

    if (was_learning) {
        s.counters.learning_samples += 1;
        s.counters.learning_ops += s.step_ops;
    } else {
        s.counters.steady_samples += 1;
        s.counters.steady_ops += s.step_ops;
    }
    s.step_ops = 0;

    if (!s.learning) return;
    const auto& rule = s.config.stopping;
    bool stop = false;
    if (s.n % rule.block == 0) {
        const WeightMatrix weights = s.stats.averages();
        s.set_tree(dmst(weights, s.tree.root()));
        s.stopping.costs.push_back(tree_weight(s.tree, weights));
        stop = check_stopping(s.stopping, s.stopping.costs.size());
    }
    if (stop || s.n >= rule.max_samples) s.freeze();
}

std::uint64_t CodingEngine::state_hash() const {
    const auto& s = *impl_;
    std::uint64_t h = 1469598103934665603ull;
    auto fold = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFFu;
            h *= 1099511628211ull;
        }
    };
    auto fold_context = [&](const GolombContext& c) {
        fold(c.A);
        fold(c.N);
    };
    fold_context(s.root_context);
    for (const auto& model : s.root_models) {
        if (!model) continue;
        h = model->predictor.state_hash(h);
        fold_context(model->context);
    }
    for (const auto& model : s.pair_models) {
        if (!model) continue;
        h = model->predictor.state_hash(h);
        fold_context(model->context);
    }
    for (ChannelId j = 0; j < s.m; ++j) {
        for (ChannelId i = 0; i < s.m; ++i) fold(s.stats.cumulative(j, i));
    }
    for (const auto& e : s.tree.edges()) fold((std::uint64_t{e.parent} << 32) | e.child);
    fold(s.n);
    return h;
}

// ---------------------------------------------------------------------------
// Container

namespace {

constexpr std::uint8_t kMagic[4] = {'M', 'B', 'S', 'C'};
constexpr std::uint8_t kTrailerMagic[4] = {'M', 'B', 'T', 'R'};
constexpr std::uint8_t kModeMask = 0x0F;
constexpr std::uint8_t kDebugTreeFlag = 0x80;

class ByteWriter {
public:
    void u8(std::uint8_t v) { out.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
    void bytes(const std::uint8_t* p, std::size_t n) { out.insert(out.end(), p, p + n); }

    std::vector<std::uint8_t> out;

private:
    void le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> b) : bytes_(b) {}
    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    double f64() { return std::bit_cast<double>(le(8)); }
    std::size_t offset() const noexcept { return pos_; }

private:
    std::uint64_t le(int n) {
        if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) {
            throw Error(ErrorCode::EndOfStream, "stream header truncated");
        }
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t{bytes_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> write_header(const StreamHeader& h) {
    ByteWriter w;
    w.bytes(kMagic, 4);
    w.u8(h.version);
    w.u8(static_cast<std::uint8_t>(static_cast<std::uint8_t>(h.config.mode) | (h.has_debug_tree ? kDebugTreeFlag : 0)));
    w.u16(static_cast<std::uint16_t>(h.channels));
    w.u8(static_cast<std::uint8_t>(h.alphabet.bits));
    w.u32(static_cast<std::uint32_t>(h.samples));
    w.u8(static_cast<std::uint8_t>(h.config.max_order));
    w.f64(h.config.lambda);
    w.u16(h.config.temperature);
    w.u16(h.config.halving_interval);
    w.u8(static_cast<std::uint8_t>(h.config.effective_tau(h.alphabet)));
    w.u8(static_cast<std::uint8_t>(h.config.delta));
    w.u16(static_cast<std::uint16_t>(h.config.root));
    if (h.config.mode == TreeMode::Adaptive) {
        w.u16(static_cast<std::uint16_t>(h.config.stopping.block));
        w.u8(static_cast<std::uint8_t>(h.config.stopping.window));
        w.f64(h.config.stopping.gamma);
        w.u32(h.config.stopping.max_samples);
    } else {
        const auto parents = h.tree.parents();
        for (ChannelId c = 0; c < parents.size(); ++c) {
            if (c != h.tree.root()) w.u16(static_cast<std::uint16_t>(parents[c]));
        }
    }
    return std::move(w.out);
}

}  // namespace

std::size_t header_size(std::span<const std::uint8_t> prefix) {
    if (prefix.size() < kHeaderPrefixBytes || std::memcmp(prefix.data(), kMagic, 4) != 0) {
        throw Error(ErrorCode::BadMagic, "not an MBSC stream");
    }
    constexpr std::size_t kFixedPart = 30;
    const bool adaptive = (prefix[5] & kModeMask) == static_cast<std::uint8_t>(TreeMode::Adaptive);
    const std::size_t channels = prefix[6] | (std::size_t{prefix[7]} << 8);
    return kFixedPart + (adaptive ? 15 : 2 * (channels > 0 ? channels - 1 : 0));
}

StreamHeader read_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw Error(ErrorCode::BadMagic, "not an MBSC stream");
    }
    ByteReader r(bytes.subspan(4));
    StreamHeader h;
    h.version = r.u8();
    if (h.version != kStreamVersion) {
        throw Error(ErrorCode::VersionUnsupported, "stream version " + std::to_string(h.version));
    }
    const std::uint8_t mode = r.u8();
    if ((mode & kModeMask) > 1 || (mode & ~(kModeMask | kDebugTreeFlag)) != 0) {
        throw Error(ErrorCode::MalformedStream, "unknown coding mode");
    }
    h.config.mode = static_cast<TreeMode>(mode & kModeMask);
    h.has_debug_tree = (mode & kDebugTreeFlag) != 0;
    h.channels = r.u16();
    h.alphabet.bits = r.u8();
    h.samples = r.u32();
    h.config.max_order = r.u8();
    h.config.lambda = r.f64();
    h.config.temperature = r.u16();
    h.config.halving_interval = r.u16();
    h.config.tau = r.u8();
    h.config.delta = r.u8();
    h.config.root = r.u16();
    if (h.config.mode == TreeMode::Adaptive) {
        h.config.stopping.block = r.u16();
        h.config.stopping.window = r.u8();
        h.config.stopping.gamma = r.f64();
        h.config.stopping.max_samples = r.u32();
    }
    try {
        h.config.validate(h.channels, h.alphabet);
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedStream, std::string("invalid header configuration: ") + e.what());
    }
    if (h.config.mode == TreeMode::Fixed) {
        std::vector<ChannelId> parents(h.channels, h.config.root);
        for (ChannelId c = 0; c < h.channels; ++c) {
            if (c != h.config.root) parents[c] = r.u16();
        }
        try {
            h.tree = CodingTree::from_parents(h.config.root, parents);
        } catch (const Error&) {
            throw Error(ErrorCode::MalformedStream, "header parent list is not a tree");
        }
    }
    h.size_bytes = 4 + r.offset();
    return h;
}

StreamEncoder::StreamEncoder(std::size_t channels, AlphabetSpec alphabet, const CodecConfig& config,
                             const std::optional<CodingTree>& tree)
    : channels_(channels),
      alphabet_(alphabet),
      config_(config),
      initial_tree_([&] {
          config.validate(channels, alphabet);
          if (config.mode == TreeMode::Adaptive) return CodingTree::star(channels, config.root);
          if (!tree) throw Error(ErrorCode::InvalidArgument, "fixed-tree mode requires a coding tree");
          if (tree->channel_count() != channels) {
              throw Error(ErrorCode::ConfigMismatch, "coding tree does not match channel count");
          }
          tree->validate(channels);
          // The header stores parents only; siblings are re-derived in channel order.
          return CodingTree::from_parents(tree->root(), tree->parents());
      }()),
      engine_(channels, alphabet, config, initial_tree_),
      scratch_(channels, 0),
      channel_bits_(channels, 0) {}

void StreamEncoder::push(std::span<const std::int32_t> sample, std::span<std::int32_t> reconstruction) {
    if (sample.size() != channels_) throw Error(ErrorCode::ShapeMismatch, "vector sample has wrong channel count");
    for (std::size_t c = 0; c < channels_; ++c) {
        if (!alphabet_.contains(sample[c])) {
            throw Error(ErrorCode::SampleOutOfRange,
                        "sample " + std::to_string(sample[c]) + " on channel " + std::to_string(c));
        }
    }
    if (engine_.samples_processed() >= 0xFFFFFFFFull) {
        throw Error(ErrorCode::InvalidArgument, "stream exceeds 2^32 - 1 vector samples");
    }
    const ErrorAlphabet& errors = engine_.error_alphabet();
    engine_.step(
        [&](ChannelId ch, std::int32_t prediction, GolombContext& ctx, const EscapeSpec& esc) {
            const std::int64_t residue = errors.residue_for(sample[ch], prediction);
            const unsigned bits = encode_error(sink_, residue, ctx, esc);
            channel_bits_[ch] += bits;
            return CodingEngine::Coded{residue, bits};
        },
        scratch_);
    if (!reconstruction.empty()) std::copy(scratch_.begin(), scratch_.end(), reconstruction.begin());
}

std::vector<std::uint8_t> StreamEncoder::finish(bool emit_debug_tree) {
    StreamHeader h;
    h.channels = static_cast<std::uint32_t>(channels_);
    h.alphabet = alphabet_;
    h.samples = engine_.samples_processed();
    h.config = config_;
    h.tree = initial_tree_;
    h.has_debug_tree = emit_debug_tree;
    std::vector<std::uint8_t> out = write_header(h);
    const auto& payload = sink_.flush();
    out.insert(out.end(), payload.begin(), payload.end());
    if (emit_debug_tree) {
        ByteWriter w;
        const auto& tree = engine_.tree();
        for (const auto& e : tree.edges()) {
            w.u16(static_cast<std::uint16_t>(e.parent));
            w.u16(static_cast<std::uint16_t>(e.child));
        }
        w.u16(static_cast<std::uint16_t>(tree.root()));
        w.u16(static_cast<std::uint16_t>(tree.edges().size()));
        w.bytes(kTrailerMagic, 4);
        out.insert(out.end(), w.out.begin(), w.out.end());
    }
    return out;
}

StreamDecoder::StreamDecoder(std::span<const std::uint8_t> bytes) : header_(read_header(bytes)), bytes_(bytes) {
    source_ = BitSource(bytes.subspan(header_.size_bytes));
    const CodingTree tree = header_.config.mode == TreeMode::Adaptive
                                ? CodingTree::star(header_.channels, header_.config.root)
                                : header_.tree;
    engine_ = std::make_unique<CodingEngine>(header_.channels, header_.alphabet, header_.config, tree);
}

void StreamDecoder::next(std::span<std::int32_t> out) {
    if (done()) throw Error(ErrorCode::EndOfStream, "all vector samples already decoded");
    engine_->step(
        [&](ChannelId, std::int32_t, GolombContext& ctx, const EscapeSpec& esc) {
            const std::uint64_t before = source_.position();
            const std::int64_t residue = decode_error(source_, ctx, esc);
            return CodingEngine::Coded{residue, static_cast<unsigned>(source_.position() - before)};
        },
        out);
    ++decoded_;
}

EncodeResult encode_stream(const SignalMatrix& signal, const CodecConfig& config, const std::optional<CodingTree>& tree,
                           bool emit_debug_tree) {
    StreamEncoder enc(signal.channels(), signal.alphabet(), config, tree);
    std::vector<std::int32_t> v(signal.channels());
    for (std::size_t n = 0; n < signal.samples(); ++n) {
        signal.gather(n, v);
        enc.push(v);
    }
    EncodeResult result;
    result.stop_time = enc.engine().learning() ? enc.engine().samples_processed() : enc.engine().stop_time();
    result.final_tree = enc.engine().tree();
    result.bytes = enc.finish(emit_debug_tree);
    return result;
}

SignalMatrix decode_stream(std::span<const std::uint8_t> bytes) {
    StreamDecoder dec(bytes);
    const auto& h = dec.header();
    SignalMatrix out(h.channels, h.samples, h.alphabet);
    std::vector<std::int32_t> v(h.channels);
    for (std::size_t n = 0; n < h.samples; ++n) {
        dec.next(v);
        out.scatter(n, v);
    }
    return out;
}

std::optional<CodingTree> read_debug_tree(std::span<const std::uint8_t> bytes) {
    const StreamHeader h = read_header(bytes);
    if (!h.has_debug_tree || bytes.size() < 8) return std::nullopt;
    const std::size_t end = bytes.size();
    if (std::memcmp(bytes.data() + end - 4, kTrailerMagic, 4) != 0) return std::nullopt;
    ByteReader tail(bytes.subspan(end - 8, 4));
    const ChannelId root = tail.u16();
    const std::size_t count = tail.u16();
    if (count + 1 != h.channels || end < 8 + 4 * count + h.size_bytes) return std::nullopt;
    ByteReader body(bytes.subspan(end - 8 - 4 * count, 4 * count));
    std::vector<TreeEdge> edges;
    for (std::size_t k = 0; k < count; ++k) {
        const ChannelId parent = body.u16();
        const ChannelId child = body.u16();
        edges.push_back({parent, child});
    }
    CodingTree tree(root, std::move(edges));
    tree.validate(h.channels);
    return tree;
}

}  // namespace mbsc
