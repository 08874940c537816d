// Acceptance suite: one PASS/FAIL/SKIP line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "corpora.hpp"
#include "mbsc/codec.hpp"
#include "mbsc/entropy.hpp"
#include "mbsc/metrics.hpp"
#include "mbsc/predictor.hpp"
#include "mbsc/signalio.hpp"
#include "mbsc/topology.hpp"
#include "pair_data.hpp"
#include "tree_oracles.hpp"
#include "tsgd.hpp"

using namespace mbsc;

namespace {

// Pinned limits.
constexpr std::size_t kFuzzCases = 200;
constexpr double kLosslessBudgetSeconds = 120.0;
constexpr std::size_t kOracleSequences = 50;
constexpr double kOracleRelativeTolerance = 1e-5;
constexpr double kTsgdTheta = 0.9;
constexpr std::size_t kTsgdSamples = 100000;
constexpr double kRiceSlack = 1.05;
constexpr std::size_t kTreeInstances = 200;
constexpr double kMixtureSlack = 1.05;
constexpr double kMaeLow = 0.35, kMaeHigh = 0.65;
constexpr std::size_t kChainSeeds = 20;
constexpr double kMedianStopLow = 300.0, kMedianStopHigh = 3000.0;
constexpr double kTreeModeCrSlack = 0.05;
constexpr double kSteadyRatioMax = 2.2;
constexpr double kLearningRatioLow = 3.0, kLearningRatioHigh = 5.0;
constexpr double kDb1aLosslessMax = 4.80, kDb1aNearLosslessMax = 1.65;

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome judge(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

struct FuzzCase {
    SignalMatrix signal;
    CodecConfig config;
    std::optional<CodingTree> tree;
};

CodingTree random_tree(std::size_t m, ChannelId root, std::mt19937_64& rng) {
    std::vector<ChannelId> order(m);
    std::iota(order.begin(), order.end(), ChannelId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::swap(*std::find(order.begin(), order.end(), root), order[0]);
    std::vector<ChannelId> parents(m, root);
    for (std::size_t i = 1; i < m; ++i) {
        parents[order[i]] = order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
    }
    return CodingTree::from_parents(root, parents);
}

std::vector<FuzzCase> fuzz_corpus() {
    std::mt19937_64 rng(20240611);
    constexpr unsigned kBits[] = {8, 12, 16};
    constexpr unsigned kOrders[] = {1, 2, 4, 7};
    std::vector<FuzzCase> cases;
    for (std::size_t i = 0; i < kFuzzCases; ++i) {
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5000)(rng);
        const unsigned bits = kBits[rng() % 3];
        const auto kind = corpora::kAllKinds[rng() % std::size(corpora::kAllKinds)];
        FuzzCase c{corpora::make(kind, m, n, bits, rng()), {}, std::nullopt};
        c.config.mode = i % 2 ? TreeMode::Adaptive : TreeMode::Fixed;
        c.config.root = static_cast<ChannelId>(rng() % m);
        c.config.max_order = kOrders[rng() % 4];
        if (c.config.mode == TreeMode::Fixed) c.tree = random_tree(m, c.config.root, rng);
        cases.push_back(std::move(c));
    }
    return cases;
}

Outcome lossless_round_trip(const std::vector<FuzzCase>& corpus) {
    const auto start = std::chrono::steady_clock::now();
    std::size_t mismatches = 0, scalars = 0;
    for (const auto& c : corpus) {
        const auto enc = encode_stream(c.signal, c.config, c.tree);
        mismatches += !(decode_stream(enc.bytes) == c.signal);
        scalars += c.signal.channels() * c.signal.samples();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return judge(mismatches == 0 && seconds < kLosslessBudgetSeconds,
                 fmt("%zu/%zu exact, %zu scalar samples, %.1f s (limit %.0f s)", corpus.size() - mismatches,
                     corpus.size(), scalars, seconds, kLosslessBudgetSeconds));
}

Outcome near_lossless_bound(const std::vector<FuzzCase>& corpus) {
    std::size_t violations = 0;
    std::int64_t worst_slack = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CodecConfig config = corpus[i].config;
        config.delta = 1 + static_cast<unsigned>(i % 10);
        const auto enc = encode_stream(corpus[i].signal, config, corpus[i].tree);
        const auto d = distortion(corpus[i].signal, decode_stream(enc.bytes));
        violations += d.max_abs > static_cast<std::int64_t>(config.delta);
        worst_slack = std::min(worst_slack, static_cast<std::int64_t>(config.delta) - d.max_abs);
    }
    return judge(violations == 0,
                 fmt("%zu violations in %zu runs, min (delta - M*AE) = %lld", violations, corpus.size(),
                     static_cast<long long>(worst_slack)));
}

Outcome predictor_oracle() {
    PredictorParams params;
    params.max_order = 4;
    params.lambda = 0.99;
    constexpr RegressorLayout kLayouts[] = {RegressorLayout::WithCurrent, RegressorLayout::PastOnly,
                                            RegressorLayout::SelfOnly};
    double worst = 0.0;
    std::size_t comparisons = 0;
    for (std::size_t s = 0; s < kOracleSequences; ++s) {
        const auto h = testdata::coupled_pair(200, 1000 + s);
        for (const auto layout : kLayouts) {
            const auto gap = testdata::compare_with_oracle(h, layout, params);
            worst = std::max(worst, gap.max_relative);
            comparisons += gap.comparisons;
        }
    }
    return judge(worst < kOracleRelativeTolerance,
                 fmt("max relative error %.3g over %zu predictions (limit %.0e)", worst, comparisons,
                     kOracleRelativeTolerance));
}

Outcome rice_optimality() {
    const auto samples = tsgd_samples(kTsgdTheta, kTsgdSamples, 7);
    const auto esc = EscapeSpec::make(64, 16);
    auto ctx = GolombContext::initial(std::uint64_t{1} << 16, 16);
    std::uint64_t adaptive = 0;
    for (const auto e : samples) adaptive += measure_error(e, ctx, esc);
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    unsigned best_k = 0;
    for (unsigned k = 0; k <= 12; ++k) {
        std::uint64_t total = 0;
        for (const auto e : samples) total += code_length(rice_map(e), k, esc);
        if (total < best) best = total, best_k = k;
    }
    const double ratio = static_cast<double>(adaptive) / static_cast<double>(best);
    return judge(ratio <= kRiceSlack, fmt("adaptive %llu bits, best fixed k=%u %llu bits, ratio %.4f (limit %.2f)",
                                          static_cast<unsigned long long>(adaptive), best_k,
                                          static_cast<unsigned long long>(best), ratio, kRiceSlack));
}

Outcome tree_oracles() {
    std::mt19937_64 rng(555);
    std::size_t mst_miss = 0, dmst_miss = 0;
    for (std::size_t i = 0; i < kTreeInstances; ++i) {
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        // Small integers make ties common; k/64 weights sum exactly in any order.
        const bool coarse = i % 2 == 0;
        WeightMatrix sym(m), dir(m);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                if (a == b) continue;
                const double w = coarse ? static_cast<double>(rng() % 4)
                                        : static_cast<double>(rng() % 640) / 64.0;
                dir.at(a, b) = w;
                if (a < b) sym.at(a, b) = sym.at(b, a) = w;
            }
        }
        double mst = 0.0;
        for (const auto& e : minimum_spanning_tree(sym)) mst += sym.at(e.parent, e.child);
        mst_miss += mst != oracle::brute_force_spanning_tree(sym);
        const auto root = static_cast<ChannelId>(rng() % m);
        const auto tree = dmst(dir, root);
        tree.validate(m);
        dmst_miss += tree_weight(tree, dir) != oracle::brute_force_arborescence(dir, root);
    }
    return judge(mst_miss == 0 && dmst_miss == 0,
                 fmt("%zu instances, MST mismatches %zu, DMST mismatches %zu", kTreeInstances, mst_miss, dmst_miss));
}

Outcome mixture_regret() {
    const auto x = testdata::ar3(10000, 33, 40.0);
    const AlphabetSpec alphabet{16};
    PredictorParams params;
    SequentialPredictor pred(RegressorLayout::SelfOnly, params);
    ChannelHistory hist(params.max_order + 2);
    std::vector<double> phi(pred.regressor_size());
    // Slot 0 is the order-0 predictor (always zero); slot o is order o.
    std::vector<double> single(params.max_order + 1, 0.0);
    double mixture = 0.0;
    for (const double v : x) {
        build_regressor(RegressorLayout::SelfOnly, params.max_order, hist, nullptr, 0, phi);
        const auto p = pred.predict(phi);
        mixture += std::fabs(v - pred.mix(alphabet));
        single[0] += std::fabs(v);
        for (std::size_t idx = 0; idx < p.size(); ++idx) {
            const unsigned order = pred.order_of(idx);
            if (order <= params.max_order) single[order] += std::fabs(v - alphabet.clamp(std::llround(p[idx])));
        }
        pred.observe(static_cast<std::int32_t>(v));
        hist.push(static_cast<std::int32_t>(v));
    }
    const auto best = std::min_element(single.begin(), single.end());
    const double ratio = mixture / *best;
    return judge(ratio <= kMixtureSlack, fmt("mixture %.0f, best order %td %.0f, ratio %.4f (limit %.2f)", mixture,
                                             best - single.begin(), *best, ratio, kMixtureSlack));
}

SignalMatrix chain_signal(std::size_t m, std::size_t n, std::uint64_t seed) {
    SynthOptions o;
    o.seed = seed;
    o.channels = m;
    o.samples = n;
    o.coupling = Coupling::Chain;
    return synth_mvar(o);
}

Outcome mae_half_delta() {
    std::string detail;
    bool ok = true;
    for (const auto mode : {TreeMode::Fixed, TreeMode::Adaptive}) {
        for (const std::uint64_t seed : {11u, 12u, 13u}) {
            const auto signal = chain_signal(8, 5000, seed);
            CodecConfig config;
            config.mode = mode;
            const auto tree = mode == TreeMode::Fixed
                                  ? std::optional<CodingTree>(build_geometry_tree(line_layout(8), 0))
                                  : std::nullopt;
            for (const unsigned delta : {5u, 10u}) {
                config.delta = delta;
                const auto d = distortion(signal, decode_stream(encode_stream(signal, config, tree).bytes));
                const double rel = d.mae / delta;
                ok = ok && rel >= kMaeLow && rel <= kMaeHigh;
                detail += fmt("%s%.2f", detail.empty() ? "MAE/delta " : " ", rel);
            }
        }
    }
    return judge(ok, detail + fmt(" (range [%.2f, %.2f])", kMaeLow, kMaeHigh));
}

Outcome stopping_behavior() {
    constexpr std::size_t m = 16;
    const auto line_tree = build_geometry_tree(line_layout(m), 0);
    std::vector<double> stops;
    double worst_gap = 0.0;
    bool bounded = true;
    CodecConfig config;
    for (std::size_t s = 0; s < kChainSeeds; ++s) {
        const auto signal = chain_signal(m, 6000, 100 + s);
        config.mode = TreeMode::Adaptive;
        const auto adaptive = encode_stream(signal, config);
        config.mode = TreeMode::Fixed;
        const auto fixed = encode_stream(signal, config, line_tree);
        stops.push_back(static_cast<double>(adaptive.stop_time));
        bounded = bounded && adaptive.stop_time > 0 && adaptive.stop_time <= config.stopping.max_samples;
        const double gap = std::fabs(static_cast<double>(adaptive.bytes.size()) / fixed.bytes.size() - 1.0);
        worst_gap = std::max(worst_gap, gap);
    }
    std::sort(stops.begin(), stops.end());
    const double median = 0.5 * (stops[(stops.size() - 1) / 2] + stops[stops.size() / 2]);
    const bool ok = bounded && median >= kMedianStopLow && median <= kMedianStopHigh && worst_gap <= kTreeModeCrSlack;
    return judge(ok, fmt("n_s in [%.0f, %.0f], median %.0f (range [%.0f, %.0f]), worst adaptive/fixed CR gap %.2f%% "
                         "(limit %.0f%%)",
                         stops.front(), stops.back(), median, kMedianStopLow, kMedianStopHigh, 100 * worst_gap,
                         100 * kTreeModeCrSlack));
}

OpCounters counters_for(std::size_t m) {
    const auto signal = chain_signal(m, 4000, 77);
    CodecConfig config;
    config.mode = TreeMode::Adaptive;
    StreamEncoder enc(m, signal.alphabet(), config, std::nullopt);
    std::vector<std::int32_t> sample(m);
    for (std::size_t t = 0; t < signal.samples(); ++t) {
        signal.gather(t, sample);
        enc.push(sample);
    }
    return enc.engine().counters();
}

Outcome complexity_shape() {
    const auto small = counters_for(8), large = counters_for(16);
    const auto per = [](std::uint64_t ops, std::uint64_t samples) {
        return samples ? static_cast<double>(ops) / static_cast<double>(samples) : 0.0;
    };
    const double steady = per(large.steady_ops, large.steady_samples) / per(small.steady_ops, small.steady_samples);
    const double learning =
        per(large.learning_ops, large.learning_samples) / per(small.learning_ops, small.learning_samples);
    const bool ok = steady <= kSteadyRatioMax && learning >= kLearningRatioLow && learning <= kLearningRatioHigh;
    return judge(ok, fmt("steady ratio %.3f (limit %.1f), learning ratio %.3f (range [%.1f, %.1f])", steady,
                         kSteadyRatioMax, learning, kLearningRatioLow, kLearningRatioHigh));
}

// MBSC_DB1A_DIR names a directory of converted records: <name>.raw with a
// <name>.json sidecar each.
Outcome external_data() {
    const char* dir = std::getenv("MBSC_DB1A_DIR");
    if (!dir || !std::filesystem::is_directory(dir)) return {Verdict::Skip, "set MBSC_DB1A_DIR to run"};
    std::uint64_t bits0 = 0, bits10 = 0, scalars = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".raw") continue;
        auto sidecar = entry.path();
        sidecar.replace_extension(".json");
        const auto signal = load_raw(entry.path(), sidecar);
        CodecConfig config;
        config.mode = TreeMode::Adaptive;
        bits0 += 8 * encode_stream(signal, config).bytes.size();
        config.delta = 10;
        bits10 += 8 * encode_stream(signal, config).bytes.size();
        scalars += signal.channels() * signal.samples();
    }
    if (scalars == 0) return {Verdict::Skip, "no .raw records found"};
    const double cr0 = compression_ratio(bits0, scalars), cr10 = compression_ratio(bits10, scalars);
    return judge(cr0 <= kDb1aLosslessMax && cr10 <= kDb1aNearLosslessMax,
                 fmt("delta 0: %.3f bps (limit %.2f), delta 10: %.3f bps (limit %.2f)", cr0, kDb1aLosslessMax,
                     cr10, kDb1aNearLosslessMax));
}

}  // namespace

int main() {
    const auto corpus = fuzz_corpus();
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"lossless round trip", [&] { return lossless_round_trip(corpus); }},
        {"near-lossless bound", [&] { return near_lossless_bound(corpus); }},
        {"predictor matches weighted least squares", predictor_oracle},
        {"adaptive Rice coding vs best fixed k", rice_optimality},
        {"spanning tree and arborescence optimality", tree_oracles},
        {"mixture regret on AR(3)", mixture_regret},
        {"MAE near delta/2", mae_half_delta},
        {"tree learning stops in time", stopping_behavior},
        {"per-sample cost scaling", complexity_shape},
        {"external database compression", external_data},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {Verdict::Fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
        failures += o.verdict == Verdict::Fail;
        std::printf("[%s] %2zu %s: %s\n", tag, i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
