#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mbsc/predictor.hpp"

namespace testdata {

// Integer pair where the target depends on the current and past reference.
inline mbsc::PairHistory coupled_pair(std::size_t n, std::uint64_t seed, double amplitude = 500.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> gain(-0.9, 0.9);
    const double g0 = gain(rng), g1 = gain(rng), a1 = 0.5 * gain(rng);
    mbsc::PairHistory h;
    double r1 = 0, r2 = 0, t1 = 0, rprev = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = 1.3 * r1 - 0.5 * r2 + 0.3 * amplitude * noise(rng);
        const double t = g0 * r + g1 * rprev + a1 * t1 + 0.1 * amplitude * noise(rng);
        h.reference.push_back(std::round(r));
        h.target.push_back(std::round(t));
        r2 = r1;
        r1 = r;
        rprev = r;
        t1 = t;
    }
    return h;
}

// x(n) = a1 x(n-1) + a2 x(n-2) + a3 x(n-3) + w(n), rounded.
inline std::vector<double> ar3(std::size_t n, std::uint64_t seed, double noise_std) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> w(0.0, noise_std);
    constexpr double a1 = 2.2, a2 = -1.67, a3 = 0.45;
    std::vector<double> raw(n + 200, 0.0);
    for (std::size_t i = 3; i < raw.size(); ++i) raw[i] = a1 * raw[i - 1] + a2 * raw[i - 2] + a3 * raw[i - 3] + w(rng);
    std::vector<double> out(raw.begin() + 200, raw.end());
    for (auto& v : out) v = std::round(v);
    return out;
}

struct OracleGap {
    double max_relative = 0.0;
    std::size_t comparisons = 0;
};

// Drives a SequentialPredictor over `h` and compares every per-order
// prediction with the direct weighted least-squares solution using the
// same effective ridge, lambda^n * regularization.
inline OracleGap compare_with_oracle(const mbsc::PairHistory& h, mbsc::RegressorLayout layout,
                                     const mbsc::PredictorParams& params) {
    using namespace mbsc;
    SequentialPredictor pred(layout, params);
    ChannelHistory tgt(params.max_order + 2), ref(params.max_order + 2);
    std::vector<double> phi(pred.regressor_size());
    double scale = 0.0;
    for (double v : h.target) scale = std::max(scale, std::fabs(v));
    OracleGap gap;
    for (std::size_t n = 0; n < h.target.size(); ++n) {
        build_regressor(layout, params.max_order, tgt, &ref, static_cast<std::int32_t>(h.reference[n]), phi);
        const auto got = pred.predict(phi);
        if (n > 0) {
            const double ridge = std::pow(params.lambda, static_cast<double>(n)) * params.regularization;
            for (std::size_t idx = 0; idx < pred.order_count(); ++idx) {
                const unsigned order = pred.order_of(idx);
                const auto w = oracle_wls_fit(h, n, params.lambda, order, layout, ridge);
                const auto x = oracle_regressor(h, n, order, layout);
                double expect = 0.0;
                for (std::size_t j = 0; j < w.size(); ++j) expect += w[j] * x[j];
                const double denom = std::max(std::fabs(expect), scale);
                gap.max_relative = std::max(gap.max_relative, std::fabs(got[idx] - expect) / denom);
                ++gap.comparisons;
            }
        }
        pred.observe(static_cast<std::int32_t>(h.target[n]));
        tgt.push(static_cast<std::int32_t>(h.target[n]));
        ref.push(static_cast<std::int32_t>(h.reference[n]));
    }
    return gap;
}

}  // namespace testdata
