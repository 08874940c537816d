#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

// Two-sided geometric test data: P(e) proportional to theta^|e|.
inline std::vector<std::int64_t> tsgd_samples(double theta, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::geometric_distribution<std::int64_t> g(1.0 - theta);
    std::vector<std::int64_t> out(count);
    // The difference of two i.i.d. geometric variables is two-sided geometric.
    for (auto& e : out) e = g(rng) - g(rng);
    return out;
}

// Solves 2 theta / (1 - theta^2) = mean for theta.
inline double tsgd_theta_for_mean_magnitude(double mean) {
    return (-1.0 + std::sqrt(1.0 + mean * mean)) / mean;
}

inline double tsgd_empirical_entropy(const std::vector<std::int64_t>& values) {
    std::map<std::int64_t, std::size_t> counts;
    for (const auto v : values) counts[v]++;
    double h = 0.0;
    const double n = static_cast<double>(values.size());
    for (const auto& [v, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}
