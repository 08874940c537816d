#include "mbsc/predictor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace mbsc {

namespace {

// Per-order predictions are kept finite and within a sane multiple of any
// sample alphabet.
constexpr double kPredictionLimit = 16777216.0;
constexpr double kWeightFloorFactor = 1e-300;
constexpr double kWeightCeilFactor = 1e-1;
constexpr double kDiagFloorFactor = 1e-9;

}  // namespace

std::size_t regressor_size(RegressorLayout layout, unsigned max_order) noexcept {
    switch (layout) {
        case RegressorLayout::WithCurrent: return 2 * std::size_t{max_order} + 1;
        case RegressorLayout::PastOnly: return 2 * (std::size_t{max_order} + 1);
        case RegressorLayout::SelfOnly: return std::size_t{max_order} + 1;
    }
    return 0;
}

void build_regressor(RegressorLayout layout, unsigned max_order, const ChannelHistory& target,
                     const ChannelHistory* reference, std::int32_t reference_current, std::span<double> out) {
    std::size_t pos = 0;
    switch (layout) {
        case RegressorLayout::WithCurrent:
            out[pos++] = reference_current;
            for (unsigned k = 1; k <= max_order; ++k) {
                out[pos++] = target.lag(k);
                out[pos++] = reference->lag(k);
            }
            break;
        case RegressorLayout::PastOnly:
            for (unsigned k = 1; k <= max_order + 1; ++k) {
                out[pos++] = target.lag(k);
                out[pos++] = reference->lag(k);
            }
            break;
        case RegressorLayout::SelfOnly:
            for (unsigned k = 1; k <= max_order + 1; ++k) out[pos++] = target.lag(k);
            break;
    }
}

SequentialPredictor::SequentialPredictor(RegressorLayout layout, const PredictorParams& params)
    : layout_(layout),
      params_(params),
      dim_(mbsc::regressor_size(layout, params.max_order)),
      lower_((dim_ + 1) * (dim_ + 1), 0.0),
      diag_(dim_ + 1, params.regularization),
      regressor_(dim_, 0.0),
      work_(dim_ + 1, 0.0),
      predictions_(params.max_order + 1, 0.0),
      abs_err_(params.max_order + 1, 0.0),
      weights_(params.max_order + 1, 1.0 / (params.max_order + 1)),
      temperature_(params.temperature),
      diag_floor_(params.regularization * kDiagFloorFactor) {
    for (unsigned p = 0; p <= params.max_order; ++p) {
        switch (layout) {
            case RegressorLayout::WithCurrent: prefix_.push_back(2 * std::size_t{p} + 1); break;
            case RegressorLayout::PastOnly: prefix_.push_back(2 * (std::size_t{p} + 1)); break;
            case RegressorLayout::SelfOnly: prefix_.push_back(std::size_t{p} + 1); break;
        }
    }
}

unsigned SequentialPredictor::order_of(std::size_t idx) const noexcept {
    return layout_ == RegressorLayout::WithCurrent ? static_cast<unsigned>(idx) : static_cast<unsigned>(idx + 1);
}

std::span<const double> SequentialPredictor::predict(std::span<const double> regressor) {
    std::copy(regressor.begin(), regressor.begin() + static_cast<std::ptrdiff_t>(dim_), regressor_.begin());

    // Forward substitution u = L^-1 phi, accumulating u_j * L[dim][j].
    std::size_t slot = 0;
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        double u = regressor_[j];
        for (std::size_t k = 0; k < j; ++k) u -= l_at(j, k) * work_[k];
        work_[j] = u;
        acc += u * l_at(dim_, j);
        if (slot < prefix_.size() && prefix_[slot] == j + 1) {
            double pred = std::isfinite(acc) ? acc : 0.0;
            predictions_[slot++] = std::clamp(pred, -kPredictionLimit, kPredictionLimit);
        }
    }
    return predictions_;
}

std::int32_t mix_predictions(std::span<const double> predictions, std::span<const double> abs_errors,
                             double base_temperature, double& temperature, std::span<double> weights,
                             const AlphabetSpec& alphabet) {
    const std::size_t count = predictions.size();
    const double orders = static_cast<double>(count);

    auto normalizer = [&](double c) {
        double total = 0.0;
        for (std::size_t p = 0; p < count; ++p) {
            weights[p] = std::exp(-abs_errors[p] / c);
            total += weights[p];
        }
        return total;
    };

    double total = normalizer(temperature);
    while (total < kWeightFloorFactor * orders) {
        temperature *= 2.0;
        total = normalizer(temperature);
    }
    if (total > kWeightCeilFactor * orders && temperature > base_temperature) {
        temperature = std::max(base_temperature, temperature * 0.5);
        total = normalizer(temperature);
    }

    double mixed = 0.0;
    for (std::size_t p = 0; p < count; ++p) {
        weights[p] /= total;
        mixed += weights[p] * predictions[p];
    }
    return alphabet.clamp(std::llround(mixed));
}

void decay_abs_errors(std::span<double> abs_errors, std::span<const double> predictions, double actual,
                      double lambda) noexcept {
    for (std::size_t p = 0; p < abs_errors.size(); ++p) {
        abs_errors[p] = lambda * abs_errors[p] + std::fabs(actual - predictions[p]);
    }
}

std::int32_t SequentialPredictor::mix(const AlphabetSpec& alphabet) {
    return mix_predictions(predictions_, abs_err_, params_.temperature, temperature_, weights_, alphabet);
}

void SequentialPredictor::observe(std::int32_t actual) {
    const double x = actual;
    decay_abs_errors(abs_err_, predictions_, x, params_.lambda);

    // Exponential forgetting scales D, then a rank-one update with [phi; x].
    const std::size_t n = dim_ + 1;
    for (std::size_t j = 0; j < n; ++j) diag_[j] = std::max(diag_[j] * params_.lambda, diag_floor_);
    std::copy(regressor_.begin(), regressor_.end(), work_.begin());
    work_[dim_] = x;

    double t = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double p = work_[j];
        const double d_old = diag_[j];
        const double d_new = d_old + t * p * p;
        const double beta = p * t / d_new;
        t = t * d_old / d_new;
        diag_[j] = d_new;
        for (std::size_t r = j + 1; r < n; ++r) {
            work_[r] -= p * l_at(r, j);
            l_at(r, j) += beta * work_[r];
        }
    }
    ++steps_;
}

std::uint64_t SequentialPredictor::state_hash(std::uint64_t seed) const noexcept {
    std::uint64_t h = seed;
    auto fold = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFFu;
            h *= 1099511628211ull;
        }
    };
    auto fold_all = [&](const std::vector<double>& xs) {
        for (double v : xs) fold(std::bit_cast<std::uint64_t>(v));
    };
    fold_all(lower_);
    fold_all(diag_);
    fold_all(abs_err_);
    fold(std::bit_cast<std::uint64_t>(temperature_));
    fold(steps_);
    return h;
}

}  // namespace mbsc
