#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mbsc/alphabet.hpp"

namespace mbsc {

// Which samples enter the regressor of a (target, reference) predictor.
//
//   WithCurrent: [ref(n), tgt(n-1), ref(n-1), ..., tgt(n-p), ref(n-p)], orders 0..P
//   PastOnly:    [tgt(n-1), ref(n-1), ..., tgt(n-p), ref(n-p)],        orders 1..P+1
//   SelfOnly:    [tgt(n-1), ..., tgt(n-p)],                            orders 1..P+1
//
// Each order's regressor is a prefix of the next one's.
enum class RegressorLayout { WithCurrent, PastOnly, SelfOnly };

struct PredictorParams {
    unsigned max_order = 7;
    double lambda = 0.99;
    double temperature = 32.0;
    // Initial covariance is regularization * I.
    double regularization = 1e-3;
};

// Recent reconstructed samples of one channel; lags before the first sample
// read as zero.
class ChannelHistory {
public:
    explicit ChannelHistory(std::size_t depth = 8) : ring_(depth, 0) {}

    void push(std::int32_t value) noexcept {
        head_ = head_ == 0 ? ring_.size() - 1 : head_ - 1;
        ring_[head_] = value;
    }
    // Sample at n - k for k >= 1, where n is the next time index.
    std::int32_t lag(std::size_t k) const noexcept { return ring_[(head_ + k - 1) % ring_.size()]; }
    std::size_t depth() const noexcept { return ring_.size(); }

private:
    std::vector<std::int32_t> ring_;
    std::size_t head_ = 0;
};

std::size_t regressor_size(RegressorLayout layout, unsigned max_order) noexcept;

// Fills `out` (size regressor_size) for the next time index. `reference` is
// ignored for SelfOnly; `reference_current` only used by WithCurrent.
void build_regressor(RegressorLayout layout, unsigned max_order, const ChannelHistory& target,
                     const ChannelHistory* reference, std::int32_t reference_current, std::span<double> out);

// Normalized weights exp(-abs_err / c) / M over all orders and the rounded,
// clamped weighted prediction. c is doubled while M < 1e-300 * K and halved
// once, not below `base_temperature`, when M > 0.1 * K.
std::int32_t mix_predictions(std::span<const double> predictions, std::span<const double> abs_errors,
                             double base_temperature, double& temperature, std::span<double> weights,
                             const AlphabetSpec& alphabet);

// abs_err[p] = lambda * abs_err[p] + |actual - predictions[p]|.
void decay_abs_errors(std::span<double> abs_errors, std::span<const double> predictions, double actual,
                      double lambda) noexcept;

// Exponentially weighted least squares prediction at all orders at once,
// combined into one integer prediction with weights exp(-abs_err / c).
//
// The weighted covariance of [regressor; target] is kept as an LDL^T factor
// updated by one rank-one step per sample. Because order p's regressor is a
// prefix of order p+1's, the last row of L holds D^-1 L^-1 r and the order-p
// prediction is a partial sum of (L^-1 phi)_j * L[last][j].
class SequentialPredictor {
public:
    SequentialPredictor(RegressorLayout layout, const PredictorParams& params);

    RegressorLayout layout() const noexcept { return layout_; }
    std::size_t regressor_size() const noexcept { return dim_; }
    std::size_t order_count() const noexcept { return prefix_.size(); }
    // Model order represented by slot `idx` (0..P or 1..P+1).
    unsigned order_of(std::size_t idx) const noexcept;

    // Per-order predictions for the next sample. Must precede observe().
    std::span<const double> predict(std::span<const double> regressor);
    // Weighted mixture of the last predict() output, rounded and clamped.
    std::int32_t mix(const AlphabetSpec& alphabet);
    // Feeds the sample that was actually (re)constructed for this step.
    void observe(std::int32_t actual);

    std::span<const double> predictions() const noexcept { return predictions_; }
    std::span<const double> abs_errors() const noexcept { return abs_err_; }
    // Normalized weights used by the last mix().
    std::span<const double> weights() const noexcept { return weights_; }
    double temperature() const noexcept { return temperature_; }
    std::uint64_t steps() const noexcept { return steps_; }

    // Folds the full numeric state into an FNV-1a hash.
    std::uint64_t state_hash(std::uint64_t seed = 1469598103934665603ull) const noexcept;

private:
    double& l_at(std::size_t r, std::size_t c) noexcept { return lower_[r * (dim_ + 1) + c]; }
    double l_at(std::size_t r, std::size_t c) const noexcept { return lower_[r * (dim_ + 1) + c]; }

    RegressorLayout layout_;
    PredictorParams params_;
    std::size_t dim_;
    std::vector<std::size_t> prefix_;
    // (dim+1)^2 unit lower triangle, row-major; diagonal unused.
    std::vector<double> lower_;
    std::vector<double> diag_;
    std::vector<double> regressor_;
    std::vector<double> work_;
    std::vector<double> predictions_;
    std::vector<double> abs_err_;
    std::vector<double> weights_;
    double temperature_;
    double diag_floor_;
    std::uint64_t steps_ = 0;
};

// Time-ordered samples of a predictor's target and reference channels.
struct PairHistory {
    std::vector<double> target;
    std::vector<double> reference;
};

// Direct normal-equations minimizer of
//   sum_j lambda^(n-j) (x(j) - w . phi(j))^2 + ridge |w|^2
// over the first n samples of `history`, for the given model order. A negative
// ridge selects 1e-6 times the mean target power. Throws SingularSystem when
// ridge == 0 and the system is rank deficient.
std::vector<double> oracle_wls_fit(const PairHistory& history, std::size_t n, double lambda, unsigned order,
                                   RegressorLayout layout, double ridge = -1.0);

// Order-`order` regressor for time index t (0-based) built directly from the
// history, zero before the start.
std::vector<double> oracle_regressor(const PairHistory& history, std::size_t t, unsigned order,
                                     RegressorLayout layout);

}  // namespace mbsc
