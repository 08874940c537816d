#include <cmath>

#include "mbsc/error.hpp"
#include "mbsc/predictor.hpp"

namespace mbsc {

namespace {

double at(const std::vector<double>& seq, std::size_t t, std::size_t lag) {
    return t >= lag ? seq[t - lag] : 0.0;
}

}  // namespace

std::vector<double> oracle_regressor(const PairHistory& history, std::size_t t, unsigned order,
                                     RegressorLayout layout) {
    std::vector<double> phi;
    switch (layout) {
        case RegressorLayout::WithCurrent:
            phi.push_back(at(history.reference, t, 0));
            for (unsigned k = 1; k <= order; ++k) {
                phi.push_back(at(history.target, t, k));
                phi.push_back(at(history.reference, t, k));
            }
            break;
        case RegressorLayout::PastOnly:
            for (unsigned k = 1; k <= order; ++k) {
                phi.push_back(at(history.target, t, k));
                phi.push_back(at(history.reference, t, k));
            }
            break;
        case RegressorLayout::SelfOnly:
            for (unsigned k = 1; k <= order; ++k) phi.push_back(at(history.target, t, k));
            break;
    }
    return phi;
}

std::vector<double> oracle_wls_fit(const PairHistory& history, std::size_t n, double lambda, unsigned order,
                                   RegressorLayout layout, double ridge) {
    if (n == 0 || n > history.target.size()) {
        throw Error(ErrorCode::InvalidArgument, "oracle_wls_fit needs 1 <= n <= history length");
    }
    if (layout != RegressorLayout::WithCurrent && order == 0) {
        throw Error(ErrorCode::InvalidArgument, "lagged-only layouts start at order 1");
    }
    if (ridge < 0) {
        long double power = 0;
        for (std::size_t t = 0; t < n; ++t) power += static_cast<long double>(history.target[t]) * history.target[t];
        ridge = std::max(1e-6 * static_cast<double>(power / n), 1e-12);
    }

    const std::size_t dim = oracle_regressor(history, 0, order, layout).size();
    std::vector<long double> a(dim * dim, 0.0L);
    std::vector<long double> b(dim, 0.0L);
    for (std::size_t t = 0; t < n; ++t) {
        const long double w = std::pow(static_cast<long double>(lambda), static_cast<long double>(n - 1 - t));
        const auto phi = oracle_regressor(history, t, order, layout);
        for (std::size_t r = 0; r < dim; ++r) {
            b[r] += w * phi[r] * history.target[t];
            for (std::size_t c = 0; c < dim; ++c) a[r * dim + c] += w * phi[r] * phi[c];
        }
    }
    long double scale = 0;
    for (std::size_t r = 0; r < dim; ++r) {
        a[r * dim + r] += ridge;
        scale = std::max(scale, std::fabs(a[r * dim + r]));
    }

    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < dim; ++r) {
            if (std::fabs(a[r * dim + col]) > std::fabs(a[pivot * dim + col])) pivot = r;
        }
        if (std::fabs(a[pivot * dim + col]) <= 1e-15L * scale * dim || scale == 0) {
            throw Error(ErrorCode::SingularSystem, "normal equations are rank deficient");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < dim; ++c) std::swap(a[col * dim + c], a[pivot * dim + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < dim; ++r) {
            const long double f = a[r * dim + col] / a[col * dim + col];
            if (f == 0) continue;
            for (std::size_t c = col; c < dim; ++c) a[r * dim + c] -= f * a[col * dim + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> sol(dim);
    for (std::size_t r = dim; r-- > 0;) {
        long double s = b[r];
        for (std::size_t c = r + 1; c < dim; ++c) s -= a[r * dim + c] * sol[c];
        sol[r] = s / a[r * dim + r];
    }
    return std::vector<double>(sol.begin(), sol.end());
}

}  // namespace mbsc
