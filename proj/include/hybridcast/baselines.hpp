#pragma once

#include <span>
#include <vector>

#include "hybridcast/numerics.hpp"

namespace hybridcast {

enum class InformationCriterion { aic, sc };

/// Autoregression on the d-times differenced series, fitted by least squares.
/// No moving-average terms.
struct ArModel {
    int d = 1;
    int p = 0;
    Vector coefficients;  // intercept, then lags 1..p
    InformationCriterion criterion = InformationCriterion::aic;
    std::vector<double> aic;  // per candidate p = 1..max_p; NaN where the fit was singular
    std::vector<double> sc;
    int sample = 0;  // common T used for every candidate
};

/// For each p in 1..max_p, regresses the differenced series on an intercept
/// and p lags over the same window (the last T = len - d - max_p points), and
/// keeps the p minimizing T ln(SSE/T) + penalty (p + 1), penalty 2 (AIC) or
/// ln T (SC).
ArModel ar_fit(std::span<const double> y, int max_p, int d = 1,
               InformationCriterion criterion = InformationCriterion::aic);

/// Iterates the fitted recursion `steps` months past the end of `history`,
/// re-integrating the differences.
std::vector<double> ar_forecast(const ArModel& model, std::span<const double> history, int steps);

/// The random walk point forecast: the last value, repeated.
std::vector<double> naive_forecast(std::span<const double> history, int steps);

/// Rows (y[t-1], ..., y[t-lags]) paired with y[t] for t = lags .. len-1.
struct LagPairs {
    Matrix inputs;
    Vector targets;
};
LagPairs univariate_lag_features(std::span<const double> y, int lags);

/// The feature row (y[n-1], ..., y[n-lags]) that predicts the value after the
/// end of `y`.
Vector latest_lags(std::span<const double> y, int lags);

}  // namespace hybridcast
