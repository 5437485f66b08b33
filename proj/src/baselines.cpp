#include "hybridcast/baselines.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hybridcast/error.hpp"

namespace hybridcast {

namespace {

std::vector<double> difference(std::span<const double> y, int d) {
    std::vector<double> out(y.begin(), y.end());
    for (int k = 0; k < d && !out.empty(); ++k) {
        for (std::size_t i = out.size() - 1; i > 0; --i) out[i] -= out[i - 1];
        out.erase(out.begin());
    }
    return out;
}

}  // namespace

ArModel ar_fit(std::span<const double> y, int max_p, int d, InformationCriterion criterion) {
    if (max_p < 1) throw ValidationError("ar: max_p must be at least 1");
    if (d < 0 || d > 1) throw ValidationError("ar: differencing order must be 0 or 1");
    if (static_cast<int>(y.size()) <= max_p + d + 2) {
        throw ValidationError("ar: series of length " + std::to_string(y.size()) + " too short for max_p " +
                              std::to_string(max_p));
    }
    const std::vector<double> w = difference(y, d);
    const int n = static_cast<int>(w.size());
    const int t = n - max_p;

    ArModel model;
    model.d = d;
    model.criterion = criterion;
    model.sample = t;
    Vector target(t);
    for (int r = 0; r < t; ++r) target(r) = w[static_cast<std::size_t>(max_p + r)];

    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= max_p; ++p) {
        Matrix design(t, p + 1);
        for (int r = 0; r < t; ++r) {
            design(r, 0) = 1.0;
            for (int l = 1; l <= p; ++l) design(r, l) = w[static_cast<std::size_t>(max_p + r - l)];
        }
        Eigen::ColPivHouseholderQR<Matrix> qr(design);
        if (qr.rank() < design.cols()) {
            model.aic.push_back(std::numeric_limits<double>::quiet_NaN());
            model.sc.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const Vector beta = qr.solve(target);
        // A perfect fit has SSE = 0; floor it so the criterion stays finite.
        const double sse = std::max((target - design * beta).squaredNorm(), 1e-300);
        const double fit = t * std::log(sse / t);
        model.aic.push_back(fit + 2.0 * (p + 1));
        model.sc.push_back(fit + std::log(static_cast<double>(t)) * (p + 1));
        const double score = criterion == InformationCriterion::aic ? model.aic.back() : model.sc.back();
        if (score < best) {
            best = score;
            model.p = p;
            model.coefficients = beta;
        }
    }
    if (model.p == 0) throw NumericalError("ar: every candidate order gave a singular regression");
    return model;
}

std::vector<double> ar_forecast(const ArModel& model, std::span<const double> history, int steps) {
    if (steps < 0) throw ValidationError("ar: negative step count");
    if (static_cast<int>(history.size()) < model.p + model.d) {
        throw ValidationError("ar: history of length " + std::to_string(history.size()) + " is shorter than p + d = " +
                              std::to_string(model.p + model.d));
    }
    if (model.coefficients.size() != model.p + 1) throw ValidationError("ar: model is not fitted");
    std::vector<double> w = difference(history, model.d);
    double level = history.empty() ? 0.0 : history.back();
    std::vector<double> out;
    for (int s = 0; s < steps; ++s) {
        double next = model.coefficients(0);
        for (int l = 1; l <= model.p; ++l) next += model.coefficients(l) * w[w.size() - static_cast<std::size_t>(l)];
        w.push_back(next);
        if (model.d == 1) {
            level += next;
            out.push_back(level);
        } else {
            out.push_back(next);
        }
    }
    return out;
}

std::vector<double> naive_forecast(std::span<const double> history, int steps) {
    if (history.empty()) throw ValidationError("naive forecast needs a non-empty history");
    if (steps < 0) throw ValidationError("naive forecast: negative step count");
    return std::vector<double>(static_cast<std::size_t>(steps), history.back());
}

LagPairs univariate_lag_features(std::span<const double> y, int lags) {
    if (lags < 1) throw ValidationError("lag count must be at least 1");
    const int n = static_cast<int>(y.size());
    if (n <= lags) {
        throw ValidationError("series of length " + std::to_string(n) + " is too short for " + std::to_string(lags) +
                              " lags");
    }
    LagPairs out{Matrix(n - lags, lags), Vector(n - lags)};
    for (int t = lags; t < n; ++t) {
        for (int l = 1; l <= lags; ++l) out.inputs(t - lags, l - 1) = y[static_cast<std::size_t>(t - l)];
        out.targets(t - lags) = y[static_cast<std::size_t>(t)];
    }
    return out;
}

Vector latest_lags(std::span<const double> y, int lags) {
    if (lags < 1 || static_cast<int>(y.size()) < lags) throw ValidationError("not enough history for the lag window");
    Vector out(lags);
    for (int l = 1; l <= lags; ++l) out(l - 1) = y[y.size() - static_cast<std::size_t>(l)];
    return out;
}

}  // namespace hybridcast
