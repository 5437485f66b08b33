#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridcast/panel.hpp"

namespace hybridcast {

/// Mean absolute percentage error, in percent. Rejects a zero actual.
double mape(std::span<const double> actual, std::span<const double> forecast);
double rmse(std::span<const double> actual, std::span<const double> forecast);
double mae(std::span<const double> actual, std::span<const double> forecast);

/// Directional accuracy, in percent, over the N-1 transitions. Transition t
/// counts as correct when (y[t+1] - y[t]) * (yhat[t+1] - y[t]) >= 0: the
/// forecast is compared with the previous *actual*, and ties count.
double da(std::span<const double> actual, std::span<const double> forecast);

/// d(t) for each of the N-1 transitions.
std::vector<int> direction_hits(std::span<const double> actual, std::span<const double> forecast);

struct EvalPoint {
    YearMonth date;
    double actual = 0.0;
    double forecast = 0.0;
    int hit = -1;  // d(t) of the transition into this point; -1 for the first point
};

struct EvalReport {
    std::string label;
    std::string method;
    std::string mode;
    std::string scale = "normalized";
    int n = 0;
    double mape_pct = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double da_pct = 0.0;
    std::vector<EvalPoint> points;
    std::string config_echo;  // "key=value;key=value"

    std::optional<YearMonth> first_date() const;
    std::optional<YearMonth> last_date() const;
};

EvalReport evaluate(std::string label, std::span<const YearMonth> dates, std::span<const double> actual,
                    std::span<const double> forecast);

/// Flat `key = value` record: label, method, mode, scale, n, mape_pct, rmse,
/// mae, da_pct, test_window, config_echo, followed by one `point = ...` line
/// per observation. Reals are written with 17 significant digits so that
/// parse_report(write_report(r)) restores them exactly.
std::string write_report(const EvalReport& report);
EvalReport parse_report(const std::string& text);

struct ImprovementRate {
    double mape_pct = 0.0;
    double rmse_pct = 0.0;
    double da_pct = 0.0;
};

/// Improvement of A over benchmark B; positive means A is better.
ImprovementRate improvement_rate(const EvalReport& a, const EvalReport& b);
ImprovementRate improvement_rate(double mape_a, double rmse_a, double da_a, double mape_b, double rmse_b,
                                 double da_b);

/// One row of a grid search: the score, or the failure message.
struct GridEntry {
    std::size_t index = 0;
    std::optional<double> mae;
    std::string error;
};

struct GridOutcome {
    std::size_t best = 0;
    std::vector<GridEntry> table;
};

/// Scores every candidate with `score` (validation MAE) and returns the argmin,
/// first in grid order on ties. Failing candidates are recorded, not fatal,
/// unless every candidate fails.
GridOutcome grid_search(std::size_t candidates, const std::function<double(std::size_t)>& score);

}  // namespace hybridcast
