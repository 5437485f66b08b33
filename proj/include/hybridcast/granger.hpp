#pragma once

#include <span>
#include <string>
#include <vector>

#include "hybridcast/panel.hpp"

namespace hybridcast {

struct GrangerOptions {
    int max_lag = 3;
    double p_threshold = 0.1;
};

struct GrangerResult {
    enum class Status { retained, rejected, inconclusive };

    std::string name;
    double f_statistic = 0.0;
    double p_value = 1.0;
    double sse_restricted = 0.0;
    double sse_unrestricted = 0.0;
    int df_num = 0;
    int df_den = 0;
    Status status = Status::rejected;
};

std::string_view to_string(GrangerResult::Status s);

/// Nested-regression F test of whether lags 1..max_lag of x improve an OLS
/// regression of y on an intercept and its own lags 1..max_lag.
/// A rank-deficient unrestricted design yields `inconclusive`; its SSEs and
/// F are still reported (the least-squares residual is unique).
GrangerResult granger_test(std::span<const double> y, std::span<const double> x, int max_lag,
                           double p_threshold = 0.1);

/// Runs granger_test of every candidate column against the panel's target
/// over all panel rows, retaining those with p <= p_threshold.
struct GrangerFilter {
    std::vector<GrangerResult> results;  // one per candidate, in candidate order
    std::vector<std::string> retained;
};

GrangerFilter granger_filter(const Panel& panel, std::span<const std::string> candidates,
                             const GrangerOptions& options = {});

}  // namespace hybridcast
