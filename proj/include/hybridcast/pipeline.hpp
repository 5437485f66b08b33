#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hybridcast/clustering.hpp"
#include "hybridcast/kpca.hpp"
#include "hybridcast/panel.hpp"
#include "hybridcast/regressors.hpp"

namespace hybridcast {

enum class FinalRegressor { kelm, elm };

struct PipelineConfig {
    std::optional<int> clusters;  // k; unset selects k by the elbow rule
    int elbow_min = 1;
    int elbow_max = 8;
    KMeansOptions kmeans;
    ComponentSelection selection;     // per-cluster KPCA retention, shared by all clusters
    std::optional<double> kpca_sigma;  // unset: median heuristic per cluster
    FinalRegressor regressor = FinalRegressor::kelm;
    std::optional<double> sigma;  // KELM width; unset: median heuristic on the features
    double c = 100.0;
    int hidden = 100;  // ELM only
    int lag = 1;       // indicators at month t forecast the target at t + lag
    std::uint64_t seed = 42;
    std::optional<YearMonth> train_end;  // rows after it are ignored; unset uses all rows
};

/// Everything learned by pipeline_fit. Indicator order follows the panel.
struct PipelineModel {
    PipelineConfig config;
    std::vector<std::string> indicators;
    std::vector<MinMax> indicator_scaling;
    std::string target;
    MinMax target_scaling;
    std::optional<ElbowResult> elbow;
    ClusterModel clusters;
    std::vector<std::vector<int>> cluster_columns;  // indicator indices per cluster
    std::vector<KpcaModel> kpca;                    // one per cluster
    Kernel kelm_kernel;
    KelmModel kelm;  // set when config.regressor == kelm
    ElmModel elm;    // set when config.regressor == elm
    int train_pairs = 0;
    std::vector<std::string> warnings;

    /// Retained KPCA dimension per cluster.
    std::vector<int> components() const;
    int feature_width() const;
};

struct Forecast {
    YearMonth date;  // the month being forecast
    double normalized = 0.0;
    double raw = 0.0;
};

/// Fits normalization, clustering, per-cluster KPCA and the final regressor
/// on training rows. Every non-target column is an indicator. Errors carry the
/// failing stage as a message prefix.
PipelineModel pipeline_fit(const Panel& panel, const PipelineConfig& config);

/// Concatenated per-cluster KPCA features for every panel row.
Matrix pipeline_features(const PipelineModel& model, const Panel& panel);

/// One forecast per panel row, dated row date + lag.
std::vector<Forecast> pipeline_predict(const PipelineModel& model, const Panel& panel);

/// Indicator columns viewed as series over the rows, min-max scaled: one row
/// per indicator.
Matrix indicator_series(const PipelineModel& model, const Panel& panel);

}  // namespace hybridcast
