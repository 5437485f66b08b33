#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybridcast/baselines.hpp"
#include "hybridcast/evaluation.hpp"
#include "hybridcast/granger.hpp"
#include "hybridcast/panel.hpp"
#include "hybridcast/pipeline.hpp"
#include "hybridcast/synth.hpp"

namespace hybridcast {

enum class Method { naive, ar, elm, kelm, kpca_elm, kpca_kelm, kmeans_kpca_elm, kmeans_kpca_kelm };
enum class DatasetMode { economic, gsvi, hybrid };  // E, G, H
enum class DataSource { synth, files, panel };
enum class GrangerScope { none, gsvi, all };
enum class MetricScale { normalized, raw };

std::string_view to_string(Method m);
std::string_view to_string(DatasetMode m);  // "E", "G", "H"
Method parse_method(std::string_view text);
DatasetMode parse_mode(std::string_view text);

bool is_multivariate(Method m);

/// Everything one forecasting run needs. Every field has a default; the
/// effective values are echoed into every output file. Key names and
/// defaults are listed in docs/config.md.
struct RunConfig {
    DataSource data = DataSource::synth;
    std::string panel;                 // data = panel: canonical panel CSV
    std::string tags;                  // data = panel: tag sidecar
    std::vector<std::string> economic;  // data = files
    std::vector<std::string> gsvi;
    std::string target;
    SynthSpec synth;                   // data = synth

    std::optional<YearMonth> split;  // last training month; unset: the final 12 rows are the test set
    DatasetMode mode = DatasetMode::hybrid;
    Method method = Method::kmeans_kpca_kelm;

    std::optional<int> k;
    int elbow_min = 1;
    int elbow_max = 8;
    int kmeans_restarts = 20;
    std::optional<int> components;
    double theta = 0.95;
    std::optional<double> kpca_sigma;
    std::optional<double> sigma;
    double c = 100.0;
    int hidden = 100;
    int lag = 1;

    int uni_lags = 12;
    int ar_max_p = 12;
    int ar_d = 1;
    InformationCriterion ar_criterion = InformationCriterion::aic;

    GrangerScope granger = GrangerScope::gsvi;
    int granger_max_lag = 3;
    double p_threshold = 0.1;

    std::uint64_t seed = 42;
    MetricScale metric_scale = MetricScale::normalized;
    std::string output = "out";
};

/// Sets one field from its config-file key; throws ValidationError on an
/// unknown key or a malformed value.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Parses flat `key = value` text; '#' starts a comment line.
RunConfig parse_config(const std::string& text);

/// Effective configuration as ordered key/value pairs; feeding them back
/// through set_config_value reproduces `config`.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);
std::string format_config(const RunConfig& config);
std::string config_echo(const RunConfig& config);  // "key=value;key=value"

Panel load_panel(const RunConfig& config);

/// Diagnostic details of a run, for the model summary.
struct RunDetails {
    std::vector<std::string> indicators;  // after mode selection and Granger filtering
    std::vector<GrangerResult> granger;
    std::optional<PipelineModel> pipeline;
    std::optional<ArModel> ar;
    std::optional<double> kernel_width;  // univariate KELM
    std::vector<std::string> warnings;
};

struct RunOutcome {
    std::vector<YearMonth> dates;  // test months
    std::vector<double> actual_raw;
    std::vector<double> actual_normalized;
    std::vector<double> forecast_raw;
    std::vector<double> forecast_normalized;
    MinMax target_scaling;
    RunDetails details;

    EvalReport report(const RunConfig& config, MetricScale scale) const;
};

YearMonth effective_split(const Panel& panel, const RunConfig& config);

/// Selects indicators for the dataset mode and, for multivariate methods,
/// Granger-filters the configured scope on training rows. Returns the
/// reduced panel (indicators plus target).
Panel prepare_panel(const Panel& panel, const RunConfig& config, YearMonth split, RunDetails& details);

/// Fits the configured method on rows up to the split and forecasts every
/// later row.
RunOutcome run_forecast(const Panel& panel, const RunConfig& config);

/// One override set of a tuning grid: key/value pairs applied over a base config.
using GridPoint = std::vector<std::pair<std::string, std::string>>;

/// Cartesian product of `key=v1,v2,...` axes, in axis order with the last axis
/// varying fastest.
std::vector<GridPoint> expand_grid(const std::vector<std::string>& axes);

struct TuneOutcome {
    std::vector<GridPoint> grid;
    GridOutcome search;
    RunConfig best;
};

/// MAE-minimizing search: the training rows are split chronologically and the
/// last `validation_fraction` of them are forecast by each grid point fitted on
/// the rest. MAE is measured on the normalized target.
TuneOutcome tune(const Panel& panel, const RunConfig& base, const std::vector<GridPoint>& grid,
                 double validation_fraction);

}  // namespace hybridcast
