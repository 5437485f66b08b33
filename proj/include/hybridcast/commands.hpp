#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hybridcast/evaluation.hpp"
#include "hybridcast/experiment.hpp"

namespace hybridcast {

struct IngestOptions {
    std::vector<std::string> economic;
    std::vector<std::string> gsvi;
    std::vector<std::string> target;
    std::vector<std::string> inputs;  // tagged by `tags`
    std::string tags;                 // sidecar for `inputs`
    std::string out = "panel.csv";    // the tag sidecar goes next to it as <stem>.tags.csv
};

struct IngestSummary {
    std::vector<std::pair<std::string, std::size_t>> fragment_rows;
    std::size_t rows = 0;
    std::size_t columns = 0;
    std::size_t dropped = 0;  // rows of the date union absent from the fused panel
    std::filesystem::path panel_path;
    std::filesystem::path tags_path;
};

/// Validates, fuses and writes a canonical panel plus its tag sidecar.
IngestSummary cmd_ingest(const IngestOptions& options);

std::filesystem::path tags_path_for(const std::filesystem::path& panel_csv);

struct RunFiles {
    std::filesystem::path predictions;
    std::filesystem::path metrics;       // configured metric scale
    std::filesystem::path metrics_other;  // the other scale
    std::filesystem::path model;
    EvalReport report;
    std::vector<std::string> warnings;
};

/// Runs one method/dataset combination and writes predictions.csv,
/// metrics.txt, metrics_<other scale>.txt and model.txt under config.output.
RunFiles cmd_run(const RunConfig& config);

/// Extracts the configuration embedded as "# key = value" lines in an output file.
RunConfig config_from_output(const std::filesystem::path& file);

enum class Pairing {
    listed,   // reports taken two at a time: first -> second
    dataset,  // per method: H -> E, H -> G, E -> G
    method,   // per dataset: kmeans+kpca+X -> kpca+X
};
Pairing parse_pairing(std::string_view text);

struct IrRow {
    std::string pair;
    ImprovementRate ir;
};

std::vector<IrRow> compare_reports(const std::vector<EvalReport>& reports, Pairing pairing);
std::string format_ir_table(const std::vector<IrRow>& rows, const std::vector<EvalReport>& reports, Pairing pairing);

/// Reads report files, pairs them and writes the IR table CSV to `out`.
std::vector<IrRow> cmd_compare(const std::vector<std::string>& report_files, Pairing pairing,
                               const std::filesystem::path& out);

struct TuneFiles {
    std::filesystem::path table;
    std::filesystem::path best_config;
    TuneOutcome outcome;
};

/// Grid search; writes tune.csv (one row per grid point) and best.cfg under config.output.
TuneFiles cmd_tune(const RunConfig& config, const std::vector<std::string>& axes, double validation_fraction);

/// Writes a synthetic panel and its sidecar.
IngestSummary cmd_synth(const SynthSpec& spec, const std::filesystem::path& out);

}  // namespace hybridcast
