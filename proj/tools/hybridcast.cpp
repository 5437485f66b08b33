// hybridcast: ingest panels, run forecasts, compare reports, tune, generate synthetic data.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "hybridcast/commands.hpp"
#include "hybridcast/csv_io.hpp"
#include "hybridcast/error.hpp"

using namespace hybridcast;

namespace {

void apply_overrides(RunConfig& config, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(" \t");
            const auto e = v.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        set_config_value(config, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

RunConfig load_config(const std::string& config_file, const std::string& from, const std::vector<std::string>& sets) {
    if (!config_file.empty() && !from.empty()) throw ValidationError("--config and --from are exclusive");
    RunConfig config;
    if (!config_file.empty()) config = parse_config(read_text(config_file));
    if (!from.empty()) config = config_from_output(from);
    apply_overrides(config, sets);
    return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid K-means / KPCA / KELM forecasting toolkit"};
    app.require_subcommand(1);

    IngestOptions ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate and fuse CSV fragments into a canonical panel");
    ingest_cmd->add_option("--economic", ingest.economic, "Economic indicator CSVs");
    ingest_cmd->add_option("--gsvi", ingest.gsvi, "Search-volume CSVs");
    ingest_cmd->add_option("--target", ingest.target, "Target CSV");
    ingest_cmd->add_option("--input", ingest.inputs, "CSVs tagged by --tags");
    ingest_cmd->add_option("--tags", ingest.tags, "name,tag sidecar for --input files");
    ingest_cmd->add_option("-o,--out", ingest.out, "Output panel CSV")->capture_default_str();

    std::string config_file, from;
    std::vector<std::string> sets;
    auto* run_cmd = app.add_subcommand("run", "Fit one method on one dataset and evaluate the test window");
    run_cmd->add_option("-c,--config", config_file, "Config file (key = value)");
    run_cmd->add_option("--from", from, "Reuse the configuration embedded in an output file");
    run_cmd->add_option("-s,--set", sets, "Override a config key (key=value)");

    std::vector<std::string> reports;
    std::string pairing = "listed", compare_out = "ir.csv";
    auto* compare_cmd = app.add_subcommand("compare", "Improvement-rate table from metrics records");
    compare_cmd->add_option("reports", reports, "Metrics record files")->required();
    compare_cmd->add_option("-p,--pairing", pairing, "listed, dataset or method")->capture_default_str();
    compare_cmd->add_option("-o,--out", compare_out, "Output IR table CSV")->capture_default_str();

    std::vector<std::string> axes;
    double validation = 0.2;
    auto* tune_cmd = app.add_subcommand("tune", "Grid search over config keys by validation MAE");
    tune_cmd->add_option("-c,--config", config_file, "Base config file");
    tune_cmd->add_option("-s,--set", sets, "Override a base config key (key=value)");
    tune_cmd->add_option("-g,--grid", axes, "Grid axis key=v1,v2,...")->required();
    tune_cmd->add_option("--validation", validation, "Fraction of training rows held out")->capture_default_str();

    std::string synth_out = "synth.csv";
    auto* synth_cmd = app.add_subcommand("synth", "Write a planted-structure synthetic panel");
    synth_cmd->add_option("-s,--set", sets, "synth_* config keys (key=value)");
    synth_cmd->add_option("-o,--out", synth_out, "Output panel CSV")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest_cmd) {
            const auto s = cmd_ingest(ingest);
            for (const auto& [file, rows] : s.fragment_rows) std::printf("read %s: %zu rows\n", file.c_str(), rows);
            std::printf("panel: %zu rows, %zu columns, %zu dropped\n", s.rows, s.columns, s.dropped);
            std::printf("wrote %s and %s\n", s.panel_path.c_str(), s.tags_path.c_str());
        } else if (*run_cmd) {
            const auto files = cmd_run(load_config(config_file, from, sets));
            print_warnings(files.warnings);
            const auto& r = files.report;
            std::printf("%s  n=%d  MAPE=%.4f%%  RMSE=%.6g  MAE=%.6g  DA=%.2f%%  (%s scale)\n", r.label.c_str(), r.n,
                        r.mape_pct, r.rmse, r.mae, r.da_pct, r.scale.c_str());
            std::printf("wrote %s\n", files.predictions.parent_path().c_str());
        } else if (*compare_cmd) {
            const auto rows = cmd_compare(reports, parse_pairing(pairing), compare_out);
            for (const auto& row : rows) {
                std::printf("%-40s IR_MAPE=%8.2f%%  IR_RMSE=%8.2f%%  IR_DA=%8.2f%%\n", row.pair.c_str(),
                            row.ir.mape_pct, row.ir.rmse_pct, row.ir.da_pct);
            }
            std::printf("wrote %s\n", compare_out.c_str());
        } else if (*tune_cmd) {
            const auto files = cmd_tune(load_config(config_file, "", sets), axes, validation);
            const auto& best = files.outcome.search.table[files.outcome.search.best];
            std::printf("best grid point %zu: validation MAE %.6g\n", best.index, *best.mae);
            std::printf("wrote %s and %s\n", files.table.c_str(), files.best_config.c_str());
        } else if (*synth_cmd) {
            RunConfig config;
            apply_overrides(config, sets);
            const auto s = cmd_synth(config.synth, synth_out);
            std::printf("synthetic panel: %zu rows, %zu columns\n", s.rows, s.columns);
            std::printf("wrote %s and %s\n", s.panel_path.c_str(), s.tags_path.c_str());
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
