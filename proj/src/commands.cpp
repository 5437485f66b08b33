#include "hybridcast/commands.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "hybridcast/csv_io.hpp"
#include "hybridcast/error.hpp"

namespace hybridcast {

namespace {

std::string real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string embedded_config(const RunConfig& config) {
    std::string out;
    for (const auto& [k, v] : config_entries(config)) out += "# " + k + " = " + v + "\n";
    return out;
}

std::string model_summary(const RunConfig& config, const RunDetails& d) {
    std::ostringstream out;
    out << embedded_config(config);
    out << "method = " << to_string(config.method) << '\n';
    out << "mode = " << to_string(config.mode) << '\n';
    if (!d.indicators.empty()) {
        out << "indicators = ";
        for (std::size_t i = 0; i < d.indicators.size(); ++i) out << (i ? "," : "") << d.indicators[i];
        out << '\n';
    }
    for (const auto& g : d.granger) {
        out << "granger = " << g.name << ",f=" << real(g.f_statistic) << ",p=" << real(g.p_value) << ","
            << to_string(g.status) << '\n';
    }
    if (d.pipeline) {
        const PipelineModel& m = *d.pipeline;
        if (m.elbow) {
            out << "elbow_curve = ";
            for (std::size_t i = 0; i < m.elbow->wcss_curve.size(); ++i) {
                out << (i ? "," : "") << "k" << m.elbow->k_min + static_cast<int>(i) << ":" << real(m.elbow->wcss_curve[i]);
            }
            out << '\n';
        }
        out << "k = " << m.clusters.k << '\n';
        out << "wcss = " << real(m.clusters.wcss) << '\n';
        for (std::size_t c = 0; c < m.cluster_columns.size(); ++c) {
            out << "cluster_" << c + 1 << " = ";
            for (std::size_t i = 0; i < m.cluster_columns[c].size(); ++i) {
                out << (i ? "," : "") << m.indicators[static_cast<std::size_t>(m.cluster_columns[c][i])];
            }
            out << '\n';
            out << "cluster_" << c + 1 << "_components = " << m.kpca[c].components() << '\n';
            out << "cluster_" << c + 1 << "_kpca_sigma = " << real(m.kpca[c].kernel.sigma) << '\n';
        }
        out << "feature_width = " << m.feature_width() << '\n';
        out << "train_pairs = " << m.train_pairs << '\n';
        if (m.config.regressor == FinalRegressor::kelm) out << "kelm_sigma = " << real(m.kelm_kernel.sigma) << '\n';
    }
    if (d.ar) {
        out << "ar_p = " << d.ar->p << '\n';
        out << "ar_d = " << d.ar->d << '\n';
        out << "ar_coefficients = ";
        for (Eigen::Index i = 0; i < d.ar->coefficients.size(); ++i) out << (i ? "," : "") << real(d.ar->coefficients(i));
        out << '\n';
    }
    if (d.kernel_width) out << "kelm_sigma = " << real(*d.kernel_width) << '\n';
    for (const auto& w : d.warnings) out << "warning = " << w << '\n';
    return out.str();
}

bool same_window(const EvalReport& a, const EvalReport& b) {
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (a.points[i].date != b.points[i].date) return false;
    }
    return true;
}

IrRow make_row(std::string label, const EvalReport& a, const EvalReport& b) {
    if (a.scale != b.scale) {
        throw ValidationError("cannot compare '" + a.label + "' (" + a.scale + ") with '" + b.label + "' (" + b.scale +
                              "): different metric scales");
    }
    if (!same_window(a, b)) {
        throw ValidationError("cannot compare '" + a.label + "' with '" + b.label + "': different test windows");
    }
    return {std::move(label), improvement_rate(a, b)};
}

}  // namespace

std::filesystem::path tags_path_for(const std::filesystem::path& panel_csv) {
    std::filesystem::path p = panel_csv;
    p.replace_extension();
    return p.string() + ".tags.csv";
}

IngestSummary cmd_ingest(const IngestOptions& o) {
    std::vector<Panel> fragments;
    IngestSummary s;
    auto add = [&](const std::string& path, Provenance tag) {
        fragments.push_back(read_panel_csv(path, tag));
        s.fragment_rows.emplace_back(path, fragments.back().rows());
    };
    for (const auto& f : o.economic) add(f, Provenance::economic);
    for (const auto& f : o.gsvi) add(f, Provenance::gsvi);
    for (const auto& f : o.target) add(f, Provenance::target);
    if (!o.inputs.empty()) {
        if (o.tags.empty()) throw ValidationError("untagged inputs need a tag sidecar (--tags)");
        const auto tags = parse_tags_csv(read_text(o.tags), o.tags);
        for (const auto& f : o.inputs) {
            add(f, Provenance::economic);
            apply_tags(fragments.back(), tags);
        }
    }
    if (fragments.empty()) throw ValidationError("ingest: no input files");

    const Panel panel = fuse(fragments);
    (void)panel.target();  // exactly one target column

    std::set<YearMonth> all_dates;
    for (const auto& f : fragments) all_dates.insert(f.dates.begin(), f.dates.end());
    s.rows = panel.rows();
    s.columns = panel.columns.size();
    s.dropped = all_dates.size() - panel.rows();
    s.panel_path = o.out;
    s.tags_path = tags_path_for(o.out);
    write_text_atomic(s.panel_path, format_panel_csv(panel));
    write_text_atomic(s.tags_path, format_tags_csv(panel));
    return s;
}

IngestSummary cmd_synth(const SynthSpec& spec, const std::filesystem::path& out) {
    const SynthData data = synth_generate(spec);
    IngestSummary s;
    s.rows = data.panel.rows();
    s.columns = data.panel.columns.size();
    s.panel_path = out;
    s.tags_path = tags_path_for(out);
    write_text_atomic(s.panel_path, format_panel_csv(data.panel));
    write_text_atomic(s.tags_path, format_tags_csv(data.panel));
    return s;
}

RunFiles cmd_run(const RunConfig& config) {
    Panel panel;
    try {
        panel = load_panel(config);
    } catch (...) {
        rethrow_with_stage("load");
    }
    const RunOutcome outcome = run_forecast(panel, config);

    RunFiles files;
    const std::filesystem::path dir = config.output;
    files.predictions = dir / "predictions.csv";
    files.metrics = dir / "metrics.txt";
    files.metrics_other =
        dir / (config.metric_scale == MetricScale::normalized ? "metrics_raw.txt" : "metrics_normalized.txt");
    files.model = dir / "model.txt";

    std::string csv = embedded_config(config);
    csv += "date,actual,forecast_raw,forecast_normalized\n";
    for (std::size_t i = 0; i < outcome.dates.size(); ++i) {
        csv += outcome.dates[i].str() + "," + real(outcome.actual_raw[i]) + "," + real(outcome.forecast_raw[i]) + "," +
               real(outcome.forecast_normalized[i]) + "\n";
    }

    const MetricScale other =
        config.metric_scale == MetricScale::normalized ? MetricScale::raw : MetricScale::normalized;
    files.report = outcome.report(config, config.metric_scale);
    const EvalReport other_report = outcome.report(config, other);
    files.warnings = outcome.details.warnings;

    write_text_atomic(files.predictions, csv);
    write_text_atomic(files.metrics, write_report(files.report));
    write_text_atomic(files.metrics_other, write_report(other_report));
    write_text_atomic(files.model, model_summary(config, outcome.details));
    return files;
}

RunConfig config_from_output(const std::filesystem::path& file) {
    std::istringstream in(read_text(file));
    std::string line;
    std::string text;
    while (std::getline(in, line)) {
        if (line.starts_with("# ") && line.find(" = ") != std::string::npos) {
            text += line.substr(2) + "\n";
        } else if (line.starts_with("config_echo = ")) {
            std::istringstream items(line.substr(14));
            std::string item;
            while (std::getline(items, item, ';')) {
                const auto eq = item.find('=');
                if (eq != std::string::npos) text += item.substr(0, eq) + " = " + item.substr(eq + 1) + "\n";
            }
        }
    }
    if (text.empty()) throw ValidationError("'" + file.string() + "' carries no embedded configuration");
    return parse_config(text);
}

Pairing parse_pairing(std::string_view text) {
    if (text == "listed") return Pairing::listed;
    if (text == "dataset" || text == "dataset-pairs") return Pairing::dataset;
    if (text == "method" || text == "method-pairs") return Pairing::method;
    throw ValidationError("unknown pairing '" + std::string(text) + "' (listed, dataset or method)");
}

std::vector<IrRow> compare_reports(const std::vector<EvalReport>& reports, Pairing pairing) {
    if (reports.size() < 2) throw ValidationError("compare needs at least two reports");
    std::vector<IrRow> rows;
    switch (pairing) {
        case Pairing::listed:
            if (reports.size() % 2 != 0) throw ValidationError("listed pairing needs an even number of reports");
            for (std::size_t i = 0; i < reports.size(); i += 2) {
                rows.push_back(make_row(reports[i].label + " -> " + reports[i + 1].label, reports[i], reports[i + 1]));
            }
            break;
        case Pairing::dataset: {
            std::vector<std::string> order;
            std::map<std::string, std::map<std::string, const EvalReport*>> by_method;
            for (const auto& r : reports) {
                if (!by_method.contains(r.method)) order.push_back(r.method);
                if (!by_method[r.method].emplace(r.mode, &r).second) {
                    throw ValidationError("two reports for method " + r.method + " on dataset " + r.mode);
                }
            }
            for (const auto& m : order) {
                const auto& modes = by_method[m];
                for (const auto& [a, b] : {std::pair{"E", "G"}, {"H", "G"}, {"H", "E"}}) {
                    if (modes.contains(a) && modes.contains(b)) {
                        rows.push_back(make_row(std::string(a) + " -> " + b + " (" + m + ")", *modes.at(a), *modes.at(b)));
                    }
                }
            }
            break;
        }
        case Pairing::method: {
            std::vector<std::string> order;
            std::map<std::string, std::map<std::string, const EvalReport*>> by_mode;
            for (const auto& r : reports) {
                if (!by_mode.contains(r.mode)) order.push_back(r.mode);
                if (!by_mode[r.mode].emplace(r.method, &r).second) {
                    throw ValidationError("two reports for method " + r.method + " on dataset " + r.mode);
                }
            }
            for (const auto& d : order) {
                const auto& methods = by_mode[d];
                for (const auto& [a, b] : {std::pair{"kmeans+kpca+elm", "kpca+elm"}, {"kmeans+kpca+kelm", "kpca+kelm"}}) {
                    if (methods.contains(a) && methods.contains(b)) {
                        rows.push_back(make_row(std::string(a) + " -> " + b + " (" + d + ")", *methods.at(a), *methods.at(b)));
                    }
                }
            }
            break;
        }
    }
    if (rows.empty()) throw ValidationError("no comparable report pairs for the requested pairing");
    return rows;
}

std::string format_ir_table(const std::vector<IrRow>& rows, const std::vector<EvalReport>& reports, Pairing pairing) {
    std::string out = "# pairing = ";
    out += pairing == Pairing::listed ? "listed" : pairing == Pairing::dataset ? "dataset" : "method";
    out += "\n";
    for (const auto& r : reports) out += "# report = " + r.label + " | " + r.config_echo + "\n";
    out += "pair,ir_mape_pct,ir_rmse_pct,ir_da_pct\n";
    for (const auto& row : rows) {
        out += row.pair + "," + fixed4(row.ir.mape_pct) + "," + fixed4(row.ir.rmse_pct) + "," + fixed4(row.ir.da_pct) + "\n";
    }
    return out;
}

std::vector<IrRow> cmd_compare(const std::vector<std::string>& report_files, Pairing pairing,
                               const std::filesystem::path& out) {
    std::vector<EvalReport> reports;
    for (const auto& f : report_files) {
        try {
            reports.push_back(parse_report(read_text(f)));
        } catch (const ValidationError& e) {
            throw ValidationError(f + ": " + e.what());
        }
    }
    auto rows = compare_reports(reports, pairing);
    write_text_atomic(out, format_ir_table(rows, reports, pairing));
    return rows;
}

TuneFiles cmd_tune(const RunConfig& config, const std::vector<std::string>& axes, double validation_fraction) {
    Panel panel;
    try {
        panel = load_panel(config);
    } catch (...) {
        rethrow_with_stage("load");
    }
    TuneFiles files;
    files.outcome = tune(panel, config, expand_grid(axes), validation_fraction);
    const std::filesystem::path dir = config.output;
    files.table = dir / "tune.csv";
    files.best_config = dir / "best.cfg";

    std::string csv = embedded_config(config);
    csv += "# validation_fraction = " + real(validation_fraction) + "\n";
    csv += "index";
    for (const auto& [k, v] : files.outcome.grid.front()) csv += "," + k;
    csv += ",mae,status\n";
    for (const auto& e : files.outcome.search.table) {
        csv += std::to_string(e.index);
        for (const auto& [k, v] : files.outcome.grid[e.index]) csv += "," + v;
        csv += "," + (e.mae ? real(*e.mae) : std::string()) + ",";
        std::string status = e.mae ? (e.index == files.outcome.search.best ? "best" : "ok") : "failed: " + e.error;
        for (auto& ch : status) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        csv += status + "\n";
    }
    write_text_atomic(files.table, csv);
    write_text_atomic(files.best_config, format_config(files.outcome.best));
    return files;
}

}  // namespace hybridcast
