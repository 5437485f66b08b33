#include "hybridcast/experiment.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hybridcast/csv_io.hpp"
#include "hybridcast/error.hpp"
#include "hybridcast/regressors.hpp"

namespace hybridcast {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string shortest(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T v{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ValidationError("config key '" + key + "': invalid value '" + value + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) throw ValidationError("config key '" + key + "': value must be finite");
    }
    return v;
}

template <typename T>
std::optional<T> parse_auto(const std::string& key, const std::string& value) {
    if (value == "auto") return std::nullopt;
    return parse_number<T>(key, value);
}

template <typename T>
std::string show_auto(const std::optional<T>& v) {
    if (!v) return "auto";
    if constexpr (std::is_floating_point_v<T>) return shortest(*v);
    else return std::to_string(*v);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
    return out;
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::naive: return "naive";
        case Method::ar: return "ar";
        case Method::elm: return "elm";
        case Method::kelm: return "kelm";
        case Method::kpca_elm: return "kpca+elm";
        case Method::kpca_kelm: return "kpca+kelm";
        case Method::kmeans_kpca_elm: return "kmeans+kpca+elm";
        case Method::kmeans_kpca_kelm: return "kmeans+kpca+kelm";
    }
    return "?";
}

std::string_view to_string(DatasetMode m) {
    switch (m) {
        case DatasetMode::economic: return "E";
        case DatasetMode::gsvi: return "G";
        case DatasetMode::hybrid: return "H";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    for (auto m : {Method::naive, Method::ar, Method::elm, Method::kelm, Method::kpca_elm, Method::kpca_kelm,
                   Method::kmeans_kpca_elm, Method::kmeans_kpca_kelm}) {
        if (to_string(m) == text) return m;
    }
    throw ValidationError("unknown method '" + std::string(text) +
                          "' (naive, ar, elm, kelm, kpca+elm, kpca+kelm, kmeans+kpca+elm, kmeans+kpca+kelm)");
}

DatasetMode parse_mode(std::string_view text) {
    if (text == "E") return DatasetMode::economic;
    if (text == "G") return DatasetMode::gsvi;
    if (text == "H") return DatasetMode::hybrid;
    throw ValidationError("unknown dataset mode '" + std::string(text) + "' (E, G or H)");
}

bool is_multivariate(Method m) {
    return m == Method::kpca_elm || m == Method::kpca_kelm || m == Method::kmeans_kpca_elm ||
           m == Method::kmeans_kpca_kelm;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    auto enum_error = [&](const char* allowed) {
        return ValidationError("config key '" + key + "': invalid value '" + value + "' (" + allowed + ")");
    };
    if (key == "data") {
        if (value == "synth") c.data = DataSource::synth;
        else if (value == "files") c.data = DataSource::files;
        else if (value == "panel") c.data = DataSource::panel;
        else throw enum_error("synth, files or panel");
    } else if (key == "panel") c.panel = value;
    else if (key == "tags") c.tags = value;
    else if (key == "economic") c.economic = split_list(value);
    else if (key == "gsvi") c.gsvi = split_list(value);
    else if (key == "target") c.target = value;
    else if (key == "synth_seed") c.synth.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "synth_months") c.synth.months = parse_number<int>(key, value);
    else if (key == "synth_factors") c.synth.factors = parse_number<int>(key, value);
    else if (key == "synth_series_per_factor") c.synth.series_per_factor = parse_number<int>(key, value);
    else if (key == "synth_noise") c.synth.noise = parse_number<double>(key, value);
    else if (key == "synth_target_noise") c.synth.target_noise = parse_number<double>(key, value);
    else if (key == "synth_lag") c.synth.lag = parse_number<int>(key, value);
    else if (key == "synth_smoothing") c.synth.smoothing = parse_number<int>(key, value);
    else if (key == "synth_start") c.synth.start = YearMonth::parse(value);
    else if (key == "split") c.split = value == "auto" ? std::nullopt : std::optional(YearMonth::parse(value));
    else if (key == "mode") c.mode = parse_mode(value);
    else if (key == "method") c.method = parse_method(value);
    else if (key == "k") c.k = parse_auto<int>(key, value);
    else if (key == "elbow_min") c.elbow_min = parse_number<int>(key, value);
    else if (key == "elbow_max") c.elbow_max = parse_number<int>(key, value);
    else if (key == "kmeans_restarts") c.kmeans_restarts = parse_number<int>(key, value);
    else if (key == "components") c.components = parse_auto<int>(key, value);
    else if (key == "theta") c.theta = parse_number<double>(key, value);
    else if (key == "kpca_sigma") c.kpca_sigma = parse_auto<double>(key, value);
    else if (key == "sigma") c.sigma = parse_auto<double>(key, value);
    else if (key == "C") c.c = parse_number<double>(key, value);
    else if (key == "hidden") c.hidden = parse_number<int>(key, value);
    else if (key == "lag") c.lag = parse_number<int>(key, value);
    else if (key == "uni_lags") c.uni_lags = parse_number<int>(key, value);
    else if (key == "ar_max_p") c.ar_max_p = parse_number<int>(key, value);
    else if (key == "ar_d") c.ar_d = parse_number<int>(key, value);
    else if (key == "ar_criterion") {
        if (value == "aic") c.ar_criterion = InformationCriterion::aic;
        else if (value == "sc") c.ar_criterion = InformationCriterion::sc;
        else throw enum_error("aic or sc");
    } else if (key == "granger") {
        if (value == "none") c.granger = GrangerScope::none;
        else if (value == "gsvi") c.granger = GrangerScope::gsvi;
        else if (value == "all") c.granger = GrangerScope::all;
        else throw enum_error("none, gsvi or all");
    } else if (key == "granger_max_lag") c.granger_max_lag = parse_number<int>(key, value);
    else if (key == "p_threshold") c.p_threshold = parse_number<double>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "metric_scale") {
        if (value == "normalized") c.metric_scale = MetricScale::normalized;
        else if (value == "raw") c.metric_scale = MetricScale::raw;
        else throw enum_error("normalized or raw");
    } else if (key == "output") c.output = value;
    else throw ValidationError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (!seen.insert(key).second) {
            throw ValidationError("config line " + std::to_string(lineno) + ": key '" + key + "' given twice");
        }
        try {
            set_config_value(c, key, trim(t.substr(eq + 1)));
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
    const char* data = c.data == DataSource::synth ? "synth" : c.data == DataSource::files ? "files" : "panel";
    const char* scope = c.granger == GrangerScope::none ? "none" : c.granger == GrangerScope::gsvi ? "gsvi" : "all";
    return {
        {"data", data},
        {"panel", c.panel},
        {"tags", c.tags},
        {"economic", join(c.economic, ",")},
        {"gsvi", join(c.gsvi, ",")},
        {"target", c.target},
        {"synth_seed", std::to_string(c.synth.seed)},
        {"synth_months", std::to_string(c.synth.months)},
        {"synth_factors", std::to_string(c.synth.factors)},
        {"synth_series_per_factor", std::to_string(c.synth.series_per_factor)},
        {"synth_noise", shortest(c.synth.noise)},
        {"synth_target_noise", shortest(c.synth.target_noise)},
        {"synth_lag", std::to_string(c.synth.lag)},
        {"synth_smoothing", std::to_string(c.synth.smoothing)},
        {"synth_start", c.synth.start.str()},
        {"split", c.split ? c.split->str() : "auto"},
        {"mode", std::string(to_string(c.mode))},
        {"method", std::string(to_string(c.method))},
        {"k", show_auto(c.k)},
        {"elbow_min", std::to_string(c.elbow_min)},
        {"elbow_max", std::to_string(c.elbow_max)},
        {"kmeans_restarts", std::to_string(c.kmeans_restarts)},
        {"components", show_auto(c.components)},
        {"theta", shortest(c.theta)},
        {"kpca_sigma", show_auto(c.kpca_sigma)},
        {"sigma", show_auto(c.sigma)},
        {"C", shortest(c.c)},
        {"hidden", std::to_string(c.hidden)},
        {"lag", std::to_string(c.lag)},
        {"uni_lags", std::to_string(c.uni_lags)},
        {"ar_max_p", std::to_string(c.ar_max_p)},
        {"ar_d", std::to_string(c.ar_d)},
        {"ar_criterion", c.ar_criterion == InformationCriterion::aic ? "aic" : "sc"},
        {"granger", scope},
        {"granger_max_lag", std::to_string(c.granger_max_lag)},
        {"p_threshold", shortest(c.p_threshold)},
        {"seed", std::to_string(c.seed)},
        {"metric_scale", c.metric_scale == MetricScale::normalized ? "normalized" : "raw"},
        {"output", c.output},
    };
}

std::string format_config(const RunConfig& c) {
    std::string out;
    for (const auto& [k, v] : config_entries(c)) out += k + " = " + v + "\n";
    return out;
}

std::string config_echo(const RunConfig& c) {
    std::string out;
    for (const auto& [k, v] : config_entries(c)) out += (out.empty() ? "" : ";") + k + "=" + v;
    return out;
}

Panel load_panel(const RunConfig& c) {
    switch (c.data) {
        case DataSource::synth:
            return synth_generate(c.synth).panel;
        case DataSource::panel: {
            if (c.panel.empty()) throw ValidationError("data = panel needs the 'panel' key");
            Panel p = read_panel_csv(c.panel, Provenance::economic);
            if (c.tags.empty()) throw ValidationError("data = panel needs the 'tags' key (column provenance sidecar)");
            apply_tags(p, parse_tags_csv(read_text(c.tags), c.tags));
            const std::array<Panel, 1> one{std::move(p)};
            return fuse(one);
        }
        case DataSource::files: {
            std::vector<Panel> fragments;
            for (const auto& f : c.economic) fragments.push_back(read_panel_csv(f, Provenance::economic));
            for (const auto& f : c.gsvi) fragments.push_back(read_panel_csv(f, Provenance::gsvi));
            if (c.target.empty()) throw ValidationError("data = files needs the 'target' key");
            Panel t = read_panel_csv(c.target, Provenance::target);
            if (t.columns.size() != 1) throw ValidationError("target file must hold exactly one value column");
            fragments.push_back(std::move(t));
            return fuse(fragments);
        }
    }
    throw ValidationError("unknown data source");
}

YearMonth effective_split(const Panel& panel, const RunConfig& config) {
    if (config.split) return *config.split;
    if (panel.rows() < 13) throw ValidationError("panel too short for the default 12-month test window");
    return panel.dates[panel.rows() - 13];
}

Panel prepare_panel(const Panel& panel, const RunConfig& config, YearMonth split, RunDetails& details) {
    const std::string target = panel.target().name;
    if (!is_multivariate(config.method)) {
        const std::array<std::string, 1> only{target};
        return panel.select(only);
    }

    std::vector<std::string> chosen;
    for (const auto& c : panel.columns) {
        const bool take = (c.tag == Provenance::economic && config.mode != DatasetMode::gsvi) ||
                          (c.tag == Provenance::gsvi && config.mode != DatasetMode::economic);
        if (take) chosen.push_back(c.name);
    }

    if (config.granger != GrangerScope::none) {
        std::vector<std::string> candidates;
        for (const auto& name : chosen) {
            if (config.granger == GrangerScope::all || panel.column(name).tag == Provenance::gsvi) {
                candidates.push_back(name);
            }
        }
        if (!candidates.empty()) {
            try {
                const Panel train = train_test_split(panel, split).train;
                GrangerFilter f = granger_filter(train, candidates, {config.granger_max_lag, config.p_threshold});
                const std::set<std::string> dropped = [&] {
                    std::set<std::string> s(candidates.begin(), candidates.end());
                    for (const auto& r : f.retained) s.erase(r);
                    return s;
                }();
                for (const auto& r : f.results) {
                    if (r.status == GrangerResult::Status::inconclusive) {
                        details.warnings.push_back("granger: '" + r.name + "' has a collinear lag design; excluded");
                    }
                }
                std::erase_if(chosen, [&](const std::string& n) { return dropped.contains(n); });
                details.granger = std::move(f.results);
            } catch (...) {
                rethrow_with_stage("granger");
            }
        }
    }
    if (chosen.empty()) throw ValidationError("no indicator columns left for dataset mode " + std::string(to_string(config.mode)));
    details.indicators = chosen;
    chosen.push_back(target);
    return panel.select(chosen);
}

RunOutcome run_forecast(const Panel& input, const RunConfig& config) {
    input.validate();
    const YearMonth split = effective_split(input, config);
    RunOutcome out;
    const Panel panel = prepare_panel(input, config, split, out.details);
    const Split parts = train_test_split(panel, split);
    const std::size_t n_train = parts.train.rows();
    const std::size_t n_test = parts.test.rows();

    out.target_scaling = MinMax::fit(parts.train.target().values);
    out.dates = parts.test.dates;
    out.actual_raw = parts.test.target().values;
    out.actual_normalized = out.target_scaling.apply(out.actual_raw);
    const std::vector<double> history = parts.train.target().values;
    const std::vector<double> scaled = out.target_scaling.apply(panel.target().values);

    auto finish_raw = [&](std::vector<double> raw) {
        out.forecast_raw = std::move(raw);
        out.forecast_normalized = out.target_scaling.apply(out.forecast_raw);
    };
    auto finish_normalized = [&](std::vector<double> normalized) {
        out.forecast_normalized = std::move(normalized);
        out.forecast_raw = out.target_scaling.invert(out.forecast_normalized);
    };

    switch (config.method) {
        case Method::naive:
            finish_raw(naive_forecast(history, static_cast<int>(n_test)));
            break;
        case Method::ar: {
            try {
                out.details.ar = ar_fit(history, config.ar_max_p, config.ar_d, config.ar_criterion);
            } catch (...) {
                rethrow_with_stage("ar");
            }
            finish_raw(ar_forecast(*out.details.ar, history, static_cast<int>(n_test)));
            break;
        }
        case Method::elm:
        case Method::kelm: {
            const std::string stage(to_string(config.method));
            std::vector<double> forecasts;
            try {
                const std::vector<double> train_scaled(scaled.begin(),
                                                       scaled.begin() + static_cast<std::ptrdiff_t>(n_train));
                const LagPairs pairs = univariate_lag_features(train_scaled, config.uni_lags);
                Matrix test_inputs(static_cast<Eigen::Index>(n_test), config.uni_lags);
                for (std::size_t i = 0; i < n_test; ++i) {
                    const std::span<const double> past(scaled.data(), n_train + i);
                    test_inputs.row(static_cast<Eigen::Index>(i)) = latest_lags(past, config.uni_lags).transpose();
                }
                Matrix predicted;
                if (config.method == Method::kelm) {
                    const double width = config.sigma ? *config.sigma : median_pairwise_distance(pairs.inputs);
                    out.details.kernel_width = width;
                    const KelmModel m = kelm_fit(pairs.inputs, pairs.targets, Kernel::gaussian(width), config.c);
                    predicted = kelm_predict(m, test_inputs);
                } else {
                    const ElmModel m = elm_fit(pairs.inputs, pairs.targets, {config.hidden, config.c, config.seed});
                    predicted = elm_predict(m, test_inputs);
                }
                forecasts.assign(predicted.data(), predicted.data() + predicted.size());
            } catch (...) {
                rethrow_with_stage(stage);
            }
            finish_normalized(std::move(forecasts));
            break;
        }
        default: {
            PipelineConfig pc;
            if (config.method == Method::kpca_elm || config.method == Method::kpca_kelm) pc.clusters = 1;
            else pc.clusters = config.k;
            pc.elbow_min = config.elbow_min;
            pc.elbow_max = config.elbow_max;
            pc.kmeans.restarts = config.kmeans_restarts;
            pc.selection = config.components ? ComponentSelection::count(*config.components)
                                             : ComponentSelection::fraction(config.theta);
            pc.kpca_sigma = config.kpca_sigma;
            pc.regressor = config.method == Method::kpca_kelm || config.method == Method::kmeans_kpca_kelm
                               ? FinalRegressor::kelm
                               : FinalRegressor::elm;
            pc.sigma = config.sigma;
            pc.c = config.c;
            pc.hidden = config.hidden;
            pc.lag = config.lag;
            pc.seed = config.seed;
            pc.train_end = split;

            PipelineModel model = pipeline_fit(panel, pc);
            const std::vector<Forecast> all = pipeline_predict(model, panel);
            std::map<int, double> by_month;
            for (const auto& f : all) by_month[f.date.index()] = f.normalized;
            std::vector<double> forecasts;
            for (const auto d : out.dates) {
                const auto it = by_month.find(d.index());
                if (it == by_month.end()) {
                    throw ValidationError("no indicator row at " + d.plus(-config.lag).str() + " to forecast " + d.str());
                }
                forecasts.push_back(it->second);
            }
            for (const auto& w : model.warnings) out.details.warnings.push_back(w);
            out.details.pipeline = std::move(model);
            finish_normalized(std::move(forecasts));
        }
    }
    return out;
}

EvalReport RunOutcome::report(const RunConfig& config, MetricScale scale) const {
    const bool raw = scale == MetricScale::raw;
    EvalReport r = evaluate(std::string(to_string(config.method)) + "/" + std::string(to_string(config.mode)), dates,
                            raw ? actual_raw : actual_normalized, raw ? forecast_raw : forecast_normalized);
    r.method = to_string(config.method);
    r.mode = to_string(config.mode);
    r.scale = raw ? "raw" : "normalized";
    r.config_echo = config_echo(config);
    return r;
}

std::vector<GridPoint> expand_grid(const std::vector<std::string>& axes) {
    std::vector<GridPoint> grid{GridPoint{}};
    for (const auto& axis : axes) {
        const auto eq = axis.find('=');
        if (eq == std::string::npos) throw ValidationError("grid axis '" + axis + "' must look like key=v1,v2");
        const std::string key = trim(axis.substr(0, eq));
        const auto values = split_list(axis.substr(eq + 1));
        if (values.empty()) throw ValidationError("grid axis '" + key + "' has no values");
        std::vector<GridPoint> next;
        for (const auto& point : grid) {
            for (const auto& v : values) {
                GridPoint p = point;
                p.emplace_back(key, v);
                next.push_back(std::move(p));
            }
        }
        grid = std::move(next);
    }
    return grid;
}

TuneOutcome tune(const Panel& panel, const RunConfig& base, const std::vector<GridPoint>& grid,
                 double validation_fraction) {
    if (!(validation_fraction > 0.0 && validation_fraction <= 0.5)) {
        throw ValidationError("validation fraction must lie in (0, 0.5]");
    }
    if (grid.empty()) throw ValidationError("grid search: empty grid");
    const Panel train = train_test_split(panel, effective_split(panel, base)).train;
    const auto n_val = static_cast<std::size_t>(std::lround(validation_fraction * static_cast<double>(train.rows())));
    if (n_val < 1 || n_val >= train.rows()) throw ValidationError("validation window is empty or covers all training rows");
    const YearMonth inner_split = train.dates[train.rows() - n_val - 1];

    std::vector<RunConfig> configs;
    for (const auto& point : grid) {
        RunConfig c = base;
        for (const auto& [k, v] : point) set_config_value(c, k, v);
        c.split = inner_split;
        configs.push_back(std::move(c));
    }

    TuneOutcome out;
    out.grid = grid;
    out.search = grid_search(configs.size(), [&](std::size_t i) {
        const RunOutcome r = run_forecast(train, configs[i]);
        return mae(r.actual_normalized, r.forecast_normalized);
    });
    out.best = base;
    for (const auto& [k, v] : grid[out.search.best]) set_config_value(out.best, k, v);
    return out;
}

}  // namespace hybridcast
