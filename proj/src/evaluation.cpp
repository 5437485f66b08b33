#include "hybridcast/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hybridcast/error.hpp"

namespace hybridcast {

namespace {

void check_pair(std::span<const double> a, std::span<const double> f, std::size_t min_len, const char* what) {
    if (a.size() != f.size()) {
        throw ValidationError(std::string(what) + ": " + std::to_string(a.size()) + " actuals vs " +
                              std::to_string(f.size()) + " forecasts");
    }
    if (a.size() < min_len) {
        throw ValidationError(std::string(what) + ": need at least " + std::to_string(min_len) + " observations");
    }
}

std::string real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ValidationError("report: field '" + key + "' is not a number: " + s);
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

double mape(std::span<const double> actual, std::span<const double> forecast) {
    check_pair(actual, forecast, 1, "mape");
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        if (actual[t] == 0.0) {
            throw NumericalError("mape: actual value at position " + std::to_string(t) + " is zero");
        }
        sum += std::abs((actual[t] - forecast[t]) / actual[t]);
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

double rmse(std::span<const double> actual, std::span<const double> forecast) {
    check_pair(actual, forecast, 1, "rmse");
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) sum += (actual[t] - forecast[t]) * (actual[t] - forecast[t]);
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double mae(std::span<const double> actual, std::span<const double> forecast) {
    check_pair(actual, forecast, 1, "mae");
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) sum += std::abs(actual[t] - forecast[t]);
    return sum / static_cast<double>(actual.size());
}

std::vector<int> direction_hits(std::span<const double> actual, std::span<const double> forecast) {
    check_pair(actual, forecast, 2, "da");
    std::vector<int> hits;
    for (std::size_t t = 0; t + 1 < actual.size(); ++t) {
        hits.push_back((actual[t + 1] - actual[t]) * (forecast[t + 1] - actual[t]) >= 0.0 ? 1 : 0);
    }
    return hits;
}

double da(std::span<const double> actual, std::span<const double> forecast) {
    const auto hits = direction_hits(actual, forecast);
    double correct = 0.0;
    for (int h : hits) correct += h;
    return 100.0 * correct / static_cast<double>(hits.size());
}

std::optional<YearMonth> EvalReport::first_date() const {
    if (points.empty()) return std::nullopt;
    return points.front().date;
}

std::optional<YearMonth> EvalReport::last_date() const {
    if (points.empty()) return std::nullopt;
    return points.back().date;
}

EvalReport evaluate(std::string label, std::span<const YearMonth> dates, std::span<const double> actual,
                    std::span<const double> forecast) {
    if (dates.size() != actual.size()) throw ValidationError("evaluate: dates and values differ in length");
    EvalReport r;
    r.label = std::move(label);
    r.n = static_cast<int>(actual.size());
    r.mape_pct = mape(actual, forecast);
    r.rmse = rmse(actual, forecast);
    r.mae = mae(actual, forecast);
    r.da_pct = da(actual, forecast);
    const auto hits = direction_hits(actual, forecast);
    for (std::size_t t = 0; t < actual.size(); ++t) {
        r.points.push_back({dates[t], actual[t], forecast[t], t == 0 ? -1 : hits[t - 1]});
    }
    return r;
}

std::string write_report(const EvalReport& r) {
    std::ostringstream out;
    out << "label = " << r.label << '\n';
    out << "method = " << r.method << '\n';
    out << "mode = " << r.mode << '\n';
    out << "scale = " << r.scale << '\n';
    out << "n = " << r.n << '\n';
    out << "mape_pct = " << real(r.mape_pct) << '\n';
    out << "rmse = " << real(r.rmse) << '\n';
    out << "mae = " << real(r.mae) << '\n';
    out << "da_pct = " << real(r.da_pct) << '\n';
    out << "test_window = " << (r.points.empty() ? "" : r.first_date()->str() + ".." + r.last_date()->str())
        << '\n';
    out << "config_echo = " << r.config_echo << '\n';
    for (const auto& p : r.points) {
        out << "point = " << p.date.str() << ',' << real(p.actual) << ',' << real(p.forecast) << ',' << p.hit
            << '\n';
    }
    return out.str();
}

EvalReport parse_report(const std::string& text) {
    EvalReport r;
    std::istringstream in(text);
    std::string line;
    bool saw_n = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("report line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "label") r.label = value;
        else if (key == "method") r.method = value;
        else if (key == "mode") r.mode = value;
        else if (key == "scale") r.scale = value;
        else if (key == "n") { r.n = static_cast<int>(parse_real(value, key)); saw_n = true; }
        else if (key == "mape_pct") r.mape_pct = parse_real(value, key);
        else if (key == "rmse") r.rmse = parse_real(value, key);
        else if (key == "mae") r.mae = parse_real(value, key);
        else if (key == "da_pct") r.da_pct = parse_real(value, key);
        else if (key == "config_echo") r.config_echo = value;
        else if (key == "test_window") continue;  // derived from the points
        else if (key == "point") {
            std::istringstream fields(value);
            std::string date, actual, forecast, hit;
            if (!std::getline(fields, date, ',') || !std::getline(fields, actual, ',') ||
                !std::getline(fields, forecast, ',') || !std::getline(fields, hit)) {
                throw ValidationError("report line " + std::to_string(lineno) + ": malformed point");
            }
            r.points.push_back({YearMonth::parse(date), parse_real(actual, key), parse_real(forecast, key),
                                static_cast<int>(parse_real(hit, key))});
        } else {
            throw ValidationError("report line " + std::to_string(lineno) + ": unknown field '" + key + "'");
        }
    }
    if (!saw_n) throw ValidationError("report has no 'n' field");
    return r;
}

ImprovementRate improvement_rate(double mape_a, double rmse_a, double da_a, double mape_b, double rmse_b,
                                 double da_b) {
    if (mape_b == 0.0) throw NumericalError("improvement rate: benchmark MAPE is zero");
    if (rmse_b == 0.0) throw NumericalError("improvement rate: benchmark RMSE is zero");
    if (da_b == 0.0) throw NumericalError("improvement rate: benchmark DA is zero");
    return {-(mape_a - mape_b) / mape_b * 100.0, -(rmse_a - rmse_b) / rmse_b * 100.0,
            (da_a - da_b) / da_b * 100.0};
}

ImprovementRate improvement_rate(const EvalReport& a, const EvalReport& b) {
    return improvement_rate(a.mape_pct, a.rmse, a.da_pct, b.mape_pct, b.rmse, b.da_pct);
}

GridOutcome grid_search(std::size_t candidates, const std::function<double(std::size_t)>& score) {
    if (candidates == 0) throw ValidationError("grid search: empty grid");
    GridOutcome out;
    std::optional<std::size_t> best;
    std::string last_error;
    for (std::size_t i = 0; i < candidates; ++i) {
        GridEntry e{i, std::nullopt, {}};
        try {
            e.mae = score(i);
            if (!best || *e.mae < *out.table[*best].mae) best = i;
        } catch (const std::exception& ex) {
            e.error = ex.what();
            last_error = e.error;
        }
        out.table.push_back(std::move(e));
    }
    if (!best) throw NumericalError("grid search: every configuration failed; last error: " + last_error);
    out.best = *best;
    return out;
}

}  // namespace hybridcast
