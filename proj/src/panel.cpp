#include "hybridcast/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <map>
#include <set>

#include "hybridcast/error.hpp"

namespace hybridcast {

YearMonth YearMonth::parse(std::string_view text) {
    auto fail = [&] { return ValidationError("malformed date '" + std::string(text) + "', expected YYYY-MM"); };
    if (text.size() != 7 || text[4] != '-') throw fail();
    YearMonth ym;
    auto r1 = std::from_chars(text.data(), text.data() + 4, ym.year);
    auto r2 = std::from_chars(text.data() + 5, text.data() + 7, ym.month);
    if (r1.ec != std::errc{} || r1.ptr != text.data() + 4 || r2.ec != std::errc{} ||
        r2.ptr != text.data() + 7 || ym.month < 1 || ym.month > 12) {
        throw fail();
    }
    return ym;
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::from_index(int index) {
    const int year = index >= 0 ? index / 12 : -((-index + 11) / 12);
    return {year, index - year * 12 + 1};
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::economic: return "economic";
        case Provenance::gsvi: return "gsvi";
        case Provenance::target: return "target";
    }
    return "?";
}

Provenance parse_provenance(std::string_view text) {
    if (text == "economic") return Provenance::economic;
    if (text == "gsvi") return Provenance::gsvi;
    if (text == "target") return Provenance::target;
    throw ValidationError("unknown provenance tag '" + std::string(text) + "' (expected economic, gsvi or target)");
}

const Series* Panel::find(std::string_view name) const {
    for (const auto& c : columns) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const Series& Panel::column(std::string_view name) const {
    if (const auto* c = find(name)) return *c;
    throw ValidationError("missing column '" + std::string(name) + "'");
}

const Series& Panel::target() const {
    const Series* found = nullptr;
    for (const auto& c : columns) {
        if (c.tag != Provenance::target) continue;
        if (found != nullptr) throw ValidationError("panel has more than one target column");
        found = &c;
    }
    if (found == nullptr) throw ValidationError("panel has no target column");
    return *found;
}

std::vector<std::string> Panel::names(std::optional<Provenance> tag) const {
    std::vector<std::string> out;
    for (const auto& c : columns) {
        if (!tag || c.tag == *tag) out.push_back(c.name);
    }
    return out;
}

Panel Panel::slice(std::size_t first, std::size_t count) const {
    Panel out;
    const auto b = static_cast<std::ptrdiff_t>(first);
    const auto e = static_cast<std::ptrdiff_t>(first + count);
    out.dates.assign(dates.begin() + b, dates.begin() + e);
    for (const auto& c : columns) {
        out.columns.push_back({c.name, c.tag, std::vector<double>(c.values.begin() + b, c.values.begin() + e)});
    }
    return out;
}

Panel Panel::select(std::span<const std::string> wanted) const {
    Panel out;
    out.dates = dates;
    for (const auto& name : wanted) out.columns.push_back(column(name));
    return out;
}

void Panel::validate() const {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw ValidationError("dates not strictly increasing at " + dates[i].str());
        }
    }
    std::set<std::string_view> seen;
    for (const auto& c : columns) {
        if (c.values.size() != dates.size()) {
            throw ValidationError("column '" + c.name + "' has " + std::to_string(c.values.size()) +
                                  " values for " + std::to_string(dates.size()) + " dates");
        }
        if (!seen.insert(c.name).second) throw ValidationError("duplicate column '" + c.name + "'");
    }
}

Panel fuse(std::span<const Panel> fragments) {
    if (fragments.empty()) throw ValidationError("fuse: no datasets given");

    std::map<std::string, int> counts;
    for (const auto& f : fragments) {
        f.validate();
        for (const auto& c : f.columns) ++counts[c.name];
    }
    std::string dups;
    for (const auto& [name, n] : counts) {
        if (n > 1) dups += (dups.empty() ? "" : ", ") + name;
    }
    if (!dups.empty()) throw ValidationError("fuse: duplicate column names: " + dups);

    // Dates present in every fragment with no missing cell in any column.
    std::vector<YearMonth> common;
    for (std::size_t i = 0; i < fragments[0].rows(); ++i) common.push_back(fragments[0].dates[i]);
    for (std::size_t f = 1; f < fragments.size(); ++f) {
        std::vector<YearMonth> next;
        std::set_intersection(common.begin(), common.end(), fragments[f].dates.begin(), fragments[f].dates.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) throw ValidationError("fuse: empty intersection of dates");

    auto row_of = [](const Panel& p, YearMonth d) {
        return static_cast<std::size_t>(std::lower_bound(p.dates.begin(), p.dates.end(), d) - p.dates.begin());
    };
    std::vector<YearMonth> kept;
    for (const auto d : common) {
        bool complete = true;
        for (const auto& f : fragments) {
            const auto r = row_of(f, d);
            for (const auto& c : f.columns) complete = complete && std::isfinite(c.values[r]);
        }
        if (complete) kept.push_back(d);
    }
    if (kept.empty()) throw ValidationError("fuse: every common date has a missing value");

    Panel out;
    out.dates = kept;
    for (const auto& f : fragments) {
        for (const auto& c : f.columns) {
            Series s{c.name, c.tag, {}};
            s.values.reserve(kept.size());
            for (const auto d : kept) s.values.push_back(c.values[row_of(f, d)]);
            out.columns.push_back(std::move(s));
        }
    }
    return out;
}

Split train_test_split(const Panel& panel, YearMonth last_train) {
    const auto cut = static_cast<std::size_t>(
        std::upper_bound(panel.dates.begin(), panel.dates.end(), last_train) - panel.dates.begin());
    if (cut == 0) throw ValidationError("split " + last_train.str() + " leaves the training set empty");
    if (cut == panel.rows()) throw ValidationError("split " + last_train.str() + " leaves the test set empty");
    return {panel.slice(0, cut), panel.slice(cut, panel.rows() - cut)};
}

MinMax MinMax::fit(std::span<const double> values) {
    if (values.empty()) throw ValidationError("min-max scaling needs at least one value");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (!(*hi > *lo)) throw ValidationError("constant column cannot be min-max scaled");
    return {*lo, *hi};
}

std::vector<double> MinMax::apply(std::span<const double> values) const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return apply(v); });
    return out;
}

std::vector<double> MinMax::invert(std::span<const double> values) const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return invert(v); });
    return out;
}

}  // namespace hybridcast
