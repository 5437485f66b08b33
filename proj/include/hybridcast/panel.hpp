#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridcast/numerics.hpp"

namespace hybridcast {

/// A calendar month.
struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    /// Parses "YYYY-MM"; throws ValidationError otherwise.
    static YearMonth parse(std::string_view text);
    std::string str() const;

    /// Months since year 0; differences give month offsets.
    int index() const { return year * 12 + (month - 1); }
    static YearMonth from_index(int index);
    YearMonth plus(int months) const { return from_index(index() + months); }

    auto operator<=>(const YearMonth&) const = default;
};

enum class Provenance { economic, gsvi, target };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

struct Series {
    std::string name;
    Provenance tag = Provenance::economic;
    std::vector<double> values;
};

/// Date-aligned named columns. A complete panel holds exactly one column
/// tagged `target`; fragments may hold any subset. Missing cells are NaN
/// until fuse() drops their rows.
struct Panel {
    std::vector<YearMonth> dates;
    std::vector<Series> columns;

    std::size_t rows() const { return dates.size(); }
    const Series& column(std::string_view name) const;
    const Series* find(std::string_view name) const;
    const Series& target() const;
    std::vector<std::string> names(std::optional<Provenance> tag = std::nullopt) const;

    /// Rows [first, first + count).
    Panel slice(std::size_t first, std::size_t count) const;
    Panel select(std::span<const std::string> names) const;

    /// Strictly increasing dates and equal column lengths; throws otherwise.
    void validate() const;
};

/// Inner join on date, dropping rows with any missing value. Column names
/// must be unique across fragments.
Panel fuse(std::span<const Panel> fragments);

/// Rows dated at or before `last_train` go to train; the rest to test.
struct Split {
    Panel train;
    Panel test;
};
Split train_test_split(const Panel& panel, YearMonth last_train);

/// Per-column min-max scaling to [0, 1] fitted on training values. Values
/// outside the training range map outside [0, 1]; nothing is clipped.
struct MinMax {
    double min = 0.0;
    double max = 1.0;

    static MinMax fit(std::span<const double> values);
    double apply(double v) const { return (v - min) / (max - min); }
    double invert(double v) const { return min + v * (max - min); }
    std::vector<double> apply(std::span<const double> values) const;
    std::vector<double> invert(std::span<const double> values) const;

    bool operator==(const MinMax&) const = default;
};

}  // namespace hybridcast
