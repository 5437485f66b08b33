#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hybridcast/panel.hpp"

namespace hybridcast {

/// Splits one CSV line; double quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_csv_line(const std::string& line);

/// Reads a panel CSV: mandatory header whose first column is `date`, dates as
/// YYYY-MM, numeric cells with '.' decimals. Empty cells and NA become NaN
/// (missing). Every column gets `tag`. Errors cite file, line and column.
Panel parse_panel_csv(const std::string& text, Provenance tag, const std::string& source = "<input>");
Panel read_panel_csv(const std::filesystem::path& path, Provenance tag);

/// Canonical panel CSV: reals with 17 significant digits.
std::string format_panel_csv(const Panel& panel);

/// Column-provenance sidecar: header `name,tag`, one row per column.
std::map<std::string, Provenance> parse_tags_csv(const std::string& text, const std::string& source = "<input>");
std::string format_tags_csv(const Panel& panel);

/// Re-tags panel columns from a sidecar; every column must be listed.
void apply_tags(Panel& panel, const std::map<std::string, Provenance>& tags);

std::string read_text(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hybridcast
