#include "hybridcast/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hybridcast/error.hpp"

namespace hybridcast {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(trim(field));
    return out;
}

Panel parse_panel_csv(const std::string& text, Provenance tag, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty() || line[0] == '#') continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw ValidationError(source + ": missing header row");
    if (header[0] != "date") throw ValidationError(source + ": first header column must be 'date', got '" + header[0] + "'");
    if (header.size() < 2) throw ValidationError(source + ": no data columns");

    Panel panel;
    std::set<std::string> seen;
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j].empty()) throw ValidationError(source + ": empty column name in header");
        if (!seen.insert(header[j]).second) throw ValidationError(source + ": duplicate column '" + header[j] + "'");
        panel.columns.push_back({header[j], tag, {}});
    }

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        const std::string where = source + ":" + std::to_string(lineno);
        if (cells.size() != header.size()) {
            throw ValidationError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(cells.size()));
        }
        try {
            panel.dates.push_back(YearMonth::parse(cells[0]));
        } catch (const ValidationError& e) {
            throw ValidationError(where + ", column 'date': " + e.what());
        }
        for (std::size_t j = 1; j < cells.size(); ++j) {
            const std::string& cell = cells[j];
            double v = std::numeric_limits<double>::quiet_NaN();
            if (!cell.empty() && cell != "NA" && cell != "NaN") {
                const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                    throw ValidationError(where + ", column '" + header[j] + "': non-numeric cell '" + cell + "'");
                }
            }
            panel.columns[j - 1].values.push_back(v);
        }
    }
    try {
        panel.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return panel;
}

Panel read_panel_csv(const std::filesystem::path& path, Provenance tag) {
    return parse_panel_csv(read_text(path), tag, path.string());
}

std::string format_panel_csv(const Panel& panel) {
    std::string out = "date";
    for (const auto& c : panel.columns) out += "," + quote_if_needed(c.name);
    out += '\n';
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        out += panel.dates[r].str();
        for (const auto& c : panel.columns) out += "," + (std::isfinite(c.values[r]) ? real(c.values[r]) : "");
        out += '\n';
    }
    return out;
}

std::map<std::string, Provenance> parse_tags_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    std::map<std::string, Provenance> tags;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        const std::string where = source + ":" + std::to_string(lineno);
        if (!header) {
            if (cells.size() != 2 || cells[0] != "name" || cells[1] != "tag") {
                throw ValidationError(where + ": tag sidecar header must be 'name,tag'");
            }
            header = true;
            continue;
        }
        if (cells.size() != 2) throw ValidationError(where + ": expected 'name,tag'");
        try {
            if (!tags.emplace(cells[0], parse_provenance(cells[1])).second) {
                throw ValidationError("column '" + cells[0] + "' listed twice");
            }
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    if (!header) throw ValidationError(source + ": empty tag sidecar");
    return tags;
}

std::string format_tags_csv(const Panel& panel) {
    std::string out = "name,tag\n";
    for (const auto& c : panel.columns) out += quote_if_needed(c.name) + "," + std::string(to_string(c.tag)) + "\n";
    return out;
}

void apply_tags(Panel& panel, const std::map<std::string, Provenance>& tags) {
    for (auto& c : panel.columns) {
        const auto it = tags.find(c.name);
        if (it == tags.end()) throw ValidationError("column '" + c.name + "' has no entry in the tag sidecar");
        c.tag = it->second;
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw ValidationError("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace hybridcast
