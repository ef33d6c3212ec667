#include "corrcomplete/pattern.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace corrcomplete {

namespace {

using nlohmann::json;

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_cell_value(const std::string& cell, const std::string& context) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw InvalidInput("invalid numeric value '" + cell + "' " + context);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

PartialMatrix parse_partial_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("JSON input must be an object");
    if (!j.contains("labels") || !j["labels"].is_array())
        throw InvalidInput("JSON input must contain a \"labels\" array");

    std::vector<Label> labels;
    for (const auto& l : j["labels"]) {
        if (!l.is_string()) throw InvalidInput("labels must be strings");
        labels.push_back(l.get<std::string>());
    }
    validate_labels(labels);

    std::unordered_map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) index[labels[i]] = i;

    std::map<std::pair<int, int>, double> seen;
    if (j.contains("entries")) {
        if (!j["entries"].is_array()) throw InvalidInput("\"entries\" must be an array");
        for (const auto& e : j["entries"]) {
            if (!e.is_object() || !e.contains("row") || !e.contains("col") || !e.contains("value"))
                throw InvalidInput("each entry must be an object with row, col, value");
            if (!e["row"].is_string() || !e["col"].is_string())
                throw InvalidInput("entry row/col must be label strings");
            if (!e["value"].is_number())
                throw InvalidInput("entry value must be a number");
            const std::string row = e["row"].get<std::string>();
            const std::string col = e["col"].get<std::string>();
            const double v = e["value"].get<double>();
            auto ri = index.find(row);
            auto ci = index.find(col);
            if (ri == index.end()) throw InvalidInput("unknown label '" + row + "' in entry");
            if (ci == index.end()) throw InvalidInput("unknown label '" + col + "' in entry");
            if (ri->second == ci->second) {
                // diagonal entries are allowed only as the explicit value 1
                if (v != 1.0)
                    throw InvalidInput("diagonal entry (" + row + "," + col +
                                       ") must be exactly 1, got " + format_value(v));
                continue;
            }
            if (!(std::abs(v) < 1.0) || !std::isfinite(v))
                throw InvalidInput("entry (" + row + "," + col + ") = " + format_value(v) +
                                   " is outside the open interval (-1, 1)");
            int a = std::min(ri->second, ci->second);
            int b = std::max(ri->second, ci->second);
            auto it = seen.find({a, b});
            if (it != seen.end()) {
                if (it->second != v)
                    throw InvalidInput("duplicate entry (" + row + "," + col +
                                       ") with conflicting values");
            } else {
                seen.emplace(std::make_pair(a, b), v);
            }
        }
    }
    std::vector<PartialMatrix::Entry> entries;
    entries.reserve(seen.size());
    for (const auto& [k, v] : seen) entries.push_back({k.first, k.second, v});
    return PartialMatrix(std::move(labels), entries);
}

PartialMatrix parse_partial_csv(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                if (!cur.empty() && cur.back() == '\r') cur.pop_back();
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) {
            if (cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
        }
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw InvalidInput("empty CSV input");

    std::vector<std::string> header = split_csv_line(lines[0]);
    if (header.size() < 2) throw InvalidInput("CSV header must list at least one label");
    std::vector<Label> labels;
    for (std::size_t c = 1; c < header.size(); ++c) labels.push_back(trim(header[c]));
    validate_labels(labels);
    const int n = static_cast<int>(labels.size());

    if (static_cast<int>(lines.size()) != n + 1)
        throw InvalidInput("CSV must have exactly one row per label (expected " +
                           std::to_string(n) + " rows, got " +
                           std::to_string(lines.size() - 1) + ")");

    // cells[i][j]: nullopt = unspecified
    std::vector<std::vector<std::optional<double>>> cells(
        n, std::vector<std::optional<double>>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> row = split_csv_line(lines[i + 1]);
        if (static_cast<int>(row.size()) != n + 1)
            throw InvalidInput("CSV row " + std::to_string(i + 1) + " has " +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(n + 1));
        if (trim(row[0]) != labels[i])
            throw InvalidInput("CSV row label '" + trim(row[0]) + "' does not match column label '" +
                               labels[i] + "' (row and column orders must agree)");
        for (int j = 0; j < n; ++j) {
            std::string cell = trim(row[j + 1]);
            if (cell.empty()) continue;
            cells[i][j] = parse_cell_value(
                cell, "at (" + labels[i] + "," + labels[j] + ")");
        }
    }

    std::vector<PartialMatrix::Entry> entries;
    for (int i = 0; i < n; ++i) {
        if (cells[i][i] && *cells[i][i] != 1.0)
            throw InvalidInput("CSV diagonal cell (" + labels[i] + "," + labels[i] +
                               ") must be 1 or empty");
        for (int j = i + 1; j < n; ++j) {
            const auto& a = cells[i][j];
            const auto& b = cells[j][i];
            if (a.has_value() != b.has_value() || (a && b && *a != *b))
                throw InvalidInput("CSV cells (" + labels[i] + "," + labels[j] + ") and (" +
                                   labels[j] + "," + labels[i] +
                                   ") disagree; both must be empty or equal");
            if (a) entries.push_back({i, j, *a});
        }
    }
    return PartialMatrix(std::move(labels), entries);
}

std::string serialize_entries_json(const std::vector<Label>& labels,
                                   const std::map<std::pair<int, int>, double>& entries) {
    std::string out = "{\n  \"labels\": [";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ", ";
        out += quote(json_escape(labels[i]));
    }
    out += "],\n  \"entries\": [";
    bool first = true;
    for (const auto& [k, v] : entries) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    {\"row\": " + quote(json_escape(labels[k.first])) +
               ", \"col\": " + quote(json_escape(labels[k.second])) +
               ", \"value\": " + format_value(v) + "}";
    }
    out += first ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string serialize_cells_csv(const std::vector<Label>& labels,
                                const std::vector<std::vector<std::string>>& cell) {
    const int n = static_cast<int>(labels.size());
    std::string out;
    for (const auto& l : labels) {
        out += ',';
        out += l;
    }
    out += '\n';
    for (int i = 0; i < n; ++i) {
        out += labels[i];
        for (int j = 0; j < n; ++j) {
            out += ',';
            out += cell[i][j];
        }
        out += '\n';
    }
    return out;
}

}  // namespace

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void validate_labels(const std::vector<Label>& labels) {
    if (labels.empty()) throw InvalidInput("a matrix needs at least one label");
    std::unordered_map<std::string, int> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw InvalidInput("labels must be non-empty");
        if (l.find_first_of(",\n\r") != std::string::npos)
            throw InvalidInput("label '" + l + "' contains a separator character");
        if (!seen.emplace(l, 1).second) throw InvalidInput("duplicate label '" + l + "'");
    }
}

PartialMatrix::PartialMatrix(std::vector<Label> labels, const std::vector<Entry>& entries)
    : labels_(std::move(labels)) {
    validate_labels(labels_);
    const int n = size();
    for (int i = 0; i < n; ++i) index_[labels_[i]] = i;
    for (const Entry& e : entries) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
            throw InvalidInput("entry index out of range");
        if (e.i == e.j)
            throw InvalidInput("diagonal entry (" + labels_[e.i] + "," + labels_[e.j] +
                               ") cannot be stored");
        if (!std::isfinite(e.value) || !(std::abs(e.value) < 1.0))
            throw InvalidInput("entry (" + labels_[e.i] + "," + labels_[e.j] + ") = " +
                               format_value(e.value) + " is outside the open interval (-1, 1)");
        auto key = std::make_pair(std::min(e.i, e.j), std::max(e.i, e.j));
        if (!entries_.emplace(key, e.value).second)
            throw InvalidInput("duplicate entry (" + labels_[key.first] + "," +
                               labels_[key.second] + ")");
    }
}

int PartialMatrix::find_label(const Label& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

bool PartialMatrix::is_specified(int i, int j) const {
    if (i == j) return true;
    return entries_.count({std::min(i, j), std::max(i, j)}) > 0;
}

std::optional<double> PartialMatrix::value(int i, int j) const {
    if (i == j) return 1.0;
    auto it = entries_.find({std::min(i, j), std::max(i, j)});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<int, int>> PartialMatrix::unspecified_pairs() const {
    std::vector<std::pair<int, int>> out;
    const int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!entries_.count({i, j})) out.emplace_back(i, j);
    return out;
}

DenseCorrMatrix::DenseCorrMatrix(std::vector<Label> labels, SymMatrix values)
    : labels_(std::move(labels)), values_(std::move(values)) {
    validate_labels(labels_);
    if (values_.dim() != size())
        throw InvalidInput("matrix dimension does not match the number of labels");
    for (int i = 0; i < size(); ++i)
        if (values_(i, i) != 1.0)
            throw InvalidInput("diagonal entry (" + labels_[i] + "," + labels_[i] +
                               ") must be exactly 1");
}

PartialMatrix parse_partial(const std::string& text, MatrixFormat format) {
    return format == MatrixFormat::json ? parse_partial_json(text) : parse_partial_csv(text);
}

std::string serialize_partial(const PartialMatrix& m, MatrixFormat format) {
    if (format == MatrixFormat::json) return serialize_entries_json(m.labels(), m.entries());
    const int n = m.size();
    std::vector<std::vector<std::string>> cell(n, std::vector<std::string>(n));
    for (int i = 0; i < n; ++i) cell[i][i] = "1";
    for (const auto& [k, v] : m.entries()) {
        cell[k.first][k.second] = format_value(v);
        cell[k.second][k.first] = cell[k.first][k.second];
    }
    return serialize_cells_csv(m.labels(), cell);
}

std::string serialize_dense(const DenseCorrMatrix& m, MatrixFormat format) {
    const int n = m.size();
    if (format == MatrixFormat::json) {
        std::map<std::pair<int, int>, double> entries;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) entries[{i, j}] = m(i, j);
        return serialize_entries_json(m.labels(), entries);
    }
    std::vector<std::vector<std::string>> cell(n, std::vector<std::string>(n));
    for (int i = 0; i < n; ++i) {
        cell[i][i] = "1";
        for (int j = i + 1; j < n; ++j) {
            cell[i][j] = format_value(m(i, j));
            cell[j][i] = cell[i][j];
        }
    }
    return serialize_cells_csv(m.labels(), cell);
}

DenseCorrMatrix to_dense(const PartialMatrix& m) {
    const int n = m.size();
    SymMatrix values(n);
    for (int i = 0; i < n; ++i) {
        values.set(i, i, 1.0);
        for (int j = i + 1; j < n; ++j) {
            auto v = m.value(i, j);
            if (!v)
                throw InvalidInput("matrix is not fully specified: (" + m.labels()[i] + "," +
                                   m.labels()[j] + ") is missing");
            values.set(i, j, *v);
        }
    }
    return DenseCorrMatrix(m.labels(), std::move(values));
}

}  // namespace corrcomplete
