/**
 * Copyright 2026 The catvis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Tabular output: CSV with '#' metadata lines, or a single JSON object.
// Numbers are written with 12 significant digits so reruns are byte-identical.

#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace catvis {

inline constexpr const char* kToolName = "catvis";
inline constexpr const char* kToolVersion = "1.0.0";

/// A table cell: empty, number or text.
using Cell = std::variant<std::monostate, double, std::string>;

struct Report {
    std::string command;
    std::vector<std::pair<std::string, Cell>> params;
    std::vector<std::pair<std::string, Cell>> meta;  ///< derived values (integrals, fit results)
    std::vector<std::string> warnings;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace detail {

inline std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return {};
}

// RFC 4180: quote fields holding a comma, quote or line break; double embedded quotes.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string one_line(std::string s) {
    for (auto& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

inline nlohmann::json cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        if (!std::isfinite(v)) return nullptr;
        // Round through the 12-digit text so JSON and CSV carry the same value.
        return std::stod(format_number(v));
    }
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Report& r) {
    os << "# " << kToolName << ' ' << kToolVersion << '\n';
    os << "# command=" << r.command << '\n';
    for (const auto& [k, v] : r.params) os << "# param " << k << '=' << detail::one_line(detail::cell_text(v)) << '\n';
    for (const auto& [k, v] : r.meta) os << "# " << k << '=' << detail::one_line(detail::cell_text(v)) << '\n';
    for (const auto& w : r.warnings) os << "# warning: " << detail::one_line(w) << '\n';
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << detail::csv_field(r.columns[i]);
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_field(detail::cell_text(row[i]));
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Report& r) {
    nlohmann::ordered_json params;
    params["tool"] = kToolName;
    params["version"] = kToolVersion;
    params["command"] = r.command;
    for (const auto& [k, v] : r.params) params[k] = detail::cell_json(v);

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < r.columns.size() && i < row.size(); ++i) obj[r.columns[i]] = detail::cell_json(row[i]);
        rows.push_back(std::move(obj));
    }

    nlohmann::ordered_json diag;
    for (const auto& [k, v] : r.meta) diag[k] = detail::cell_json(v);
    diag["warnings"] = r.warnings;

    nlohmann::ordered_json doc;
    doc["params"] = std::move(params);
    doc["rows"] = std::move(rows);
    doc["diagnostics"] = std::move(diag);
    os << doc.dump(2) << '\n';
}

/// A CSV file as read back: '#' lines, header and raw string fields.
struct ParsedCsv {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::vector<std::string> split_csv_record(std::istream& is, std::string first_line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    std::string line = std::move(first_line);
    for (;;) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char ch = line[i];
            if (quoted) {
                if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else if (ch == '"') {
                    quoted = false;
                } else {
                    field += ch;
                }
            } else if (ch == '"') {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch != '\r') {
                field += ch;
            }
        }
        if (!quoted) break;
        field += '\n';
        if (!std::getline(is, line)) throw std::runtime_error("parse_csv: unterminated quoted field");
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace detail

inline ParsedCsv parse_csv(std::istream& is) {
    ParsedCsv out;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            out.comments.push_back(line.substr(1));
            continue;
        }
        auto rec = detail::split_csv_record(is, line);
        if (!header) {
            out.columns = std::move(rec);
            header = true;
        } else {
            if (rec.size() != out.columns.size()) throw std::runtime_error("parse_csv: ragged row");
            out.rows.push_back(std::move(rec));
        }
    }
    return out;
}

}  // namespace catvis
