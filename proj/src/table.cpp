#include "ngmining/table.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

namespace ngmining {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos &&
        s.find_first_of("nN") == std::string::npos) {
        s += ".0";  // keep reals distinguishable from integers
    }
    return s;
}

bool parse_int(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

Cell cell_from_text(const std::string& text, bool quoted) {
    if (!quoted) {
        std::int64_t i;
        if (parse_int(text, i)) return i;
        double d;
        if (parse_double(text, d)) return d;
    }
    return text;
}

std::string escape_csv(const std::string& s, bool force_quote) {
    bool need = force_quote || s.find_first_of(",\"\n\r") != std::string::npos;
    if (!need) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

// Splits one CSV record, honoring quotes; reports which fields were quoted.
std::vector<std::pair<std::string, bool>> split_csv_line(const std::string& line) {
    std::vector<std::pair<std::string, bool>> fields;
    std::string cur;
    bool quoted = false;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(std::move(cur), quoted);
            cur.clear();
            quoted = false;
        } else {
            cur += c;
        }
    }
    fields.emplace_back(std::move(cur), quoted);
    return fields;
}

}  // namespace

std::string format_cell(const Cell& cell) {
    if (std::holds_alternative<std::int64_t>(cell)) {
        return std::to_string(std::get<std::int64_t>(cell));
    }
    if (std::holds_alternative<double>(cell)) {
        return format_double(std::get<double>(cell));
    }
    return std::get<std::string>(cell);
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("table row width does not match header");
    }
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += escape_csv(columns[c], false);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            bool is_string = std::holds_alternative<std::string>(row[c]);
            out += escape_csv(format_cell(row[c]), is_string);
        }
        out += '\n';
    }
    return out;
}

Table Table::from_csv(const std::string& text) {
    Table t;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = nl + 1;
        if (line.empty() && pos >= text.size()) break;
        auto fields = split_csv_line(line);
        if (header) {
            for (auto& [f, q] : fields) t.columns.push_back(f);
            header = false;
        } else {
            std::vector<Cell> row;
            row.reserve(fields.size());
            for (auto& [f, q] : fields) row.push_back(cell_from_text(f, q));
            t.add_row(std::move(row));
        }
    }
    return t;
}

std::string Table::to_json() const {
    nlohmann::json j;
    j["columns"] = columns;
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<std::int64_t>(cell)) {
                jr.push_back(std::get<std::int64_t>(cell));
            } else if (std::holds_alternative<double>(cell)) {
                jr.push_back(std::get<double>(cell));
            } else {
                jr.push_back(std::get<std::string>(cell));
            }
        }
        jrows.push_back(std::move(jr));
    }
    j["rows"] = std::move(jrows);
    return j.dump(2) + "\n";
}

Table Table::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Table t;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& jr : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto& cell : jr) {
            if (cell.is_number_integer() || cell.is_number_unsigned()) {
                row.push_back(cell.get<std::int64_t>());
            } else if (cell.is_number_float()) {
                row.push_back(cell.get<double>());
            } else {
                row.push_back(cell.get<std::string>());
            }
        }
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace ngmining
