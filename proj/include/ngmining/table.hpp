#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ngmining {

/// A table cell: integer, real, or text. The serializers keep the three
/// kinds distinguishable so that a written file reloads to an identical
/// table (reals always carry a '.' or exponent and use 17 significant
/// digits, which round-trips a double exactly).
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);

    std::string to_csv() const;
    std::string to_json() const;  // {"columns": [...], "rows": [[...], ...]}

    static Table from_csv(const std::string& text);
    static Table from_json(const std::string& text);

    bool operator==(const Table&) const = default;
};

std::string format_cell(const Cell& cell);

}  // namespace ngmining
