#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qst {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> meta;  // written as '# key: value'

    void add_row(std::vector<Cell> r);
    int column(const std::string& c) const;  // -1 if absent
    double number(size_t row, int col) const;
};

// 12 significant digits, locale-independent.
std::string format_number(double v);
std::string format_cell(const Cell& c);

void write_csv(std::ostream& os, const Table& t, const std::vector<std::string>& header);

}  // namespace qst
