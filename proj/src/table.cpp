#include "table.hpp"

#include <cmath>
#include <cstdio>

#include "error.hpp"

namespace qst {

void Table::add_row(std::vector<Cell> r)
{
    if (r.size() != columns.size()) fail(ErrorCode::internal, "table " + name + ": row width mismatch");
    rows.push_back(std::move(r));
}

int Table::column(const std::string& c) const
{
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == c) return static_cast<int>(i);
    return -1;
}

double Table::number(size_t row, int col) const
{
    const Cell& c = rows.at(row).at(col);
    if (auto d = std::get_if<double>(&c)) return *d;
    if (auto i = std::get_if<long long>(&c)) return double(*i);
    return std::nan("");
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_cell(const Cell& c)
{
    if (auto d = std::get_if<double>(&c)) return format_number(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

void write_csv(std::ostream& os, const Table& t, const std::vector<std::string>& header)
{
    for (const auto& h : header) os << "# " << h << '\n';
    for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
    for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_cell(r[i]);
        os << '\n';
    }
}

}  // namespace qst
