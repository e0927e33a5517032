/*
 * Copyright 2026 The specmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "specmc/table.hpp"

#include <ostream>

#include "specmc/error.hpp"
#include "specmc/numeric.hpp"

namespace specmc
{

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns_.size())
        throw InvalidArgument("table row has " + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(columns_.size()));
    rows_.push_back(std::move(row));
}

std::size_t Table::column_index(std::string_view column) const
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == column)
            return i;
    throw InvalidArgument("no column '" + std::string(column) + "'");
}

const Cell& Table::at(std::size_t row, std::string_view column) const
{
    if (row >= rows_.size())
        throw IndexOutOfRange("table row " + std::to_string(row) + " out of range");
    return rows_[row][column_index(column)];
}

double Table::number(std::size_t row, std::string_view column) const
{
    const Cell& cell = at(row, column);
    if (const auto* d = std::get_if<double>(&cell))
        return *d;
    if (const auto* i = std::get_if<std::int64_t>(&cell))
        return static_cast<double>(*i);
    if (const auto* u = std::get_if<std::uint64_t>(&cell))
        return static_cast<double>(*u);
    throw InvalidArgument("column '" + std::string(column) + "' is not numeric");
}

std::vector<double> Table::column_values(std::string_view column) const
{
    std::vector<double> values;
    values.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        values.push_back(number(r, column));
    return values;
}

std::string format_cell(const Cell& cell)
{
    if (const auto* d = std::get_if<double>(&cell))
        return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell))
        return std::to_string(*i);
    if (const auto* u = std::get_if<std::uint64_t>(&cell))
        return std::to_string(*u);
    return std::get<std::string>(cell);
}

void Table::write_csv(std::ostream& out) const
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

}  // namespace specmc
