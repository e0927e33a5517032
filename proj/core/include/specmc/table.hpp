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

#ifndef SPECMC_TABLE_HPP
#define SPECMC_TABLE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace specmc
{

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// Column-named rows, written as CSV with floats at 17 significant digits.
class Table
{
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

    /// Throws InvalidArgument when the width does not match.
    void add_row(std::vector<Cell> row);

    const Cell& at(std::size_t row, std::string_view column) const;
    /// Numeric cell as double; throws InvalidArgument for strings.
    double number(std::size_t row, std::string_view column) const;
    std::vector<double> column_values(std::string_view column) const;
    std::size_t column_index(std::string_view column) const;

    void write_csv(std::ostream& out) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string format_cell(const Cell& cell);

}  // namespace specmc

#endif  // SPECMC_TABLE_HPP
