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

#ifndef SPECMC_NUMERIC_HPP
#define SPECMC_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace specmc
{

/// A real aggregate that remembers how many of its terms were non-finite.
struct Aggregate
{
    double value = 0.0;
    std::size_t non_finite_terms = 0;

    bool finite() const noexcept { return non_finite_terms == 0 && std::isfinite(value); }
};

/// Cascade summation; error grows like O(log n) ulps instead of O(n).
double pairwise_sum(std::span<const double> values) noexcept;

/// 17 significant digits ("%.17g"); parse_double recovers the identical bits.
std::string format_double(double value);

/// Parses a decimal produced by format_double (or any strtod input).
double parse_double(std::string_view text);

}  // namespace specmc

#endif  // SPECMC_NUMERIC_HPP
