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

#include "specmc/stats.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "specmc/error.hpp"
#include "specmc/numeric.hpp"

namespace specmc
{

double pairwise_sum(std::span<const double> values) noexcept
{
    constexpr std::size_t kLeaf = 64;
    if (values.size() <= kLeaf)
    {
        double sum = 0.0;
        for (double v : values)
            sum += v;
        return sum;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

double parse_double(std::string_view text)
{
    const std::string copy(text);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size())
        throw InvalidArgument("not a number: '" + copy + "'");
    return value;
}

double quantile(std::span<const double> values, double q)
{
    if (values.empty())
        throw InvalidArgument("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw InvalidArgument("quantile level must lie in [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double position = q * static_cast<double>(sorted.size() - 1);
    const auto lower = static_cast<std::size_t>(std::floor(position));
    const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
    const double fraction = position - static_cast<double>(lower);
    if (fraction == 0.0 || sorted[lower] == sorted[upper])
        return sorted[lower];
    return sorted[lower] + fraction * (sorted[upper] - sorted[lower]);
}

double mean(std::span<const double> values)
{
    if (values.empty())
        throw InvalidArgument("mean of an empty sample");
    return pairwise_sum(values) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values)
{
    if (values.size() < 2)
        throw InvalidArgument("stddev needs at least two values");
    const double mu = mean(values);
    std::vector<double> squares(values.size());
    std::transform(values.begin(), values.end(), squares.begin(),
                   [mu](double v) { return (v - mu) * (v - mu); });
    return std::sqrt(pairwise_sum(squares) / static_cast<double>(values.size() - 1));
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z)
{
    if (trials == 0)
        return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    // The endpoints are exact at 0 and n successes.
    const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

double least_squares_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("least_squares_slope needs two equal-length samples of size >= 2");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0)
        throw InvalidArgument("least_squares_slope: x has zero variance");
    return sxy / sxx;
}

double lag1_autocorrelation(std::span<const double> values)
{
    if (values.size() < 3)
        throw InvalidArgument("lag1_autocorrelation needs at least three values");
    const double mu = mean(values);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        den += (values[i] - mu) * (values[i] - mu);
        if (i + 1 < values.size())
            num += (values[i] - mu) * (values[i + 1] - mu);
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace specmc
