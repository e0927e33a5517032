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

#ifndef SPECMC_STATS_HPP
#define SPECMC_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace specmc
{

/// Linear-interpolation quantile (Hyndman-Fan type 7). +inf values sort last.
double quantile(std::span<const double> values, double q);

inline double median(std::span<const double> values) { return quantile(values, 0.5); }

double mean(std::span<const double> values);
/// Unbiased sample standard deviation.
double stddev(std::span<const double> values);

struct WilsonInterval
{
    double lo = 0.0;
    double hi = 1.0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Ordinary least-squares slope of y on x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Lag-1 sample autocorrelation.
double lag1_autocorrelation(std::span<const double> values);

}  // namespace specmc

#endif  // SPECMC_STATS_HPP
