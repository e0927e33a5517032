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

#include "specmc/ustat.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "specmc/error.hpp"
#include "specmc/spectral.hpp"

namespace specmc
{

const char* to_string(UStatRoute route) noexcept
{
    switch (route)
    {
    case UStatRoute::automatic:
        return "auto";
    case UStatRoute::direct:
        return "direct";
    case UStatRoute::gram:
        return "gram";
    case UStatRoute::factored:
        return "factored";
    }
    return "unknown";
}

UStatRoute parse_ustat_route(std::string_view name)
{
    if (name == "auto")
        return UStatRoute::automatic;
    if (name == "direct")
        return UStatRoute::direct;
    if (name == "gram")
        return UStatRoute::gram;
    if (name == "factored")
        return UStatRoute::factored;
    throw InvalidArgument("unknown U-statistic route '" + std::string(name) + "'");
}

namespace
{
constexpr std::size_t kGramLimit = 4096;

std::size_t count_non_finite(std::span<const double> values)
{
    std::size_t count = 0;
    for (double v : values)
        if (!std::isfinite(v))
            ++count;
    return count;
}

// Sum over i < j of h(X_i, X_j), one row at a time.
Aggregate upper_pair_sum(std::span<const double> states, const KernelSpec& kernel)
{
    const std::size_t n = states.size();
    std::vector<double> row(n);
    std::vector<double> row_sums(n, 0.0);
    Aggregate total;
    for (std::size_t i = 0; i + 1 < n; ++i)
    {
        const std::size_t width = n - i - 1;
        for (std::size_t j = 0; j < width; ++j)
            row[j] = kernel.h(states[i], states[i + 1 + j]);
        const std::span<const double> terms(row.data(), width);
        total.non_finite_terms += count_non_finite(terms);
        row_sums[i] = pairwise_sum(terms);
    }
    total.value = pairwise_sum(row_sums);
    return total;
}

Aggregate gram_pair_sum(std::span<const double> states, const KernelSpec& kernel)
{
    const auto gram = build_gram(states, kernel, GramVariant::zero_diagonal);
    const std::size_t n = states.size();
    std::vector<double> column_sums(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        const auto col = gram.entries.col(static_cast<Eigen::Index>(j));
        column_sums[j] = pairwise_sum(std::span<const double>(col.data(), n));
    }
    Aggregate total;
    total.non_finite_terms = gram.non_finite_entries;
    // Entries carry the 1/n factor of H~_n.
    total.value = pairwise_sum(column_sums) * static_cast<double>(n);
    return total;
}

Aggregate factored_pair_sum(std::span<const double> states, const KernelSpec& kernel)
{
    const auto& factors = *kernel.factorization;
    const std::size_t n = states.size();
    const std::size_t r = factors.rank();
    std::vector<std::vector<double>> columns(r, std::vector<double>(n));
    std::vector<double> diagonal(n, 0.0);
    std::vector<double> features(r);
    for (std::size_t i = 0; i < n; ++i)
    {
        factors.features(states[i], features);
        for (std::size_t c = 0; c < r; ++c)
        {
            columns[c][i] = features[c];
            diagonal[i] += factors.weights[c] * features[c] * features[c];
        }
    }
    Aggregate total;
    std::vector<double> squares(r);
    for (std::size_t c = 0; c < r; ++c)
    {
        total.non_finite_terms += count_non_finite(columns[c]);
        const double s = pairwise_sum(columns[c]);
        squares[c] = factors.weights[c] * s * s;
    }
    total.value = pairwise_sum(squares) - pairwise_sum(diagonal);
    return total;
}
}  // namespace

UStatResult u_stat(std::span<const double> states, const KernelSpec& kernel, UStatRoute route)
{
    const std::size_t n = states.size();
    if (n < 2)
        throw InvalidArgument("u_stat: need at least two states");
    if (route == UStatRoute::automatic)
    {
        if (kernel.factorization)
            route = UStatRoute::factored;
        else
            route = n <= kGramLimit ? UStatRoute::gram : UStatRoute::direct;
    }

    Aggregate pairs;
    switch (route)
    {
    case UStatRoute::direct:
        pairs = upper_pair_sum(states, kernel);
        pairs.value *= 2.0;
        pairs.non_finite_terms *= 2;
        break;
    case UStatRoute::gram:
        pairs = gram_pair_sum(states, kernel);
        break;
    case UStatRoute::factored:
        if (!kernel.factorization)
            throw InvalidArgument("u_stat: kernel '" + kernel.id + "' has no exact factorization");
        pairs = factored_pair_sum(states, kernel);
        break;
    case UStatRoute::automatic:
        break;
    }

    UStatResult result;
    result.n = n;
    result.kernel_id = kernel.id;
    result.non_finite_terms = pairs.non_finite_terms;
    const double nn = static_cast<double>(n);
    result.value = pairs.value / (nn * (nn - 1.0));
    return result;
}

UStatResult u_stat(const RegenerationTrace& trace, const KernelSpec& kernel, UStatRoute route)
{
    return u_stat(trace.states(), kernel, route);
}

double block_u_kernel(std::span<const double> a, std::span<const double> b, const KernelSpec& kernel)
{
    if (a.empty() || b.empty())
        throw InvalidArgument("block_u_kernel: empty block");
    std::vector<double> rows(a.size());
    std::vector<double> row(b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        for (std::size_t j = 0; j < b.size(); ++j)
            row[j] = kernel.h(a[i], b[j]);
        rows[i] = pairwise_sum(row);
    }
    return pairwise_sum(rows);
}

Aggregate mz_partial_sum(std::span<const double> states, const StateFunction& f, double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw InvalidArgument("mz_partial_sum: p must lie in (0, 1)");
    if (states.empty())
        throw InvalidArgument("mz_partial_sum: empty path");
    std::vector<double> terms(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        terms[i] = f(states[i]);
    Aggregate result;
    result.non_finite_terms = count_non_finite(terms);
    result.value = pairwise_sum(terms) * std::pow(static_cast<double>(states.size()), -1.0 / p);
    return result;
}

Aggregate mz_partial_sum(const RegenerationTrace& trace, const StateFunction& f, double p)
{
    return mz_partial_sum(trace.states(), f, p);
}

namespace
{
double abs_block_sum(std::span<const double> a, std::span<const double> b, const KernelSpec& kernel)
{
    double sum = 0.0;
    for (double x : a)
        for (double y : b)
            sum += std::abs(kernel.h(x, y));
    return sum;
}
}  // namespace

std::optional<UStatDecomposition> ustat_decomposition(const RegenerationTrace& trace,
                                                      const KernelSpec& kernel)
{
    const auto times = trace.regen_times();
    const std::size_t n = trace.size();
    if (times.empty() || n < 2)
        return std::nullopt;
    const std::size_t m = trace.m();
    const auto states = trace.states();
    const double norm = 1.0 / (static_cast<double>(n) * (static_cast<double>(n) - 1.0));

    UStatDecomposition d;
    const std::size_t head_end = std::min(n, m * times[0] + m);
    const std::size_t tail_begin = std::min(n, m * (times[0] + 1));
    d.first = norm * abs_block_sum(states.first(head_end), states.subspan(tail_begin), kernel);

    const std::size_t big_n = trace.completed_regenerations();
    d.completed_blocks = big_n;
    // Z_0..Z_{N-1} are complete; Z_N is cut at the end of the path.
    auto block_span = [&](std::size_t k) -> std::span<const double> {
        if (k < trace.block_count())
            return trace.block(k);
        if (k >= times.size())
            return {};
        const std::size_t begin = std::min(n, m * (times[k] + 1));
        return states.subspan(begin);
    };
    double second = 0.0;
    for (std::size_t k = 0; k <= big_n; ++k)
    {
        const auto z = block_span(k);
        second += abs_block_sum(z, z, kernel);
    }
    d.second = norm * second;

    double third = 0.0;
    const auto last = block_span(big_n);
    for (std::size_t k = 0; k < big_n; ++k)
        third += abs_block_sum(last, block_span(k), kernel);
    d.third = norm * third;
    return d;
}

}  // namespace specmc
