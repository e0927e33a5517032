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

#ifndef SPECMC_USTAT_HPP
#define SPECMC_USTAT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "specmc/chain.hpp"
#include "specmc/kernel.hpp"
#include "specmc/numeric.hpp"

namespace specmc
{

struct UStatResult
{
    double value = 0.0;
    std::size_t n = 0;
    std::string kernel_id;
    std::optional<double> target;  // pi x pi (h) when known
    std::size_t non_finite_terms = 0;

    bool finite() const noexcept { return non_finite_terms == 0 && std::isfinite(value); }
};

enum class UStatRoute
{
    automatic,  // factored, else gram for n <= 4096, else direct
    direct,     // streamed O(n^2) double sum, pairwise accumulation
    gram,       // off-diagonal sum of H~_n
    factored,   // sum_r w_r (sum_i g_r(X_i))^2 - sum_i h(X_i, X_i)
};

const char* to_string(UStatRoute route) noexcept;
UStatRoute parse_ustat_route(std::string_view name);

/// U_n(h) = (1 / n(n-1)) sum_{i != j} h(X_i, X_j); rejects n < 2.
UStatResult u_stat(std::span<const double> states, const KernelSpec& kernel,
                   UStatRoute route = UStatRoute::automatic);
UStatResult u_stat(const RegenerationTrace& trace, const KernelSpec& kernel,
                   UStatRoute route = UStatRoute::automatic);

/// H(a, b) = sum_i sum_j h(a_i, b_j); rejects empty blocks.
double block_u_kernel(std::span<const double> a, std::span<const double> b, const KernelSpec& kernel);

/// n^{-1/p} sum_i f(X_i) for p in (0, 1).
Aggregate mz_partial_sum(std::span<const double> states, const StateFunction& f, double p);
Aggregate mz_partial_sum(const RegenerationTrace& trace, const StateFunction& f, double p);

/**
 * Remainder terms of the block decomposition of U_n, with |h|:
 *   I   = (1/n(n-1)) sum_{i <= mT_0+m-1} sum_{j >= m(T_0+1)} |h(X_i, X_j)|
 *   II  = (1/n(n-1)) sum_{i <= N_n} H~(Z_i, Z_i)
 *   III = (1/n(n-1)) sum_{i < N_n} H~(Z_{N_n}, Z_i)
 * Z_{N_n} is the trailing partial block. Empty when the path has no T_0.
 */
struct UStatDecomposition
{
    double first = 0.0;
    double second = 0.0;
    double third = 0.0;
    std::size_t completed_blocks = 0;  // N_n
};

std::optional<UStatDecomposition> ustat_decomposition(const RegenerationTrace& trace,
                                                      const KernelSpec& kernel);

}  // namespace specmc

#endif  // SPECMC_USTAT_HPP
