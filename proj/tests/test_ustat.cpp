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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "specmc/chain.hpp"
#include "specmc/error.hpp"
#include "specmc/kernel.hpp"
#include "specmc/rng.hpp"
#include "specmc/ustat.hpp"

namespace specmc
{
namespace
{

long double naive_u(const std::vector<double>& x, const KernelSpec& k)
{
    long double sum = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (i != j)
                sum += k.h(x[i], x[j]);
    const long double n = static_cast<long double>(x.size());
    return sum / (n * (n - 1.0L));
}

std::vector<double> path(std::size_t n, std::uint64_t seed)
{
    const auto trace = simulate(refresh_chain(), n, Start::at(0.5), seed);
    return {trace.states().begin(), trace.states().end()};
}

KernelSpec product_kernel()
{
    KernelSpec k;
    k.id = "product";
    k.h = [](double x, double y) { return x * y; };
    return k;
}

TEST(UStat, RoutesMatchNaiveSum)
{
    const auto x = path(300, 201);
    for (const auto& k : {polynomial_kernel(-0.2, 3), cosine_kernel({1.0, 0.5}), gaussian_kernel(0.3)})
    {
        const double want = static_cast<double>(naive_u(x, k));
        EXPECT_NEAR(u_stat(x, k, UStatRoute::direct).value, want, 1e-12) << k.id;
        EXPECT_NEAR(u_stat(x, k, UStatRoute::gram).value, want, 1e-12) << k.id;
        EXPECT_NEAR(u_stat(x, k).value, want, 1e-12) << k.id;
        if (k.factorization)
            EXPECT_NEAR(u_stat(x, k, UStatRoute::factored).value, want, 1e-12) << k.id;
        else
            EXPECT_THROW(u_stat(x, k, UStatRoute::factored), InvalidArgument);
    }
}

TEST(UStat, InvariantUnderRelabeling)
{
    auto x = path(200, 202);
    const auto k = gaussian_kernel(0.2);
    const double before = u_stat(x, k, UStatRoute::direct).value;
    Philox rng(203);
    std::shuffle(x.begin(), x.end(), rng);
    EXPECT_NEAR(u_stat(x, k, UStatRoute::direct).value, before, 1e-13);
}

TEST(UStat, RejectsShortPaths)
{
    EXPECT_THROW(u_stat(std::vector<double>{0.5}, zero_kernel()), InvalidArgument);
    EXPECT_THROW(u_stat(std::vector<double>{}, zero_kernel()), InvalidArgument);
    EXPECT_DOUBLE_EQ(u_stat(std::vector<double>{0.5, 0.25}, product_kernel()).value, 0.125);
}

TEST(UStat, ProductKernelNearTarget)
{
    const auto trace = simulate(iid_chain(uniform_law()), 4000, Start{}, 204);
    const auto result = u_stat(trace, polynomial_kernel(0.0, 1));
    EXPECT_NEAR(result.value, 0.25, 0.03);
    EXPECT_TRUE(result.finite());
    EXPECT_EQ(result.n, 4000u);
}

TEST(UStat, CountsNonFiniteTerms)
{
    KernelSpec k = product_kernel();
    k.h = [](double x, double y) { return 1.0 / std::abs(x - y); };
    const std::vector<double> x{0.1, 0.1, 0.3};
    const auto result = u_stat(x, k, UStatRoute::direct);
    EXPECT_EQ(result.non_finite_terms, 2u);
    EXPECT_FALSE(result.finite());
}

TEST(BlockKernel, SumsAllPairs)
{
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{3.0, 4.0, 5.0};
    EXPECT_DOUBLE_EQ(block_u_kernel(a, b, product_kernel()), 36.0);
    EXPECT_THROW(block_u_kernel({}, b, product_kernel()), InvalidArgument);
    EXPECT_THROW(block_u_kernel(a, {}, product_kernel()), InvalidArgument);
}

TEST(PartialSum, ScalingAndRange)
{
    const auto trace = simulate(iid_chain(uniform_law()), 100000, Start{}, 205);
    const StateFunction f = [](double x) { return x; };
    const double small = mz_partial_sum(trace.prefix(1000), f, 0.5).value;
    const double large = mz_partial_sum(trace, f, 0.5).value;
    EXPECT_NEAR(small, 0.5e-3, 0.05e-3);
    EXPECT_NEAR(large, 0.5e-5, 0.05e-5);
    EXPECT_THROW(mz_partial_sum(trace, f, 0.0), InvalidArgument);
    EXPECT_THROW(mz_partial_sum(trace, f, 1.0), InvalidArgument);
    EXPECT_THROW(mz_partial_sum(std::vector<double>{}, f, 0.5), InvalidArgument);
}

TEST(Decomposition, HandBuiltPathWithEmptyTail)
{
    // T = {2, 4, 6, 7}; blocks [3,5) [5,7) [7,8); the trailing block is empty.
    const auto trace = RegenerationTrace::from_path({1, 2, 3, 4, 5, 6, 7, 8}, {0, 0, 1, 1, 0, 1, 0, 0}, 1, 0);
    const auto d = ustat_decomposition(trace, product_kernel());
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->completed_blocks, 3u);
    EXPECT_DOUBLE_EQ(d->first, 180.0 / 56.0);
    EXPECT_DOUBLE_EQ(d->second, 314.0 / 56.0);
    EXPECT_EQ(d->third, 0.0);
}

TEST(Decomposition, HandBuiltPathWithPartialTail)
{
    // T = {2, 4, 6, 7}; the trailing block holds indices 8 and 9.
    const auto trace =
        RegenerationTrace::from_path({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {0, 0, 1, 1, 0, 1, 0, 0, 1, 1}, 1, 0);
    const auto d = ustat_decomposition(trace, product_kernel());
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->completed_blocks, 3u);
    EXPECT_DOUBLE_EQ(d->first, 294.0 / 90.0);
    EXPECT_DOUBLE_EQ(d->second, 675.0 / 90.0);
    EXPECT_DOUBLE_EQ(d->third, 570.0 / 90.0);
}

TEST(Decomposition, AbsentWithoutRegeneration)
{
    const auto trace = RegenerationTrace::from_path({0.1, 0.2, 0.3}, {0, 0, 0}, 1, 0);
    EXPECT_FALSE(ustat_decomposition(trace, product_kernel()).has_value());
}

TEST(UStatRoute, ParsesNames)
{
    for (auto route : {UStatRoute::automatic, UStatRoute::direct, UStatRoute::gram, UStatRoute::factored})
        EXPECT_EQ(parse_ustat_route(to_string(route)), route);
    EXPECT_THROW(parse_ustat_route("fast"), InvalidArgument);
}

}  // namespace
}  // namespace specmc
