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
#include <sstream>
#include <vector>

#include "specmc/chain.hpp"
#include "specmc/error.hpp"
#include "specmc/numeric.hpp"
#include "specmc/stats.hpp"

namespace specmc
{
namespace
{

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size())
    {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

// Critical value at level 0.001 for equal sample sizes.
double ks_critical(std::size_t n) { return 1.95 * std::sqrt(2.0 / static_cast<double>(n)); }

std::vector<double> split_marginal(const ChainSpec& chain, std::size_t step, std::size_t samples,
                                   const Start& start, std::uint64_t base)
{
    std::vector<double> out(samples);
    for (std::size_t s = 0; s < samples; ++s)
        out[s] = simulate(chain, step + 1, start, stream_seed(base, s)).states()[step];
    return out;
}

std::vector<double> unsplit_marginal(const ChainSpec& chain, std::size_t step, std::size_t samples,
                                     const Start& start, std::uint64_t base)
{
    std::vector<double> out(samples);
    for (std::size_t s = 0; s < samples; ++s)
        out[s] = simulate_unsplit(chain, step + 1, start, stream_seed(base, s))[step];
    return out;
}

// Block sums along one path are one-dependent: Var(mean) = (gamma_0 + 2 gamma_1) / N.
double one_dependent_se(const std::vector<double>& x)
{
    const double variance = stddev(x) * stddev(x);
    const double gamma1 = lag1_autocorrelation(x) * variance;
    return std::sqrt(std::max(variance + 2.0 * gamma1, 0.0) / static_cast<double>(x.size()));
}

std::vector<double> gaps(const RegenerationTrace& trace)
{
    const auto t = trace.regen_times();
    std::vector<double> g;
    for (std::size_t i = 1; i < t.size(); ++i)
        g.push_back(static_cast<double>(t[i] - t[i - 1]));
    return g;
}

// Refresh chain observed two steps at a time: P^2(x, .) = 1/4 delta_x + 3/4 U.
ChainSpec two_step_refresh()
{
    ChainSpec chain = refresh_chain(0.5);
    chain.name = "refresh2";
    chain.minorization.m = 2;
    chain.minorization.delta = 0.75;
    chain.splitter = [](double x, Philox& rng, std::span<double> next) {
        if (!rng.bernoulli(0.75))
        {
            next[0] = x;
            next[1] = x;
            return false;
        }
        // Given heads the pair is one of (x, U), (U, U), (U1, U2) with equal odds.
        switch (rng.index(3))
        {
        case 0:
            next[0] = x;
            next[1] = rng.uniform();
            break;
        case 1:
            next[0] = rng.uniform();
            next[1] = next[0];
            break;
        default:
            next[0] = rng.uniform();
            next[1] = rng.uniform();
        }
        return true;
    };
    return chain;
}

MetropolisOptions beta_metropolis()
{
    MetropolisOptions options;
    options.target = beta_law(2.0, 2.0);
    return options;
}

TEST(Simulate, IsBitIdenticalForIdenticalArguments)
{
    const auto chain = refresh_chain();
    const auto a = simulate(chain, 5000, Start::at(0.5), 77);
    const auto b = simulate(chain, 5000, Start::at(0.5), 77);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_TRUE(std::equal(a.states().begin(), a.states().end(), b.states().begin()));
    EXPECT_TRUE(std::equal(a.bits().begin(), a.bits().end(), b.bits().begin()));
    EXPECT_EQ(a.seed(), 77u);
}

TEST(Simulate, RejectsBadArguments)
{
    const auto chain = refresh_chain();
    EXPECT_THROW(simulate(chain, 0, Start::at(0.5), 1), InvalidArgument);
    EXPECT_THROW(simulate(chain, 10, Start::at(1.0), 1), InvalidArgument);
    EXPECT_THROW(simulate(chain, 10, Start::at(0.0), 1), InvalidArgument);
    EXPECT_THROW(simulate_unsplit(chain, 0, Start::at(0.5), 1), InvalidArgument);
}

TEST(Simulate, ChainWithoutSplitterIsRejected)
{
    auto chain = refresh_chain();
    chain.splitter = nullptr;
    EXPECT_THROW(simulate(chain, 10, Start::at(0.5), 1), SplittingUnavailable);
    EXPECT_NO_THROW(simulate_unsplit(chain, 10, Start::at(0.5), 1));
}

TEST(Simulate, StationaryStartDrawsFromTheLaw)
{
    const auto chain = iid_chain(beta_law(2.0, 5.0));
    std::vector<double> first(4000);
    for (std::size_t s = 0; s < first.size(); ++s)
        first[s] = simulate(chain, 1, Start::stationary(), s).states()[0];
    EXPECT_NEAR(mean(first), 2.0 / 7.0, 0.01);
}

TEST(RefreshChain, ValidatesParameters)
{
    EXPECT_THROW(refresh_chain(1.0), InvalidArgument);
    EXPECT_THROW(refresh_chain(0.5, 0.6), InvalidArgument);
    EXPECT_THROW(refresh_chain(0.5, 0.0), InvalidArgument);
    EXPECT_NO_THROW(refresh_chain(0.5, 0.25));
}

TEST(RefreshChain, GapMeanIsTwo)
{
    const auto trace = simulate(refresh_chain(), 200000, Start::at(0.5), 11);
    const auto g = gaps(trace);
    ASSERT_GT(g.size(), 50000u);
    EXPECT_NEAR(mean(g), 2.0, 0.04);
    // Gaps are i.i.d.: lag-1 autocorrelation within 4 standard errors of 0.
    EXPECT_LT(std::abs(lag1_autocorrelation(g)), 4.0 / std::sqrt(static_cast<double>(g.size())));
}

TEST(RefreshChain, ConventionalEpochsAlsoGapTwo)
{
    const auto trace = simulate(refresh_chain(), 100000, Start::at(0.5), 12);
    const auto epochs = trace.regeneration_epochs();
    std::vector<double> g;
    for (std::size_t i = 1; i < epochs.size(); ++i)
        g.push_back(static_cast<double>(epochs[i] - epochs[i - 1]));
    EXPECT_NEAR(mean(g), 2.0, 0.05);
}

TEST(RefreshChain, BlockMeansMatchStationaryIntegrals)
{
    const auto trace = simulate(refresh_chain(), 60000, Start::at(0.5), 13);
    ASSERT_GE(trace.block_count(), 10000u);
    struct Case
    {
        StateFunction f;
        double pi_f;
    };
    const std::vector<Case> cases{{[](double) { return 1.0; }, 1.0},
                                  {[](double x) { return x; }, 0.5},
                                  {[](double x) { return x * x; }, 1.0 / 3.0},
                                  {[](double x) { return x < 0.25 ? 1.0 : 0.0; }, 0.25}};
    for (const auto& c : cases)
    {
        std::vector<double> sums(10000);
        for (std::size_t k = 0; k < sums.size(); ++k)
            sums[k] = block_sum(trace, c.f, k);
        // 4 sigma: the z-score spread is near 1.1 across seeds.
        EXPECT_NEAR(mean(sums), 2.0 * c.pi_f, 4.0 * one_dependent_se(sums));
    }
}

TEST(RefreshChain, SplitMarginalsMatchUnsplit)
{
    const auto chain = refresh_chain(0.7, 0.2);
    const auto a = split_marginal(chain, 3, 20000, Start::at(0.2), 1);
    const auto b = unsplit_marginal(chain, 3, 20000, Start::at(0.2), 2);
    EXPECT_LT(ks_statistic(a, b), ks_critical(20000));
}

TEST(IidChain, SplitMarginalsMatchUnsplit)
{
    const auto chain = iid_chain(beta_law(2.0, 3.0), 0.4);
    const auto a = split_marginal(chain, 2, 20000, Start::at(0.5), 3);
    const auto b = unsplit_marginal(chain, 2, 20000, Start::at(0.5), 4);
    EXPECT_LT(ks_statistic(a, b), ks_critical(20000));
}

TEST(MetropolisChain, SplitMarginalsMatchUnsplit)
{
    const auto chain = metropolis_chain(beta_metropolis());
    const auto a = split_marginal(chain, 6, 20000, Start::at(0.5), 5);
    const auto b = unsplit_marginal(chain, 6, 20000, Start::at(0.5), 6);
    EXPECT_LT(ks_statistic(a, b), ks_critical(20000));
}

TEST(MetropolisChain, LongRunMomentsMatchTarget)
{
    const auto chain = metropolis_chain(beta_metropolis());
    const auto trace = simulate(chain, 400000, Start::at(0.5), 21);
    const auto m1 = lln_additive(trace, [](double x) { return x; });
    const auto m2 = lln_additive(trace, [](double x) { return x * x; });
    EXPECT_NEAR(m1.value, 0.5, 0.01);
    EXPECT_NEAR(m2.value, 0.3, 0.01);  // Beta(2, 2): E X^2 = 3/10
    EXPECT_GT(trace.regen_times().size(), 1000u);
}

TEST(MetropolisChain, DeclaredMinorizationHoldsEmpirically)
{
    const auto chain = metropolis_chain(beta_metropolis());
    const std::vector<double> points{0.3, 0.4, 0.5, 0.6, 0.7};
    const std::vector<Interval> sets{{0.3, 0.4}, {0.45, 0.55}, {0.6, 0.7}, {0.3, 0.7}};
    const auto check = check_minorization(chain, points, sets, 20000, 8);
    EXPECT_TRUE(check.passed) << "slack " << check.min_slack;
}

TEST(MetropolisChain, OverstatedMinorizationIsDetected)
{
    auto options = beta_metropolis();
    options.delta = 0.5;  // delta nu = 1.25 on [0.3, 0.7], above the kernel density
    const auto chain = metropolis_chain(options);
    EXPECT_THROW(simulate(chain, 2000, Start::at(0.5), 1), MinorizationViolated);
    // The density bound fails on narrow sets: P(0.3, [0.6, 0.7]) is near 0.1 < 0.125.
    const std::vector<double> points{0.3, 0.5};
    const std::vector<Interval> sets{{0.6, 0.7}, {0.3, 0.4}};
    EXPECT_FALSE(check_minorization(chain, points, sets, 20000, 9).passed);
}

TEST(MetropolisChain, ValidatesOptions)
{
    auto options = beta_metropolis();
    options.step = 0.0;
    EXPECT_THROW(metropolis_chain(options), InvalidArgument);
    options = beta_metropolis();
    options.small_set = {0.8, 0.2};
    EXPECT_THROW(metropolis_chain(options), InvalidArgument);
}

TEST(ReflectedProposal, IntegratesToOne)
{
    for (double x : {0.01, 0.3, 0.5, 0.97})
    {
        const int cells = 100000;
        double mass = 0.0;
        for (int i = 0; i < cells; ++i)
            mass += reflected_proposal_density(x, (i + 0.5) / cells, 0.5) / cells;
        EXPECT_NEAR(mass, 1.0, 1e-4) << "x = " << x;
    }
}

TEST(RegenerationTrace, HandBuiltIndexing)
{
    // Y = 0 0 1 1 0 1 0 0: T_0 = 2, T_1 = 4, T_2 = 6, T_3 = 7.
    std::vector<double> states{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<std::uint8_t> bits{0, 0, 1, 1, 0, 1, 0, 0};
    const auto trace = RegenerationTrace::from_path(states, bits, 1, 0);
    const std::vector<std::size_t> expected_times{2, 4, 6, 7};
    ASSERT_EQ(std::vector<std::size_t>(trace.regen_times().begin(), trace.regen_times().end()), expected_times);
    ASSERT_EQ(trace.block_count(), 3u);
    EXPECT_EQ(trace.block_range(0).begin, 3u);
    EXPECT_EQ(trace.block_range(0).end, 5u);
    EXPECT_EQ(trace.block_range(1).begin, 5u);
    EXPECT_EQ(trace.block_range(1).end, 7u);
    EXPECT_EQ(trace.block_range(2).begin, 7u);
    EXPECT_EQ(trace.block_range(2).end, 8u);
    EXPECT_EQ(trace.completed_regenerations(), 3u);
    const std::vector<std::size_t> epochs{2, 3, 5};
    EXPECT_EQ(trace.regeneration_epochs(), epochs);
    EXPECT_DOUBLE_EQ(block_sum(trace, [](double x) { return x; }, 0), 0.4 + 0.5);
    EXPECT_THROW(block_sum(trace, [](double x) { return x; }, 3), IndexOutOfRange);
}

TEST(RegenerationTrace, NoRegenerationMeansNoBlocks)
{
    const auto trace = RegenerationTrace::from_path({0.1, 0.2, 0.3}, {0, 0, 0}, 1, 0);
    EXPECT_TRUE(trace.regen_times().empty());
    EXPECT_EQ(trace.block_count(), 0u);
    EXPECT_EQ(trace.completed_regenerations(), 0u);
    EXPECT_THROW(trace.block(0), IndexOutOfRange);
}

TEST(RegenerationTrace, BlocksTileThePath)
{
    const auto trace = simulate(refresh_chain(), 5000, Start::at(0.5), 31);
    ASSERT_GT(trace.block_count(), 2u);
    EXPECT_EQ(trace.block_range(0).begin, trace.regen_times()[0] + 1);
    for (std::size_t k = 1; k < trace.block_count(); ++k)
        EXPECT_EQ(trace.block_range(k).begin, trace.block_range(k - 1).end);
    EXPECT_EQ(trace.block_count(), trace.completed_regenerations());
}

TEST(RegenerationTrace, PrefixRecomputesStructure)
{
    const auto trace = simulate(refresh_chain(), 1000, Start::at(0.5), 32);
    const auto prefix = trace.prefix(400);
    const auto rebuilt = RegenerationTrace::from_path(
        std::vector<double>(trace.states().begin(), trace.states().begin() + 400),
        std::vector<std::uint8_t>(trace.bits().begin(), trace.bits().begin() + 400), 1, trace.seed());
    EXPECT_EQ(prefix.block_count(), rebuilt.block_count());
    EXPECT_TRUE(std::equal(prefix.regen_times().begin(), prefix.regen_times().end(),
                           rebuilt.regen_times().begin(), rebuilt.regen_times().end()));
    EXPECT_THROW(trace.prefix(0), InvalidArgument);
    EXPECT_THROW(trace.prefix(1001), InvalidArgument);
}

TEST(TwoStepChain, BitsLiveOnTheSkeleton)
{
    const auto trace = simulate(two_step_refresh(), 20001, Start::at(0.5), 41);
    EXPECT_EQ(trace.m(), 2u);
    for (std::size_t i = 1; i < trace.size(); i += 2)
        ASSERT_EQ(trace.bits()[i], 0);
    for (std::size_t k = 0; k < trace.block_count(); ++k)
        ASSERT_EQ(trace.block_range(k).size() % 2, 0u);
}

TEST(TwoStepChain, GapAndBlockMeans)
{
    const auto trace = simulate(two_step_refresh(), 400001, Start::at(0.5), 42);
    // Skeleton gaps are geometric with success probability 1/4.
    EXPECT_NEAR(mean(gaps(trace)), 4.0, 0.1);
    std::vector<double> sums(trace.block_count());
    for (std::size_t k = 0; k < sums.size(); ++k)
        sums[k] = block_sum(trace, [](double x) { return x; }, k);
    const double se = stddev(sums) / std::sqrt(static_cast<double>(sums.size()));
    EXPECT_NEAR(mean(sums), 2.0 * 4.0 * 0.5, 3.0 * se);
}

TEST(TwoStepChain, SplitMarginalsMatchUnsplit)
{
    const auto chain = two_step_refresh();
    for (std::size_t step : {1u, 2u, 5u})
    {
        const auto a = split_marginal(chain, step, 20000, Start::at(0.3), 50 + step);
        const auto b = unsplit_marginal(chain, step, 20000, Start::at(0.3), 60 + step);
        EXPECT_LT(ks_statistic(a, b), ks_critical(20000)) << "step " << step;
    }
}

TEST(LlnAdditive, CountsNonFiniteTerms)
{
    const auto trace = RegenerationTrace::from_path({0.5, 0.25}, {0, 0}, 1, 0);
    const auto ok = lln_additive(trace, [](double x) { return x; });
    EXPECT_DOUBLE_EQ(ok.value, 0.375);
    EXPECT_TRUE(ok.finite());
    const auto bad = lln_additive(trace, [](double x) { return x < 0.3 ? INFINITY : x; });
    EXPECT_EQ(bad.non_finite_terms, 1u);
    EXPECT_FALSE(bad.finite());
}

TEST(TraceCsv, WritesRoundTrippableRows)
{
    const auto trace = simulate(refresh_chain(), 50, Start::at(0.5), 3);
    std::ostringstream out;
    write_trace_csv(out, trace);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "index,state,y_bit");
    for (std::size_t i = 0; i < trace.size(); ++i)
    {
        ASSERT_TRUE(std::getline(in, line));
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        EXPECT_EQ(std::stoul(line.substr(0, first)), i);
        EXPECT_EQ(parse_double(line.substr(first + 1, second - first - 1)), trace.states()[i]);
        EXPECT_EQ(std::stoi(line.substr(second + 1)), trace.bits()[i]);
    }
    std::ostringstream times;
    write_regen_times_csv(times, trace);
    EXPECT_EQ(times.str().substr(0, 11), "regen_time\n");
}

}  // namespace
}  // namespace specmc
