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

#include "specmc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/special_functions/beta.hpp>

#include "specmc/error.hpp"

namespace specmc
{

const char* to_string(ErgodicityClass c) noexcept
{
    switch (c)
    {
    case ErgodicityClass::uniform:
        return "uniform";
    case ErgodicityClass::geometric:
        return "geometric";
    case ErgodicityClass::harris_only:
        return "harris_only";
    }
    return "unknown";
}

StationaryLaw uniform_law()
{
    StationaryLaw law;
    law.name = "uniform";
    law.density = [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; };
    law.sample = [](Philox& rng) { return rng.uniform(); };
    law.is_lebesgue = true;
    return law;
}

StationaryLaw beta_law(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw InvalidArgument("beta_law: shape parameters must be positive");
    StationaryLaw law;
    law.name = "beta";
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    law.density = [a, b, log_norm](double x) {
        if (!(x > 0.0 && x < 1.0))
            return 0.0;
        return std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
    };
    law.sample = [a, b](Philox& rng) {
        const double x = boost::math::ibeta_inv(a, b, rng.uniform());
        // The inverse can round onto an endpoint for extreme shapes.
        return std::clamp(x, 0x1.0p-53, 1.0 - 0x1.0p-53);
    };
    law.is_lebesgue = (a == 1.0 && b == 1.0);
    return law;
}

void validate(const ChainSpec& chain)
{
    const auto& mz = chain.minorization;
    if (!(mz.delta > 0.0 && mz.delta <= 1.0))
        throw InvalidArgument(chain.name + ": minorization delta must lie in (0, 1]");
    if (mz.m < 1)
        throw InvalidArgument(chain.name + ": minorization m must be >= 1");
    if (!chain.transition)
        throw InvalidArgument(chain.name + ": missing transition");
    if (!mz.small_set || !mz.nu_sample)
        throw InvalidArgument(chain.name + ": incomplete minorization");
}

ChainSpec iid_chain(StationaryLaw law, double delta)
{
    if (!law.sample)
        throw InvalidArgument("iid_chain: law has no sampler");
    ChainSpec chain;
    chain.name = "iid";
    chain.transition = [sample = law.sample](double, Philox& rng) { return sample(rng); };
    chain.minorization.small_set = [](double) { return true; };
    chain.minorization.m = 1;
    chain.minorization.delta = delta;
    chain.minorization.nu_sample = law.sample;
    chain.minorization.nu_density = law.density;
    chain.minorization.description = "C = (0,1), m = 1, nu = pi";
    // Q(x, .) = (pi - delta pi) / (1 - delta) = pi.
    chain.splitter = [sample = law.sample, delta](double, Philox& rng, std::span<double> next) {
        const bool heads = rng.bernoulli(delta);
        next[0] = sample(rng);
        return heads;
    };
    chain.stationary = std::move(law);
    chain.ergodicity = ErgodicityClass::uniform;
    validate(chain);
    return chain;
}

ChainSpec refresh_chain(double stay_prob, std::optional<double> delta_opt)
{
    if (!(stay_prob >= 0.0 && stay_prob < 1.0))
        throw InvalidArgument("refresh_chain: stay_prob must lie in [0, 1)");
    const double delta = delta_opt.value_or(1.0 - stay_prob);
    if (!(delta > 0.0 && delta <= 1.0 - stay_prob))
        throw InvalidArgument("refresh_chain: delta must lie in (0, 1 - stay_prob]");

    ChainSpec chain;
    chain.name = "refresh";
    chain.transition = [stay_prob](double x, Philox& rng) {
        return rng.bernoulli(stay_prob) ? x : rng.uniform();
    };
    chain.stationary = uniform_law();
    chain.minorization.small_set = [](double) { return true; };
    chain.minorization.m = 1;
    chain.minorization.delta = delta;
    chain.minorization.nu_sample = [](Philox& rng) { return rng.uniform(); };
    chain.minorization.nu_density = [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; };
    chain.minorization.description = "C = (0,1), m = 1, nu = Uniform(0,1)";

    // Q(x, .) = (stay_prob delta_x + (1 - stay_prob - delta) U) / (1 - delta).
    const double q_stay = delta < 1.0 ? stay_prob / (1.0 - delta) : 1.0;
    chain.splitter = [delta, q_stay](double x, Philox& rng, std::span<double> next) {
        if (rng.bernoulli(delta))
        {
            next[0] = rng.uniform();
            return true;
        }
        next[0] = rng.bernoulli(q_stay) ? x : rng.uniform();
        return false;
    };
    chain.ergodicity = ErgodicityClass::uniform;
    validate(chain);
    return chain;
}

double reflected_proposal_density(double x, double y, double step) noexcept
{
    if (!(y > 0.0 && y < 1.0))
        return 0.0;
    int images = 0;
    if (std::abs(y - x) < step)
        ++images;
    if (x + y < step)
        ++images;
    if (2.0 - x - y < step)
        ++images;
    return images / (2.0 * step);
}

namespace
{
double reflect_into_unit(double y)
{
    if (y < 0.0)
        return -y;
    if (y > 1.0)
        return 2.0 - y;
    return y;
}

struct MetropolisMove
{
    double proposal;
    double acceptance;
    bool accepted;
};

MetropolisMove metropolis_move(double x, double step, const std::function<double(double)>& density,
                               Philox& rng)
{
    const double y = reflect_into_unit(x + step * (2.0 * rng.uniform() - 1.0));
    MetropolisMove move{y, 0.0, false};
    if (!(y > 0.0 && y < 1.0))
        return move;
    const double px = density(x);
    const double py = density(y);
    move.acceptance = px > 0.0 ? std::min(1.0, py / px) : 1.0;
    move.accepted = rng.uniform() < move.acceptance;
    return move;
}
}  // namespace

ChainSpec metropolis_chain(const MetropolisOptions& options)
{
    if (!(options.step > 0.0 && options.step <= 1.0))
        throw InvalidArgument("metropolis_chain: step must lie in (0, 1]");
    if (!options.target.density)
        throw InvalidArgument("metropolis_chain: target density required");
    const Interval c = options.small_set;
    const Interval nu = options.nu_support;
    if (!(0.0 <= c.lo && c.lo < c.hi && c.hi <= 1.0) || !(0.0 <= nu.lo && nu.lo < nu.hi && nu.hi <= 1.0))
        throw InvalidArgument("metropolis_chain: small set and nu support must be subintervals of [0, 1]");

    ChainSpec chain;
    chain.name = "metropolis";
    chain.stationary = options.target;
    const auto density = options.target.density;
    const double step = options.step;
    chain.transition = [density, step](double x, Philox& rng) {
        const auto move = metropolis_move(x, step, density, rng);
        return move.accepted ? move.proposal : x;
    };

    const double nu_height = 1.0 / nu.length();
    chain.minorization.small_set = [c](double x) { return c.contains(x); };
    chain.minorization.m = 1;
    chain.minorization.delta = options.delta;
    chain.minorization.nu_sample = [nu](Philox& rng) { return rng.uniform(nu.lo, nu.hi); };
    chain.minorization.nu_density = [nu, nu_height](double y) {
        return nu.contains(y) ? nu_height : 0.0;
    };
    chain.minorization.description = "declared: C = [" + std::to_string(c.lo) + ", "
                                     + std::to_string(c.hi) + "], nu = Uniform["
                                     + std::to_string(nu.lo) + ", " + std::to_string(nu.hi) + "]";

    const double delta = options.delta;
    chain.splitter = [density, step, nu, nu_height, delta](double x, Philox& rng,
                                                           std::span<double> next) {
        const auto move = metropolis_move(x, step, density, rng);
        if (!move.accepted || move.proposal == x)
        {
            next[0] = x;
            return false;
        }
        next[0] = move.proposal;
        if (!nu.contains(move.proposal))
            return false;
        const double continuous = reflected_proposal_density(x, move.proposal, step) * move.acceptance;
        const double ratio = delta * nu_height / continuous;
        if (!(ratio <= 1.0 + 1e-12))
            throw MinorizationViolated("metropolis: delta nu(y) exceeds P(x, dy) at x = "
                                       + format_double(x) + ", y = " + format_double(move.proposal));
        return rng.bernoulli(ratio);
    };
    chain.ergodicity = ErgodicityClass::geometric;
    validate(chain);
    return chain;
}

// --- RegenerationTrace -----------------------------------------------------

RegenerationTrace RegenerationTrace::from_path(std::vector<double> states,
                                               std::vector<std::uint8_t> bits, std::size_t m,
                                               std::uint64_t seed)
{
    if (states.size() != bits.size())
        throw InvalidArgument("from_path: states and bits differ in length");
    if (m < 1)
        throw InvalidArgument("from_path: m must be >= 1");
    RegenerationTrace trace;
    trace.states_ = std::move(states);
    trace.bits_ = std::move(bits);
    trace.m_ = m;
    trace.seed_ = seed;
    trace.index_regenerations();
    return trace;
}

void RegenerationTrace::index_regenerations()
{
    regen_times_.clear();
    blocks_.clear();
    const std::size_t n = states_.size();
    const std::size_t skeleton = (n + m_ - 1) / m_;

    bool seeking_first = true;
    for (std::size_t k = 0; k < skeleton; ++k)
    {
        const bool y = bits_[m_ * k] != 0;
        if (seeking_first ? y : !y)
        {
            regen_times_.push_back(k);
            seeking_first = false;
        }
    }
    for (std::size_t i = 0; i + 1 < regen_times_.size(); ++i)
    {
        const std::size_t begin = m_ * (regen_times_[i] + 1);
        const std::size_t end = m_ * regen_times_[i + 1] + m_;
        if (end > n)
            break;
        blocks_.push_back({begin, end});
    }
}

BlockRange RegenerationTrace::block_range(std::size_t k) const
{
    if (k >= blocks_.size())
        throw IndexOutOfRange("block index " + std::to_string(k) + " out of range (have "
                              + std::to_string(blocks_.size()) + ")");
    return blocks_[k];
}

std::span<const double> RegenerationTrace::block(std::size_t k) const
{
    const auto range = block_range(k);
    return std::span<const double>(states_).subspan(range.begin, range.size());
}

std::size_t RegenerationTrace::completed_regenerations() const noexcept
{
    std::size_t count = 0;
    if (states_.empty())
        return 0;
    for (std::size_t k = 0; k < regen_times_.size(); ++k)
    {
        if (m_ * regen_times_[k] + m_ - 1 <= states_.size() - 1)
            count = k;
        else
            break;
    }
    return count;
}

std::vector<std::size_t> RegenerationTrace::regeneration_epochs() const
{
    std::vector<std::size_t> epochs;
    for (std::size_t k = 0; m_ * k < bits_.size(); ++k)
    {
        if (bits_[m_ * k])
            epochs.push_back(k);
    }
    return epochs;
}

std::vector<BlockRange> RegenerationTrace::conventional_blocks() const
{
    const auto epochs = regeneration_epochs();
    std::vector<BlockRange> blocks;
    for (std::size_t j = 0; j + 1 < epochs.size(); ++j)
    {
        const std::size_t begin = m_ * (epochs[j] + 1);
        const std::size_t end = m_ * (epochs[j + 1] + 1);
        if (end > states_.size())
            break;
        blocks.push_back({begin, end});
    }
    return blocks;
}

RegenerationTrace RegenerationTrace::prefix(std::size_t n) const
{
    if (n == 0 || n > states_.size())
        throw InvalidArgument("prefix length must lie in [1, size()]");
    return from_path(std::vector<double>(states_.begin(), states_.begin() + n),
                     std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + n), m_, seed_);
}

// --- simulation ------------------------------------------------------------

namespace
{
double initial_state(const ChainSpec& chain, const Start& start, Philox& rng)
{
    if (start.point)
    {
        if (!chain.in_state_space(*start.point))
            throw InvalidArgument(chain.name + ": start point " + format_double(*start.point)
                                  + " is outside the state space");
        return *start.point;
    }
    if (!chain.stationary.sample)
        throw InvalidArgument(chain.name + ": stationary start requested but no sampler available");
    return chain.stationary.sample(rng);
}
}  // namespace

RegenerationTrace simulate(const ChainSpec& chain, std::size_t n, const Start& start,
                           std::uint64_t seed)
{
    if (n == 0)
        throw InvalidArgument("simulate: n must be >= 1");
    validate(chain);
    if (!chain.splitter)
        throw SplittingUnavailable(chain.name + ": residual kernel Q has no closed form; splitting unavailable");

    Philox rng(seed);
    const std::size_t m = chain.minorization.m;
    std::vector<double> states(n);
    std::vector<std::uint8_t> bits(n, 0);
    std::vector<double> step(m);

    states[0] = initial_state(chain, start, rng);
    for (std::size_t i = 0; i + 1 < n; i += m)
    {
        const double x = states[i];
        if (chain.minorization.small_set(x))
        {
            bits[i] = chain.splitter(x, rng, step) ? 1 : 0;
        }
        else
        {
            double current = x;
            for (std::size_t j = 0; j < m; ++j)
            {
                current = chain.transition(current, rng);
                step[j] = current;
            }
        }
        for (std::size_t j = 0; j < m && i + 1 + j < n; ++j)
            states[i + 1 + j] = step[j];
    }
    return RegenerationTrace::from_path(std::move(states), std::move(bits), m, seed);
}

std::vector<double> simulate_unsplit(const ChainSpec& chain, std::size_t n, const Start& start,
                                     std::uint64_t seed)
{
    if (n == 0)
        throw InvalidArgument("simulate_unsplit: n must be >= 1");
    validate(chain);
    Philox rng(seed);
    std::vector<double> states(n);
    states[0] = initial_state(chain, start, rng);
    for (std::size_t i = 1; i < n; ++i)
        states[i] = chain.transition(states[i - 1], rng);
    return states;
}

double block_sum(const RegenerationTrace& trace, const StateFunction& f, std::size_t k)
{
    double sum = 0.0;
    for (double x : trace.block(k))
        sum += f(x);
    return sum;
}

Aggregate lln_additive(const RegenerationTrace& trace, const StateFunction& f)
{
    const auto states = trace.states();
    std::vector<double> terms(states.size());
    Aggregate result;
    for (std::size_t i = 0; i < states.size(); ++i)
    {
        terms[i] = f(states[i]);
        if (!std::isfinite(terms[i]))
            ++result.non_finite_terms;
    }
    result.value = pairwise_sum(terms) / static_cast<double>(states.size());
    return result;
}

MinorizationCheck check_minorization(const ChainSpec& chain, std::span<const double> points,
                                     std::span<const Interval> test_sets, std::size_t draws,
                                     std::uint64_t seed)
{
    validate(chain);
    if (!chain.minorization.nu_density)
        throw InvalidArgument(chain.name + ": nu density required for a minorization check");
    if (draws == 0 || points.empty() || test_sets.empty())
        throw InvalidArgument("check_minorization: need points, test sets and draws");

    auto nu_mass = [&](const Interval& a) {
        // Midpoint rule is adequate: nu densities here are piecewise constant or smooth.
        constexpr int cells = 4096;
        const double width = a.length() / cells;
        double mass = 0.0;
        for (int i = 0; i < cells; ++i)
            mass += chain.minorization.nu_density(a.lo + (i + 0.5) * width) * width;
        return mass;
    };

    MinorizationCheck check;
    check.min_slack = std::numeric_limits<double>::infinity();
    const std::size_t m = chain.minorization.m;
    for (std::size_t p = 0; p < points.size(); ++p)
    {
        const double x = points[p];
        if (!chain.minorization.small_set(x))
            throw InvalidArgument("check_minorization: point " + format_double(x) + " is not in C");
        Philox rng(stream_seed(seed, p));
        std::vector<double> endpoints(draws);
        for (auto& y : endpoints)
        {
            y = x;
            for (std::size_t j = 0; j < m; ++j)
                y = chain.transition(y, rng);
        }
        for (const auto& a : test_sets)
        {
            const auto hits = std::count_if(endpoints.begin(), endpoints.end(),
                                            [&](double y) { return a.contains(y); });
            const double p_hat = static_cast<double>(hits) / static_cast<double>(draws);
            const double se = std::sqrt(std::max(p_hat * (1.0 - p_hat), 1.0 / draws) / draws);
            const double slack = p_hat - chain.minorization.delta * nu_mass(a) + 3.0 * se;
            if (slack < check.min_slack)
            {
                check.min_slack = slack;
                check.worst_x = x;
                check.worst_set = a;
            }
        }
    }
    check.passed = check.min_slack >= 0.0;
    return check;
}

void write_trace_csv(std::ostream& out, const RegenerationTrace& trace)
{
    out << "index,state,y_bit\n";
    const auto states = trace.states();
    const auto bits = trace.bits();
    for (std::size_t i = 0; i < states.size(); ++i)
        out << i << ',' << format_double(states[i]) << ',' << static_cast<int>(bits[i]) << '\n';
}

void write_regen_times_csv(std::ostream& out, const RegenerationTrace& trace)
{
    out << "regen_time\n";
    for (std::size_t t : trace.regen_times())
        out << t << '\n';
}

}  // namespace specmc
