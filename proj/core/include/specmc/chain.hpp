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

#ifndef SPECMC_CHAIN_HPP
#define SPECMC_CHAIN_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specmc/numeric.hpp"
#include "specmc/rng.hpp"

namespace specmc
{

/// Closed interval [lo, hi].
struct Interval
{
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    double length() const noexcept { return hi - lo; }
};

enum class ErgodicityClass
{
    uniform,
    geometric,
    harris_only,
};

const char* to_string(ErgodicityClass c) noexcept;

/// Probability law on (0, 1) with a normalized density and an optional sampler.
struct StationaryLaw
{
    std::string name;
    std::function<double(double)> density;
    std::function<double(Philox&)> sample;  // empty: no exact sampler
    bool is_lebesgue = false;               // Uniform(0, 1)
};

StationaryLaw uniform_law();
/// Beta(a, b); sampled by inverting the regularized incomplete beta function.
StationaryLaw beta_law(double a, double b);

/// P^m(x, A) >= delta nu(A) for every x in the small set C.
struct Minorization
{
    std::function<bool(double)> small_set;
    std::size_t m = 1;
    double delta = 0.5;
    std::function<double(Philox&)> nu_sample;
    std::function<double(double)> nu_density;  // optional; needed for Monte Carlo checks
    std::string description;
};

using Transition = std::function<double(double, Philox&)>;

/**
 * Split update from a skeleton state x in C.
 *
 * Writes the next m states into `next` and returns the regeneration bit Y.
 * The joint law of (Y, next) must satisfy P(Y = 1, X_m in A) = delta nu(A)
 * and, marginally over Y, reproduce P^m(x, .).
 */
using Splitter = std::function<bool(double x, Philox& rng, std::span<double> next)>;

struct ChainSpec
{
    std::string name;
    double state_lo = 0.0;  // state space is the open interval (state_lo, state_hi)
    double state_hi = 1.0;
    Transition transition;
    StationaryLaw stationary;
    Minorization minorization;
    Splitter splitter;  // empty: splitting unavailable
    ErgodicityClass ergodicity = ErgodicityClass::harris_only;

    bool in_state_space(double x) const noexcept { return state_lo < x && x < state_hi; }
};

/// Throws InvalidArgument unless delta is in (0, 1] and m >= 1.
void validate(const ChainSpec& chain);

/// i.i.d. draws from `law`, split with C = whole space, nu = law.
ChainSpec iid_chain(StationaryLaw law, double delta = 0.5);

/**
 * X_{n+1} = X_n with probability `stay_prob`, otherwise a fresh Uniform(0, 1).
 *
 * Minorized on C = (0, 1) with m = 1, nu = Uniform(0, 1) and any
 * delta <= 1 - stay_prob (default: equality). The residual kernel is the
 * mixture (stay_prob point mass + (1 - stay_prob - delta) Uniform) / (1 - delta).
 */
ChainSpec refresh_chain(double stay_prob = 0.5, std::optional<double> delta = {});

struct MetropolisOptions
{
    StationaryLaw target;
    double step = 0.5;  // proposal half-width, in (0, 1]
    Interval small_set{0.3, 0.7};
    Interval nu_support{0.3, 0.7};  // nu = Uniform(nu_support)
    double delta = 0.3;
};

/**
 * Random-walk Metropolis-Hastings on (0, 1) with uniform proposals of
 * half-width `step` reflected at the endpoints.
 *
 * The chain is split retrospectively: after the MH move from x in C to y,
 * the bit is drawn with probability delta nu(y) / p(x, y), where p is the
 * density of the continuous part of P(x, .). Rejected moves never
 * regenerate. A ratio above one means the declared minorization is false
 * and raises MinorizationViolated.
 */
ChainSpec metropolis_chain(const MetropolisOptions& options);

/// Proposal density of the reflected uniform random walk.
double reflected_proposal_density(double x, double y, double step) noexcept;

struct Start
{
    std::optional<double> point;  // empty: draw X_0 from the stationary law

    static Start at(double x) { return Start{x}; }
    static Start stationary() { return Start{}; }
};

/// Half-open index range [begin, end) into a trace.
struct BlockRange
{
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
};

/**
 * Simulated split-chain path.
 *
 * Regeneration times follow the indexing
 *   T_0 = inf{k >= 0 : Y_k = 1},  T_i = inf{k > T_{i-1} : Y_k = 0},
 * over the m-skeleton bits Y_k = bits[m k], and block i spans the states
 * m(T_i + 1), ..., m T_{i+1} + m - 1. Blocks tile the path from m(T_0 + 1)
 * up to the end of the last complete block. `regeneration_epochs()` gives
 * the conventional epochs {k : Y_k = 1} instead.
 */
class RegenerationTrace
{
public:
    /// Rebuilds the regeneration structure of an existing path.
    static RegenerationTrace from_path(std::vector<double> states,
                                       std::vector<std::uint8_t> bits,
                                       std::size_t m,
                                       std::uint64_t seed);

    std::size_t size() const noexcept { return states_.size(); }
    std::size_t m() const noexcept { return m_; }
    std::uint64_t seed() const noexcept { return seed_; }

    std::span<const double> states() const noexcept { return states_; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::span<const std::size_t> regen_times() const noexcept { return regen_times_; }

    std::size_t block_count() const noexcept { return blocks_.size(); }
    BlockRange block_range(std::size_t k) const;
    std::span<const double> block(std::size_t k) const;

    /// N_n = sup{k : m T_k + m - 1 <= n - 1}, with sup of the empty set = 0.
    std::size_t completed_regenerations() const noexcept;

    /// Skeleton indices k with Y_k = 1.
    std::vector<std::size_t> regeneration_epochs() const;
    /// Blocks between successive conventional epochs e_j < e_{j+1}:
    /// states m(e_j + 1), ..., m(e_{j+1} + 1) - 1.
    std::vector<BlockRange> conventional_blocks() const;

    /// First n states with the regeneration structure recomputed.
    RegenerationTrace prefix(std::size_t n) const;

private:
    RegenerationTrace() = default;
    void index_regenerations();

    std::vector<double> states_;
    std::vector<std::uint8_t> bits_;
    std::vector<std::size_t> regen_times_;
    std::vector<BlockRange> blocks_;
    std::size_t m_ = 1;
    std::uint64_t seed_ = 0;
};

/**
 * Exact split-chain simulation of n states.
 *
 * Throws InvalidArgument for n = 0 or a start point outside the state space,
 * SplittingUnavailable when the chain has no splitter. Identical arguments
 * give a bit-identical trace.
 */
RegenerationTrace simulate(const ChainSpec& chain, std::size_t n, const Start& start,
                           std::uint64_t seed);

/// Plain simulation through `chain.transition`, without regeneration bits.
std::vector<double> simulate_unsplit(const ChainSpec& chain, std::size_t n, const Start& start,
                                     std::uint64_t seed);

using StateFunction = std::function<double(double)>;

/// Sum of f over block k; throws IndexOutOfRange when the block does not exist.
double block_sum(const RegenerationTrace& trace, const StateFunction& f, std::size_t k);

/// (1/n) sum_i f(X_i). Non-finite terms are counted, never dropped.
Aggregate lln_additive(const RegenerationTrace& trace, const StateFunction& f);

struct MinorizationCheck
{
    double min_slack = 0.0;  // min over (x, A) of p_hat(x, A) - delta nu(A) + 3 se
    double worst_x = 0.0;
    Interval worst_set;
    bool passed = false;
};

/**
 * Monte Carlo check of P^m(x, A) >= delta nu(A) for x in `points` (all in C)
 * and intervals A in `test_sets`, using `draws` m-step transitions per point.
 * Passes when every estimate is within three standard errors of the bound.
 */
MinorizationCheck check_minorization(const ChainSpec& chain, std::span<const double> points,
                                     std::span<const Interval> test_sets, std::size_t draws,
                                     std::uint64_t seed);

/// `index,state,y_bit` rows, floats at 17 significant digits.
void write_trace_csv(std::ostream& out, const RegenerationTrace& trace);
/// Single `regen_time` column.
void write_regen_times_csv(std::ostream& out, const RegenerationTrace& trace);

}  // namespace specmc

#endif  // SPECMC_CHAIN_HPP
