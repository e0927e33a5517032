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

#ifndef SPECMC_EXPERIMENTS_HPP
#define SPECMC_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specmc/chain.hpp"
#include "specmc/kernel.hpp"
#include "specmc/spectral.hpp"
#include "specmc/table.hpp"
#include "specmc/ustat.hpp"

namespace specmc
{

struct ExperimentReport
{
    std::string experiment_id;
    std::string config_snapshot;  // filled by the run layer
    Table replicates;
    Table summary;
    std::map<std::string, double> metrics;  // scalar findings, e.g. monotone flags and fitted slopes
    std::vector<std::pair<std::string, std::string>> attachments;  // extra files: name, content
    double wall_time_seconds = 0.0;
};

/// Largest n accepted by experiments that compute full spectra.
inline constexpr std::size_t kSpectrumMaxN = 4096;

/// Runs fn(0..count-1) on up to `jobs` threads. The first exception is rethrown.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Seed of replicate r: stream_seed(master_seed, r).
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate);

struct LlnOptions
{
    std::vector<std::size_t> n_grid{256, 1024, 4096};
    std::size_t replicates = 50;
    std::uint64_t master_seed = 1;
    Start start = Start::at(0.5);
    SpectrumRoute route = SpectrumRoute::automatic;  // factored only applies to H~_n
    std::size_t quadrature_order = 64;
    std::size_t jobs = 1;
};

/**
 * delta_2 of both empirical spectra against the true spectrum. Each
 * replicate simulates one path of length max(n_grid) and evaluates its
 * prefixes. Divergent matrices give +inf rows.
 *
 * replicates.csv: replicate,seed,n,delta2_tilde,delta2_zero,diag_bound,divergent
 * summary.csv:    statistic,n,mean,median,q10,q90
 */
ExperimentReport run_lln(const KernelSpec& kernel, const ChainSpec& chain, const LlnOptions& options);

struct TailOptions
{
    std::vector<double> t_grid{0.3};
    std::vector<std::size_t> n_grid{128, 256, 512, 1024};
    std::size_t replicates = 2000;
    std::uint64_t master_seed = 1;
    Start start = Start::at(0.5);
    SpectrumRoute route = SpectrumRoute::automatic;
    std::size_t quadrature_order = 64;
    std::size_t permutations = 999;
    std::size_t jobs = 1;
};

/**
 * Exceedance frequencies p(n, t) = P(delta_2(H~_n, H) >= t), from an
 * independent path per (replicate, n).
 *
 * For each t the slope of -log p against n is fitted over grid points with
 * p in (0, 1), and L_hat = min(t^2 / s^2, t / s) / slope with s = sup h(x, x).
 * The slope is tested against permutations of the pooled exceedance
 * indicators across n (p-value (1 + #{perm >= obs}) / (1 + permutations)).
 *
 * replicates.csv: replicate,seed,n,delta2
 * summary.csv:    n,t,mean,median,q10,q90,exceed_freq,wilson_lo,wilson_hi
 * fit.csv:        t,points,slope,L_hat,increasing_steps,nondecreasing,perm_p_value
 *
 * increasing_steps counts strict increases of -log p (p = 0 reads as +inf);
 * nondecreasing treats two vanishing frequencies as equal.
 */
ExperimentReport run_tail(const KernelSpec& kernel, const ChainSpec& chain, const TailOptions& options);

struct CounterexampleOptions
{
    std::vector<std::size_t> n_grid{1024, 4096, 16384, 65536};
    std::size_t replicates = 50;
    std::uint64_t master_seed = 1;
    Start start = Start::at(0.5);
    std::size_t jobs = 1;
};

/// Largest n accepted by run_counterexample.
inline constexpr std::size_t kCounterexampleMaxN = std::size_t{1} << 18;

/**
 * Refresh chain with the diagonal kernel. Per replicate and n, the lower
 * bound max_{i <= n-2} h(X_i, X_{i+1}) / n on the top eigenvalue, and the
 * same statistic for the zero kernel.
 *
 * replicates.csv: replicate,seed,n,lower_bound,zero_kernel_bound
 * summary.csv:    statistic,n,mean,median,q10,q90
 */
ExperimentReport run_counterexample(const CounterexampleOptions& options);

/// max_{0 <= i <= n-2} h(X_i, X_{i+1}) / n over the first n states.
double adjacent_lower_bound(std::span<const double> states, const KernelSpec& kernel);

struct UstatOptions
{
    std::vector<std::size_t> n_grid{1000, 10000, 100000};
    std::vector<double> t_grid{0.01};
    std::size_t replicates = 100;
    std::uint64_t master_seed = 1;
    Start start = Start::at(0.5);
    UStatRoute route = UStatRoute::automatic;
    std::size_t quadrature_order = 64;
    std::size_t jobs = 1;
};

/**
 * U_n(h) along prefixes of one path per replicate, against pi x pi (h).
 *
 * replicates.csv: replicate,seed,n,u_stat,abs_error,remainder_1,remainder_2,remainder_3
 * summary.csv:    n,t,mean,median,q10,q90,exceed_freq   (statistic: abs_error)
 */
ExperimentReport run_ustat(const KernelSpec& kernel, const ChainSpec& chain, const UstatOptions& options);

struct SpectrumOptions
{
    std::vector<std::size_t> n_grid{512};
    std::size_t replicates = 1;
    std::uint64_t master_seed = 1;
    Start start = Start::at(0.5);
    SpectrumRoute route = SpectrumRoute::automatic;
    std::size_t quadrature_order = 64;
    std::size_t jobs = 1;
};

/**
 * One-shot empirical spectra. Rows as in run_lln plus the top-eigenvalue
 * lower bound. Attaches spectrum_tilde.csv, spectrum_zero.csv and
 * spectrum_true.csv for replicate 0 at the largest n, with its trace.csv
 * and regen_times.csv.
 */
ExperimentReport run_spectrum(const KernelSpec& kernel, const ChainSpec& chain,
                              const SpectrumOptions& options);

/// Drift condition P^m V - V <= -lambda V + b 1_C with V >= 1, K = sup_C V.
struct DriftParams
{
    double lambda = 0.5;
    double b = 1.0;
    double K = 2.0;
    double delta = 0.5;
    double V_at_start = 1.0;
    bool in_C = true;

    bool operator==(const DriftParams&) const = default;
};

/// Throws InvalidArgument unless every parameter is in range.
void validate(const DriftParams& drift);

struct TauBound
{
    double first = 0.0;   // 2 log(log(6/(2-delta)) / log(6/(2-delta))), as printed
    double second = 0.0;  // max(log(start term)/log 2, log(b/(1-lambda) + K)/log 2, 1)
    double third = 0.0;   // 1 / log(1/(1-lambda))
    double value = 0.0;   // first * second * third
};

/**
 * The printed bound on tau. The start term is b/(1-lambda) + K when the
 * start lies in C and V(start) otherwise. The printed first factor is the
 * log of a quotient that is identically 1, so `value` is 0; the three
 * factors are returned separately.
 */
TauBound tau_bound(const DriftParams& drift);

/// Single-row report: lambda,b,K,delta,V_at_start,in_C,first,second,third,tau.
ExperimentReport run_tau(const DriftParams& drift);

}  // namespace specmc

#endif  // SPECMC_EXPERIMENTS_HPP
