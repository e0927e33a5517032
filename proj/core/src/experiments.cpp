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

#include "specmc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "specmc/error.hpp"
#include "specmc/rng.hpp"
#include "specmc/stats.hpp"

namespace specmc
{

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn)
{
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load())
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate)
{
    return stream_seed(master_seed, replicate);
}

namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();
// Stream index reserved for the permutation test; replicate indices never reach it.
constexpr std::uint64_t kPermutationStream = ~std::uint64_t{0};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_grid(const std::vector<std::size_t>& grid, std::size_t min_n, std::size_t max_n)
{
    if (grid.empty())
        throw InvalidArgument("n_grid must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        if (grid[i] < min_n || grid[i] > max_n)
            throw InvalidArgument("n_grid entry " + std::to_string(grid[i]) + " outside [" +
                                  std::to_string(min_n) + ", " + std::to_string(max_n) + "]");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw InvalidArgument("n_grid must be strictly increasing");
    }
}

void check_replicates(std::size_t replicates)
{
    if (replicates == 0)
        throw InvalidArgument("replicates must be positive");
}

struct Summary
{
    double mean = 0.0;
    double median = 0.0;
    double q10 = 0.0;
    double q90 = 0.0;
};

Summary summarize(std::span<const double> values)
{
    return {specmc::mean(values), quantile(values, 0.5), quantile(values, 0.1), quantile(values, 0.9)};
}

std::vector<double> select(const Table& table, std::string_view column, std::string_view key,
                           double key_value)
{
    std::vector<double> out;
    for (std::size_t r = 0; r < table.rows(); ++r)
        if (table.number(r, key) == key_value)
            out.push_back(table.number(r, column));
    return out;
}

// Adds statistic,n,mean,median,q10,q90 rows; returns the medians along the grid.
std::vector<double> add_statistic_rows(Table& summary, const Table& rows, std::string_view column,
                                       const std::vector<std::size_t>& n_grid)
{
    std::vector<double> medians;
    for (std::size_t n : n_grid)
    {
        const auto values = select(rows, column, "n", static_cast<double>(n));
        const Summary s = summarize(values);
        summary.add_row({std::string(column), static_cast<std::uint64_t>(n), s.mean, s.median, s.q10,
                         s.q90});
        medians.push_back(s.median);
    }
    return medians;
}

bool nonincreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] <= v[i - 1]))
            return false;
    return true;
}

bool strictly_increasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            return false;
    return true;
}

double delta2_or_inf(const SpectrumEstimate& estimate, std::span<const double> truth)
{
    return estimate.divergent ? kInf : delta2(estimate.eigenvalues, truth);
}

SpectrumRoute zero_diagonal_route(SpectrumRoute route)
{
    return route == SpectrumRoute::factored ? SpectrumRoute::compressed : route;
}

void merge_rows(Table& table, std::vector<std::vector<std::vector<Cell>>>& per_replicate)
{
    for (auto& rows : per_replicate)
        for (auto& row : rows)
            table.add_row(std::move(row));
}

std::string table_csv(const Table& table)
{
    std::ostringstream out;
    table.write_csv(out);
    return out.str();
}
}  // namespace

ExperimentReport run_lln(const KernelSpec& kernel, const ChainSpec& chain, const LlnOptions& options)
{
    const auto started = Clock::now();
    check_grid(options.n_grid, 1, kSpectrumMaxN);
    check_replicates(options.replicates);
    validate(chain);
    const std::vector<double> truth = true_spectrum(kernel, chain.stationary, options.quadrature_order);
    const std::size_t n_max = options.n_grid.back();

    std::vector<std::vector<std::vector<Cell>>> per_replicate(options.replicates);
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        const std::uint64_t seed = replicate_seed(options.master_seed, r);
        const RegenerationTrace trace = simulate(chain, n_max, options.start, seed);
        for (std::size_t n : options.n_grid)
        {
            const auto states = trace.states().first(n);
            const auto tilde = gram_spectrum(states, kernel, GramVariant::with_diagonal, options.route);
            const auto zero = gram_spectrum(states, kernel, GramVariant::zero_diagonal,
                                            zero_diagonal_route(options.route));
            const bool divergent = tilde.divergent || zero.divergent;
            per_replicate[r].push_back({static_cast<std::uint64_t>(r), seed, static_cast<std::uint64_t>(n),
                                        delta2_or_inf(tilde, truth), delta2_or_inf(zero, truth),
                                        diagonal_removal_bound(states, kernel),
                                        static_cast<std::int64_t>(divergent)});
        }
    });

    ExperimentReport report;
    report.experiment_id = "lln";
    report.replicates = Table(
        {"replicate", "seed", "n", "delta2_tilde", "delta2_zero", "diag_bound", "divergent"});
    merge_rows(report.replicates, per_replicate);
    report.summary = Table({"statistic", "n", "mean", "median", "q10", "q90"});
    const auto tilde = add_statistic_rows(report.summary, report.replicates, "delta2_tilde", options.n_grid);
    const auto zero = add_statistic_rows(report.summary, report.replicates, "delta2_zero", options.n_grid);
    report.metrics["tilde_nonincreasing"] = nonincreasing(tilde) ? 1.0 : 0.0;
    report.metrics["zero_nonincreasing"] = nonincreasing(zero) ? 1.0 : 0.0;
    report.metrics["tilde_median_at_max_n"] = tilde.back();
    report.metrics["zero_median_at_max_n"] = zero.back();
    report.wall_time_seconds = seconds_since(started);
    return report;
}

namespace
{
// Least-squares slope of -log p over points with p in (0, 1); NaN below two points.
double exceedance_slope(const std::vector<std::size_t>& n_grid, std::span<const double> p)
{
    std::vector<double> x, y;
    for (std::size_t a = 0; a < n_grid.size(); ++a)
    {
        if (p[a] > 0.0 && p[a] < 1.0)
        {
            x.push_back(static_cast<double>(n_grid[a]));
            y.push_back(-std::log(p[a]));
        }
    }
    if (x.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    return least_squares_slope(x, y);
}

double neg_log(double p) { return p > 0.0 ? -std::log(p) : kInf; }

std::size_t increasing_steps(std::span<const double> p)
{
    std::size_t steps = 0;
    for (std::size_t a = 1; a < p.size(); ++a)
    {
        if (neg_log(p[a]) > neg_log(p[a - 1]))
            ++steps;
    }
    return steps;
}

// -log p nondecreasing along the grid; two vanishing frequencies compare equal.
bool neg_log_nondecreasing(std::span<const double> p)
{
    for (std::size_t a = 1; a < p.size(); ++a)
        if (neg_log(p[a]) < neg_log(p[a - 1]))
            return false;
    return true;
}

double permutation_p_value(const std::vector<std::size_t>& n_grid, std::vector<std::uint8_t> pooled,
                           std::size_t group, double observed, std::size_t permutations, Philox& rng)
{
    if (std::isnan(observed) || permutations == 0)
        return 1.0;
    std::size_t at_least = 0;
    std::vector<double> p(n_grid.size());
    for (std::size_t k = 0; k < permutations; ++k)
    {
        for (std::size_t i = pooled.size(); i > 1; --i)
            std::swap(pooled[i - 1], pooled[rng.index(i)]);
        for (std::size_t a = 0; a < n_grid.size(); ++a)
        {
            std::size_t hits = 0;
            for (std::size_t i = a * group; i < (a + 1) * group; ++i)
                hits += pooled[i];
            p[a] = static_cast<double>(hits) / static_cast<double>(group);
        }
        const double slope = exceedance_slope(n_grid, p);
        if (!std::isnan(slope) && slope >= observed)
            ++at_least;
    }
    return static_cast<double>(1 + at_least) / static_cast<double>(1 + permutations);
}
}  // namespace

ExperimentReport run_tail(const KernelSpec& kernel, const ChainSpec& chain, const TailOptions& options)
{
    const auto started = Clock::now();
    if (!kernel.positive || !kernel.bounded_diag)
        throw InvalidArgument("run_tail: kernel '" + kernel.id + "' must be bounded and positive");
    if (chain.ergodicity == ErgodicityClass::harris_only)
        throw InvalidArgument("run_tail: chain '" + chain.name + "' is not geometrically ergodic");
    check_grid(options.n_grid, 1, kSpectrumMaxN);
    check_replicates(options.replicates);
    if (options.t_grid.empty())
        throw InvalidArgument("t_grid must not be empty");
    for (double t : options.t_grid)
        if (!(t >= 0.0) || !std::isfinite(t))
            throw InvalidArgument("t_grid entries must be finite and nonnegative");
    validate(chain);
    const std::vector<double> truth = true_spectrum(kernel, chain.stationary, options.quadrature_order);
    const std::size_t grid = options.n_grid.size();

    // values[a * replicates + r] = delta_2 at n_grid[a] for replicate r.
    std::vector<double> values(grid * options.replicates);
    std::vector<std::uint64_t> seeds(grid * options.replicates);
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        const std::uint64_t base = replicate_seed(options.master_seed, r);
        for (std::size_t a = 0; a < grid; ++a)
        {
            const std::uint64_t seed = stream_seed(base, a);
            const RegenerationTrace trace = simulate(chain, options.n_grid[a], options.start, seed);
            const auto estimate =
                gram_spectrum(trace.states(), kernel, GramVariant::with_diagonal, options.route);
            values[a * options.replicates + r] = delta2_or_inf(estimate, truth);
            seeds[a * options.replicates + r] = seed;
        }
    });

    ExperimentReport report;
    report.experiment_id = "tail";
    report.replicates = Table({"replicate", "seed", "n", "delta2"});
    for (std::size_t r = 0; r < options.replicates; ++r)
        for (std::size_t a = 0; a < grid; ++a)
            report.replicates.add_row({static_cast<std::uint64_t>(r), seeds[a * options.replicates + r],
                                       static_cast<std::uint64_t>(options.n_grid[a]),
                                       values[a * options.replicates + r]});

    report.summary = Table({"n", "t", "mean", "median", "q10", "q90", "exceed_freq", "wilson_lo", "wilson_hi"});
    Table fit({"t", "points", "slope", "L_hat", "increasing_steps", "nondecreasing", "perm_p_value"});
    const double s = *kernel.bounded_diag;
    Philox perm_rng(stream_seed(options.master_seed, kPermutationStream));
    for (std::size_t ti = 0; ti < options.t_grid.size(); ++ti)
    {
        const double t = options.t_grid[ti];
        std::vector<double> p(grid);
        std::vector<std::uint8_t> pooled(grid * options.replicates);
        for (std::size_t a = 0; a < grid; ++a)
        {
            const std::span<const double> at_n(values.data() + a * options.replicates, options.replicates);
            std::size_t hits = 0;
            for (std::size_t r = 0; r < options.replicates; ++r)
            {
                const bool exceed = at_n[r] >= t;
                pooled[a * options.replicates + r] = exceed ? 1 : 0;
                hits += exceed ? 1 : 0;
            }
            p[a] = static_cast<double>(hits) / static_cast<double>(options.replicates);
            const Summary sm = summarize(at_n);
            const WilsonInterval w = wilson_interval(hits, options.replicates);
            report.summary.add_row({static_cast<std::uint64_t>(options.n_grid[a]), t, sm.mean, sm.median,
                                    sm.q10, sm.q90, p[a], w.lo, w.hi});
        }
        const double slope = exceedance_slope(options.n_grid, p);
        std::size_t points = 0;
        for (double v : p)
            points += (v > 0.0 && v < 1.0) ? 1 : 0;
        const double rate = s > 0.0 ? std::min(t * t / (s * s), t / s) : std::numeric_limits<double>::quiet_NaN();
        const double l_hat = slope > 0.0 ? rate / slope : std::numeric_limits<double>::quiet_NaN();
        const std::size_t steps = increasing_steps(p);
        const double p_value = permutation_p_value(options.n_grid, pooled, options.replicates, slope,
                                                   options.permutations, perm_rng);
        const bool monotone = neg_log_nondecreasing(p);
        fit.add_row({t, static_cast<std::uint64_t>(points), slope, l_hat, static_cast<std::uint64_t>(steps),
                     static_cast<std::int64_t>(monotone), p_value});
        if (ti == 0)
        {
            report.metrics["slope"] = slope;
            report.metrics["L_hat"] = l_hat;
            report.metrics["increasing_steps"] = static_cast<double>(steps);
            report.metrics["nondecreasing"] = monotone ? 1.0 : 0.0;
            report.metrics["perm_p_value"] = p_value;
        }
    }
    report.attachments.emplace_back("fit.csv", table_csv(fit));
    report.wall_time_seconds = seconds_since(started);
    return report;
}

double adjacent_lower_bound(std::span<const double> states, const KernelSpec& kernel)
{
    if (states.empty())
        throw InvalidArgument("adjacent_lower_bound: empty path");
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < states.size(); ++i)
    {
        const double h = kernel.h(states[i], states[i + 1]);
        if (std::isnan(h))
            return kInf;
        best = std::max(best, h);
    }
    return best / static_cast<double>(states.size());
}

ExperimentReport run_counterexample(const CounterexampleOptions& options)
{
    const auto started = Clock::now();
    check_grid(options.n_grid, 1, kCounterexampleMaxN);
    check_replicates(options.replicates);
    const ChainSpec chain = refresh_chain(0.5);
    const KernelSpec kernel = diagonal_kernel();
    const KernelSpec zero = zero_kernel();
    const std::size_t n_max = options.n_grid.back();

    std::vector<std::vector<std::vector<Cell>>> per_replicate(options.replicates);
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        const std::uint64_t seed = replicate_seed(options.master_seed, r);
        const RegenerationTrace trace = simulate(chain, n_max, options.start, seed);
        const auto states = trace.states();
        // Running maxima of h(X_i, X_{i+1}) over i <= n - 2.
        double best = 0.0;
        double best_zero = 0.0;
        std::size_t i = 0;
        for (std::size_t n : options.n_grid)
        {
            for (; i + 2 <= n; ++i)
            {
                const double h = kernel.h(states[i], states[i + 1]);
                best = std::isnan(h) ? kInf : std::max(best, h);
                best_zero = std::max(best_zero, zero.h(states[i], states[i + 1]));
            }
            const double scale = static_cast<double>(n);
            per_replicate[r].push_back({static_cast<std::uint64_t>(r), seed, static_cast<std::uint64_t>(n),
                                        best / scale, best_zero / scale});
        }
    });

    ExperimentReport report;
    report.experiment_id = "counterexample";
    report.replicates = Table({"replicate", "seed", "n", "lower_bound", "zero_kernel_bound"});
    merge_rows(report.replicates, per_replicate);
    report.summary = Table({"statistic", "n", "mean", "median", "q10", "q90"});
    const auto medians = add_statistic_rows(report.summary, report.replicates, "lower_bound", options.n_grid);
    add_statistic_rows(report.summary, report.replicates, "zero_kernel_bound", options.n_grid);
    double zero_max = 0.0;
    for (double v : report.replicates.column_values("zero_kernel_bound"))
        zero_max = std::max(zero_max, std::abs(v));
    report.metrics["median_increasing"] = strictly_increasing(medians) ? 1.0 : 0.0;
    report.metrics["median_at_max_n"] = medians.back();
    report.metrics["zero_kernel_max"] = zero_max;
    report.wall_time_seconds = seconds_since(started);
    return report;
}

ExperimentReport run_ustat(const KernelSpec& kernel, const ChainSpec& chain, const UstatOptions& options)
{
    const auto started = Clock::now();
    check_grid(options.n_grid, 2, std::size_t{1} << 24);
    check_replicates(options.replicates);
    if (options.t_grid.empty())
        throw InvalidArgument("t_grid must not be empty");
    validate(chain);
    const double target = pi2_integral(kernel, chain.stationary, options.quadrature_order);
    const std::size_t n_max = options.n_grid.back();

    std::vector<std::vector<std::vector<Cell>>> per_replicate(options.replicates);
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        const std::uint64_t seed = replicate_seed(options.master_seed, r);
        const RegenerationTrace trace = simulate(chain, n_max, options.start, seed);
        for (std::size_t n : options.n_grid)
        {
            const RegenerationTrace prefix = trace.prefix(n);
            const UStatResult u = u_stat(prefix, kernel, options.route);
            const auto remainder = ustat_decomposition(prefix, kernel);
            const double nan = std::numeric_limits<double>::quiet_NaN();
            per_replicate[r].push_back({static_cast<std::uint64_t>(r), seed, static_cast<std::uint64_t>(n),
                                        u.value, std::abs(u.value - target),
                                        remainder ? remainder->first : nan,
                                        remainder ? remainder->second : nan,
                                        remainder ? remainder->third : nan});
        }
    });

    ExperimentReport report;
    report.experiment_id = "ustat";
    report.replicates = Table({"replicate", "seed", "n", "u_stat", "abs_error", "remainder_1", "remainder_2",
                               "remainder_3"});
    merge_rows(report.replicates, per_replicate);
    report.summary = Table({"n", "t", "mean", "median", "q10", "q90", "exceed_freq"});
    for (double t : options.t_grid)
    {
        for (std::size_t n : options.n_grid)
        {
            const auto errors = select(report.replicates, "abs_error", "n", static_cast<double>(n));
            const Summary s = summarize(errors);
            const auto hits = std::count_if(errors.begin(), errors.end(), [t](double e) { return e >= t; });
            const double freq = static_cast<double>(hits) / static_cast<double>(errors.size());
            report.summary.add_row({static_cast<std::uint64_t>(n), t, s.mean, s.median, s.q10, s.q90, freq});
            if (t == options.t_grid.front() && n == n_max)
                report.metrics["exceed_freq_at_max_n"] = freq;
        }
    }
    report.metrics["target"] = target;
    report.wall_time_seconds = seconds_since(started);
    return report;
}

ExperimentReport run_spectrum(const KernelSpec& kernel, const ChainSpec& chain, const SpectrumOptions& options)
{
    const auto started = Clock::now();
    check_grid(options.n_grid, 1, kSpectrumMaxN);
    check_replicates(options.replicates);
    validate(chain);
    const std::vector<double> truth = true_spectrum(kernel, chain.stationary, options.quadrature_order);
    const std::size_t n_max = options.n_grid.back();

    std::vector<std::vector<std::vector<Cell>>> per_replicate(options.replicates);
    std::vector<std::pair<std::string, std::string>> attachments;
    parallel_for(options.replicates, options.jobs, [&](std::size_t r) {
        const std::uint64_t seed = replicate_seed(options.master_seed, r);
        const RegenerationTrace trace = simulate(chain, n_max, options.start, seed);
        for (std::size_t n : options.n_grid)
        {
            const auto states = trace.states().first(n);
            const auto tilde = gram_spectrum(states, kernel, GramVariant::with_diagonal, options.route);
            const auto zero = gram_spectrum(states, kernel, GramVariant::zero_diagonal,
                                            zero_diagonal_route(options.route));
            const bool divergent = tilde.divergent || zero.divergent;
            per_replicate[r].push_back({static_cast<std::uint64_t>(r), seed, static_cast<std::uint64_t>(n),
                                        delta2_or_inf(tilde, truth), delta2_or_inf(zero, truth),
                                        diagonal_removal_bound(states, kernel),
                                        std::max(tilde.top_lower_bound, zero.top_lower_bound),
                                        static_cast<std::int64_t>(divergent)});
            if (r == 0 && n == n_max)
            {
                std::ostringstream a, b, c, d, e;
                write_spectrum_csv(a, tilde.eigenvalues);
                write_spectrum_csv(b, zero.eigenvalues);
                write_spectrum_csv(c, truth);
                write_trace_csv(d, trace);
                write_regen_times_csv(e, trace);
                attachments = {{"spectrum_tilde.csv", a.str()},
                               {"spectrum_zero.csv", b.str()},
                               {"spectrum_true.csv", c.str()},
                               {"trace.csv", d.str()},
                               {"regen_times.csv", e.str()}};
            }
        }
    });

    ExperimentReport report;
    report.experiment_id = "spectrum";
    report.replicates = Table({"replicate", "seed", "n", "delta2_tilde", "delta2_zero", "diag_bound",
                               "top_lower_bound", "divergent"});
    merge_rows(report.replicates, per_replicate);
    report.summary = Table({"statistic", "n", "mean", "median", "q10", "q90"});
    add_statistic_rows(report.summary, report.replicates, "delta2_tilde", options.n_grid);
    add_statistic_rows(report.summary, report.replicates, "delta2_zero", options.n_grid);
    report.attachments = std::move(attachments);
    report.wall_time_seconds = seconds_since(started);
    return report;
}

void validate(const DriftParams& drift)
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw InvalidArgument(std::string("drift: ") + what);
    };
    require(drift.lambda > 0.0 && drift.lambda < 1.0, "lambda must lie in (0, 1)");
    require(drift.delta > 0.0 && drift.delta < 1.0, "delta must lie in (0, 1)");
    require(drift.b >= 0.0 && std::isfinite(drift.b), "b must be finite and nonnegative");
    require(drift.K >= 1.0 && std::isfinite(drift.K), "K must be finite and at least 1");
    require(drift.V_at_start >= 1.0 && std::isfinite(drift.V_at_start), "V_at_start must be finite and at least 1");
}

TauBound tau_bound(const DriftParams& drift)
{
    validate(drift);
    TauBound tau;
    const double q = std::log(6.0 / (2.0 - drift.delta));
    tau.first = 2.0 * std::log(q / q);
    const double reach = drift.b / (1.0 - drift.lambda) + drift.K;
    const double start_term = drift.in_C ? reach : drift.V_at_start;
    tau.second = std::max({std::log(start_term) / std::log(2.0), std::log(reach) / std::log(2.0), 1.0});
    tau.third = 1.0 / std::log(1.0 / (1.0 - drift.lambda));
    tau.value = tau.first * tau.second * tau.third;
    return tau;
}

ExperimentReport run_tau(const DriftParams& drift)
{
    const auto started = Clock::now();
    const TauBound tau = tau_bound(drift);
    ExperimentReport report;
    report.experiment_id = "tau";
    report.replicates = Table({"lambda", "b", "K", "delta", "V_at_start", "in_C", "first", "second", "third", "tau"});
    report.replicates.add_row({drift.lambda, drift.b, drift.K, drift.delta, drift.V_at_start,
                               static_cast<std::int64_t>(drift.in_C), tau.first, tau.second, tau.third,
                               tau.value});
    report.summary = Table({"tau"});
    report.summary.add_row({tau.value});
    report.metrics["tau"] = tau.value;
    report.wall_time_seconds = seconds_since(started);
    return report;
}

}  // namespace specmc
