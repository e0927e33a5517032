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

#include "specmc/runner.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <ostream>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "specmc/error.hpp"
#include "specmc/numeric.hpp"

namespace specmc
{

namespace fs = std::filesystem;

ExperimentReport execute(const RunConfig& config, std::size_t jobs)
{
    const Start start = config.start ? Start::at(*config.start) : Start::stationary();
    ExperimentReport report;
    switch (config.experiment)
    {
    case ExperimentKind::lln: {
        LlnOptions o;
        o.n_grid = config.n_grid;
        o.replicates = config.replicates;
        o.master_seed = config.master_seed;
        o.start = start;
        o.route = parse_spectrum_route(config.spectrum_route);
        o.quadrature_order = config.quadrature_order;
        o.jobs = jobs;
        report = run_lln(make_kernel(config.kernel), make_chain(config.chain), o);
        break;
    }
    case ExperimentKind::tail: {
        TailOptions o;
        o.t_grid = config.t_grid;
        o.n_grid = config.n_grid;
        o.replicates = config.replicates;
        o.master_seed = config.master_seed;
        o.start = start;
        o.route = parse_spectrum_route(config.spectrum_route);
        o.quadrature_order = config.quadrature_order;
        o.permutations = config.permutations;
        o.jobs = jobs;
        report = run_tail(make_kernel(config.kernel), make_chain(config.chain), o);
        break;
    }
    case ExperimentKind::counterexample: {
        CounterexampleOptions o;
        o.n_grid = config.n_grid;
        o.replicates = config.replicates;
        o.master_seed = config.master_seed;
        o.start = start;
        o.jobs = jobs;
        report = run_counterexample(o);
        break;
    }
    case ExperimentKind::spectrum: {
        SpectrumOptions o;
        o.n_grid = config.n_grid;
        o.replicates = config.replicates;
        o.master_seed = config.master_seed;
        o.start = start;
        o.route = parse_spectrum_route(config.spectrum_route);
        o.quadrature_order = config.quadrature_order;
        o.jobs = jobs;
        report = run_spectrum(make_kernel(config.kernel), make_chain(config.chain), o);
        break;
    }
    case ExperimentKind::ustat: {
        UstatOptions o;
        o.n_grid = config.n_grid;
        o.t_grid = config.t_grid;
        o.replicates = config.replicates;
        o.master_seed = config.master_seed;
        o.start = start;
        o.route = parse_ustat_route(config.ustat_route);
        o.quadrature_order = config.quadrature_order;
        o.jobs = jobs;
        report = run_ustat(make_kernel(config.kernel), make_chain(config.chain), o);
        break;
    }
    case ExperimentKind::tau:
        report = run_tau(config.drift);
        break;
    }
    report.config_snapshot = snapshot(config);
    return report;
}

namespace
{
fs::path fresh_run_dir(const RunConfig& config)
{
    const fs::path base(config.output_dir);
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec || !fs::is_directory(base))
        throw IoError("cannot create output directory '" + base.string() + "'" +
                      (ec ? ": " + ec.message() : std::string()));
    const std::string stem = std::string(to_string(config.experiment)) + "-s" + std::to_string(config.master_seed);
    for (std::size_t k = 1;; ++k)
    {
        const fs::path candidate = base / (k == 1 ? stem : stem + "-" + std::to_string(k));
        if (fs::create_directory(candidate, ec))
            return candidate;
        if (ec)
            throw IoError("cannot create run directory '" + candidate.string() + "': " + ec.message());
    }
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

std::string csv(const Table& table)
{
    std::ostringstream out;
    table.write_csv(out);
    return out.str();
}
}  // namespace

void write_report(const ExperimentReport& report, const fs::path& run_dir)
{
    std::vector<std::pair<std::string, std::string>> files{{"config.snapshot", report.config_snapshot},
                                                           {"replicates.csv", csv(report.replicates)},
                                                           {"summary.csv", csv(report.summary)}};
    files.insert(files.end(), report.attachments.begin(), report.attachments.end());
    // Everything lands as .partial first; a failure leaves those marked files behind.
    for (const auto& [name, content] : files)
        write_file(run_dir / (name + ".partial"), content);
    for (const auto& [name, content] : files)
    {
        std::error_code ec;
        fs::rename(run_dir / (name + ".partial"), run_dir / name, ec);
        if (ec)
            throw IoError("cannot finalize '" + (run_dir / name).string() + "': " + ec.message());
    }
}

RunOutcome run(const RunConfig& config, std::size_t jobs)
{
    RunOutcome outcome;
    outcome.run_dir = fresh_run_dir(config);
    try
    {
        outcome.report = execute(config, jobs);
    }
    catch (...)
    {
        std::error_code ec;
        fs::remove(outcome.run_dir, ec);
        throw;
    }
    write_report(outcome.report, outcome.run_dir);
    return outcome;
}

std::string error_record(const std::exception& error)
{
    nlohmann::json record{{"status", "error"}, {"message", error.what()}};
    if (const auto* e = dynamic_cast<const Error*>(&error))
        record["kind"] = e->kind();
    else
        record["kind"] = "internal";
    if (const auto* e = dynamic_cast<const ConfigError*>(&error))
        record["key"] = e->key();
    return record.dump();
}

int exit_code(const std::exception& error)
{
    if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const InvalidArgument*>(&error))
        return 2;
    if (dynamic_cast<const IoError*>(&error))
        return 3;
    if (dynamic_cast<const Error*>(&error))
        return 4;
    return 1;
}

int run_and_report(const RunConfig& config, std::size_t jobs, std::ostream& out, std::ostream& err)
{
    try
    {
        const RunOutcome outcome = run(config, jobs);
        nlohmann::json status{{"status", "ok"},
                              {"experiment", outcome.report.experiment_id},
                              {"run_dir", outcome.run_dir.string()},
                              {"wall_time_seconds", outcome.report.wall_time_seconds}};
        for (const auto& [name, value] : outcome.report.metrics)
            status["metrics"][name] = std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(format_double(value));
        out << status.dump() << '\n';
        return 0;
    }
    catch (const std::exception& e)
    {
        err << error_record(e) << '\n';
        return exit_code(e);
    }
}

}  // namespace specmc
