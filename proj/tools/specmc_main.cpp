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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "specmc/config.hpp"
#include "specmc/error.hpp"
#include "specmc/runner.hpp"

namespace
{
struct Flags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::size_t jobs = 1;
};

specmc::RunConfig resolve(specmc::ExperimentKind kind, const Flags& flags)
{
    specmc::RunConfig config;
    if (flags.config.empty())
        config = specmc::default_config(kind);
    else if (std::filesystem::exists(flags.config))
        config = specmc::load_config(flags.config, kind);
    else if (flags.config.find('{') != std::string::npos)
        config = specmc::parse_config(flags.config, kind);  // inline JSON
    else
        throw specmc::IoError("config '" + flags.config + "' does not exist");
    if (flags.seed)
        config.master_seed = *flags.seed;
    if (flags.out)
    {
        if (flags.out->empty())
            throw specmc::ConfigError("output_dir", "must not be empty");
        config.output_dir = *flags.out;
    }
    return config;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectra of kernel matrices along Markov chain paths"};
    app.require_subcommand(1);
    Flags flags;
    const std::pair<specmc::ExperimentKind, const char*> commands[] = {
        {specmc::ExperimentKind::lln, "delta_2 convergence of empirical spectra along n"},
        {specmc::ExperimentKind::tail, "exceedance frequencies of delta_2 and their decay in n"},
        {specmc::ExperimentKind::counterexample, "top-eigenvalue lower bound for the diagonal kernel"},
        {specmc::ExperimentKind::spectrum, "one-shot empirical spectra with CSV dumps"},
        {specmc::ExperimentKind::ustat, "U-statistics along the path against pi x pi (h)"},
        {specmc::ExperimentKind::tau, "evaluate the drift-condition bound on tau"},
    };
    for (const auto& [kind, help] : commands)
    {
        CLI::App* sub = app.add_subcommand(specmc::to_string(kind), help);
        sub->add_option("--config", flags.config, "JSON config file or inline JSON text");
        sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
        sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", flags.out, "output directory (overrides the config)");
    }
    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try
    {
        const specmc::RunConfig config = resolve(specmc::parse_experiment(name), flags);
        return specmc::run_and_report(config, flags.jobs, std::cout, std::cerr);
    }
    catch (const std::exception& e)
    {
        std::cerr << specmc::error_record(e) << '\n';
        return specmc::exit_code(e);
    }
}
