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

#ifndef SPECMC_CONFIG_HPP
#define SPECMC_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "specmc/chain.hpp"
#include "specmc/experiments.hpp"
#include "specmc/kernel.hpp"

namespace specmc
{

enum class ExperimentKind
{
    lln,
    tail,
    counterexample,
    spectrum,
    ustat,
    tau,
};

const char* to_string(ExperimentKind kind) noexcept;
/// Throws ConfigError on an unknown name.
ExperimentKind parse_experiment(std::string_view name);

/**
 * Validated run configuration. `kernel` and `chain` hold the normalized
 * JSON descriptions (every parameter explicit); fields an experiment does
 * not use keep their defaults.
 */
struct RunConfig
{
    ExperimentKind experiment = ExperimentKind::lln;
    nlohmann::json kernel;
    nlohmann::json chain;
    std::optional<double> start = 0.5;  // empty: stationary start
    std::vector<std::size_t> n_grid;
    std::vector<double> t_grid;
    std::size_t replicates = 50;
    std::uint64_t master_seed = 1;
    std::string output_dir = "runs";
    std::size_t quadrature_order = 64;
    std::string spectrum_route = "auto";
    std::string ustat_route = "auto";
    std::size_t permutations = 999;
    DriftParams drift;

    bool operator==(const RunConfig&) const = default;
};

/// Defaults of an experiment, as produced by parsing {"experiment": name}.
RunConfig default_config(ExperimentKind kind);

/**
 * Parses JSON text. Unknown keys and out-of-range values throw ConfigError
 * naming the dotted key path (e.g. `chain.minorization.delta`). When
 * `expected` is given, a missing `experiment` key defaults to it and a
 * different one is an error.
 */
RunConfig parse_config(std::string_view text, std::optional<ExperimentKind> expected = {});
/// Reads and parses a file; IoError when it cannot be read.
RunConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected = {});

/// Canonical JSON with every default filled; parse_config(snapshot(c)) == c.
nlohmann::json to_json(const RunConfig& config);
std::string snapshot(const RunConfig& config);

KernelSpec make_kernel(const nlohmann::json& kernel);
ChainSpec make_chain(const nlohmann::json& chain);

}  // namespace specmc

#endif  // SPECMC_CONFIG_HPP
