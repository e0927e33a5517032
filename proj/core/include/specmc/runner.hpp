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

#ifndef SPECMC_RUNNER_HPP
#define SPECMC_RUNNER_HPP

#include <cstddef>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "specmc/config.hpp"
#include "specmc/experiments.hpp"

namespace specmc
{

/// Builds the kernel and chain from `config` and runs its experiment.
ExperimentReport execute(const RunConfig& config, std::size_t jobs = 1);

struct RunOutcome
{
    std::filesystem::path run_dir;
    ExperimentReport report;
};

/**
 * Runs the experiment and persists it under
 * <output_dir>/<experiment>-s<seed>[-k]/: config.snapshot, replicates.csv,
 * summary.csv and any attachments. Files are written with a `.partial`
 * suffix and renamed once all of them are complete. The run directory is
 * created before any computation, so an unwritable output_dir fails fast
 * and leaves nothing behind.
 */
RunOutcome run(const RunConfig& config, std::size_t jobs = 1);

/// Writes the report files into an existing directory.
void write_report(const ExperimentReport& report, const std::filesystem::path& run_dir);

/// One-line JSON error record: {"status":"error","kind":...,"key":...,"message":...}.
std::string error_record(const std::exception& error);

/// Process exit status for an error: 2 configuration, 3 I/O, 4 numerical, 1 otherwise.
int exit_code(const std::exception& error);

/// Runs and reports: a JSON status line on `out`, or an error record on `err`.
int run_and_report(const RunConfig& config, std::size_t jobs, std::ostream& out, std::ostream& err);

}  // namespace specmc

#endif  // SPECMC_RUNNER_HPP
