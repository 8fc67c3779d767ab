/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

// File-level entry points behind the mvdc-sim tool. Every command writes
// telemetry.csv and reports.json into its output directory.

#include "mvdc/metrics.hpp"
#include "mvdc/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mvdc::cli {

namespace fs = std::filesystem;

struct RunOutputs {
    fs::path telemetry;
    fs::path reports;
    std::string summary;
    std::vector<EventReport> events;  // completed events, then any unresolved one
    std::int64_t samples = 0;         // full-rate samples seen by the metrics
    std::int64_t rows = 0;            // telemetry rows written
};

struct RunOptions {
    fs::path scenario;
    fs::path out;
    std::optional<double> dt;
    std::optional<int> decimate;
    std::vector<std::string> overrides;  // "path=value"
};

struct ReplayOptions {
    fs::path trace;
    fs::path out;
    std::optional<fs::path> scenario;  // source of metric settings, optional
    std::optional<double> v_ref;
    std::vector<std::string> overrides;
};

struct SweepRun {
    double value = 0.0;
    std::optional<RunOutputs> outputs;
    std::string error;  // set when the run failed
};

struct SweepOutputs {
    std::vector<SweepRun> runs;
    fs::path summary_csv;
    std::string summary;
    [[nodiscard]] bool all_ok() const;
};

/// Loads the scenario and applies overrides, then --dt and --decimate, then validates.
Scenario prepare_scenario(const RunOptions& options);

/// Simulates a validated scenario into out_dir.
RunOutputs run_scenario(const Scenario& scenario, const fs::path& out_dir);

RunOutputs cmd_simulate(const RunOptions& options);

/// One run per sweep value in out/<index>_<value>/ plus out/sweep_summary.csv.
/// Values run concurrently; a failed value is recorded and the rest continue.
SweepOutputs cmd_sweep(const RunOptions& options);

/// Scores a recorded (t, v_t) trace with the metric engine only.
RunOutputs cmd_replay(const ReplayOptions& options);

/// Comma-separated table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name, if present.
    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
    /// Column parsed as doubles; throws ParseError naming the row on bad cells.
    [[nodiscard]] std::vector<double> numbers(std::string_view name) const;
};

CsvTable read_csv(const fs::path& path);

/// Telemetry column name for a unit current: "i_" + id without underscores.
std::string current_column(std::string_view unit_id);

}  // namespace mvdc::cli
