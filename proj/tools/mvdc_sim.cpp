/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kRuntime = 4 };

void report(const char* kind, const std::exception& e)
{
    fmt::print(stderr, "mvdc-sim: {}: {}\n", kind, e.what());
}

}  // namespace

int main(int argc, char** argv)
{
    namespace cli = mvdc::cli;

    CLI::App app{"Reduced-order MVDC microgrid simulator with streaming voltage resilience metrics"};
    app.require_subcommand(1);

    cli::RunOptions run;
    cli::ReplayOptions replay;
    std::string scenario_path, out_path = "out", trace_path, replay_scenario;

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
        cmd->add_option("--out", out_path, "Output directory")->capture_default_str();
        cmd->add_option("--dt", run.dt, "Integration step in seconds, overrides the scenario");
        cmd->add_option("--decimate", run.decimate, "Write every n-th sample to the telemetry file");
        cmd->add_option("--set", run.overrides, "Override a scenario field, e.g. --set system.c_eq=0.04");
    };

    auto* simulate = app.add_subcommand("simulate", "Run one scenario");
    add_run_flags(simulate);
    auto* sweep = app.add_subcommand("sweep", "Run every value of the scenario's [sweep] table");
    add_run_flags(sweep);

    auto* rep = app.add_subcommand("replay", "Score a recorded (t, v_t) trace");
    rep->add_option("--trace", trace_path, "CSV with t and v_t columns")->required();
    rep->add_option("--out", out_path, "Output directory")->capture_default_str();
    rep->add_option("--vref", replay.v_ref, "Reference voltage in V (default 6000)");
    rep->add_option("--scenario", replay_scenario, "Take metric settings from this scenario");
    rep->add_option("--set", replay.overrides, "Override a metric setting, e.g. --set metrics.hold=0.1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (simulate->parsed()) {
            run.scenario = scenario_path;
            run.out = out_path;
            fmt::print("{}", cli::cmd_simulate(run).summary);
        } else if (sweep->parsed()) {
            run.scenario = scenario_path;
            run.out = out_path;
            const auto result = cli::cmd_sweep(run);
            fmt::print("{}", result.summary);
            if (!result.all_ok()) {
                fmt::print(stderr, "mvdc-sim: some sweep values failed\n");
                return kRuntime;
            }
        } else {
            replay.trace = trace_path;
            replay.out = out_path;
            if (!replay_scenario.empty()) replay.scenario = replay_scenario;
            fmt::print("{}", cli::cmd_replay(replay).summary);
        }
    } catch (const mvdc::IoError& e) {
        report("i/o error", e);
        return kUsage;
    } catch (const mvdc::ParseError& e) {
        report("parse error", e);
        return kParse;
    } catch (const mvdc::ValidationError& e) {
        report("validation error", e);
        return kValidation;
    } catch (const mvdc::NonMonotoneTime& e) {
        report("invalid trace", e);
        return kValidation;
    } catch (const std::exception& e) {
        report("runtime error", e);
        return kRuntime;
    }
    return kOk;
}
