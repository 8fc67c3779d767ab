/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "mvdc/metrics.hpp"
#include "mvdc/plant.hpp"
#include "mvdc/sim.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvdc {

struct SweepSpec {
    std::string parameter;  // override path, e.g. "system.c_eq"
    std::vector<double> values;
    bool operator==(const SweepSpec&) const = default;
};

/// Everything needed for a reproducible run.
struct Scenario {
    SystemParams params;
    std::vector<Event> events;
    double horizon = 12.0;      // s
    double dt = 50e-6;          // s
    MetricConfig metrics;       // v_ref is taken from params
    int decimate = 1;           // telemetry output only
    std::optional<SweepSpec> sweep;

    /// Metric settings with v_ref bound to the plant reference.
    [[nodiscard]] MetricConfig metric_config() const;

    bool operator==(const Scenario&) const = default;
};

/// Default plant: 2 SG + 2 BESS + 2 SC on a 6 kV bus, 10 MW constant-power load.
SystemParams default_params();

/// Defaults with no events over a 12 s horizon.
Scenario default_scenario();

/// Load step 10 -> 15 MW at 6 s, trip of sg_b at 10 s, 12 s horizon.
Scenario paper_scenario();

/// Strict parse: unknown tables or keys and wrong value types raise
/// ParseError; invariant violations raise ValidationError listing all of them.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(serialize(s)) == s.
std::string serialize(const Scenario& scenario);

/// Every violated invariant, empty when the scenario is runnable.
std::vector<std::string> validate(const Scenario& scenario);
void validate_or_throw(const Scenario& scenario);
/// Range checks on metric settings alone, including v_ref > 0.
std::vector<std::string> validate_metrics(const MetricConfig& config);

/// Sets one field by path: "system.<key>", "secondary.<key>", "metrics.<key>",
/// or "units.<id>.<key>". The literal uses scenario-file syntax.
void apply_override(Scenario& scenario, std::string_view path, std::string_view literal);
/// "path=literal" form used by --set.
void apply_override(Scenario& scenario, std::string_view assignment);

/// Copy of the scenario with the sweep parameter set to value and the sweep removed.
Scenario sweep_variant(const Scenario& scenario, double value);

/// SHA-256 of the canonical text, hex encoded.
std::string scenario_digest(const Scenario& scenario);

/// Hex-encoded SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace mvdc
