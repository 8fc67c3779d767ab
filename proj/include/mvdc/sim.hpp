/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "mvdc/plant.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace mvdc {

struct LoadStep {
    double p_cpl;  // W
    bool operator==(const LoadStep&) const = default;
};
struct PulseStart {
    double p_ppl;  // W
    bool operator==(const PulseStart&) const = default;
};
struct PulseEnd {
    bool operator==(const PulseEnd&) const = default;
};
struct UnitTrip {
    std::string unit;
    bool operator==(const UnitTrip&) const = default;
};
struct UnitRestore {
    std::string unit;
    bool operator==(const UnitRestore&) const = default;
};

using EventAction = std::variant<LoadStep, PulseStart, PulseEnd, UnitTrip, UnitRestore>;

struct Event {
    double at = 0.0;  // s
    EventAction action;
    bool operator==(const Event&) const = default;
};

std::string describe(const Event& event);

/// One grid point of the telemetry stream.
struct Sample {
    std::int64_t step = 0;
    double t = 0.0;
    PlantState state;
    double p_cpl = 0.0;
    double p_ppl = 0.0;
};

/// Applies a disturbance to the plant. Trips zero the branch current
/// instantly; restores bring the unit back online at zero current.
/// Throws InvalidEvent for unknown ids or redundant trips/restores.
void apply_event(SystemParams& params, PlantState& state, const Event& event);

/// One classical fourth-order Runge-Kutta step.
PlantState rk4_step(const PlantState& state, const SystemParams& params, double dt);

/// Number of grid points floor(horizon/dt) + 1, tolerant of the rounding in
/// horizon/dt for horizons that are whole multiples of dt.
std::int64_t grid_length(double horizon, double dt);

/// First grid index k with k*dt >= at.
std::int64_t event_step(double at, double dt);

struct RunResult {
    std::int64_t samples = 0;
    std::size_t events_applied = 0;
};

using SampleSink = std::function<void(const Sample&)>;

/// Fixed-step simulation from t = 0 to horizon. Events fire at the first grid
/// point at or after their timestamp, before that point is emitted and before
/// the step that leaves it. Plant errors are rethrown as SimulationError
/// carrying the grid time.
class Simulator {
public:
    Simulator(SystemParams params, PlantState initial, std::vector<Event> events, double dt, double horizon);

    RunResult run(const SampleSink& sink);

    [[nodiscard]] const SystemParams& params() const { return params_; }
    [[nodiscard]] const PlantState& state() const { return state_; }

private:
    SystemParams params_;
    PlantState state_;
    std::vector<Event> events_;
    double dt_;
    double horizon_;
};

}  // namespace mvdc
