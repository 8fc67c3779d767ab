/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvdc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// out = base + h * slope
void offset(PlantState& out, const PlantState& base, double h, const PlantState& slope)
{
    out.v_t = base.v_t + h * slope.v_t;
    out.sigma = base.sigma + h * slope.sigma;
    out.current.resize(base.current.size());
    out.v_cap.resize(base.v_cap.size());
    for (std::size_t k = 0; k < base.current.size(); ++k) {
        out.current[k] = base.current[k] + h * slope.current[k];
    }
    for (std::size_t k = 0; k < base.v_cap.size(); ++k) {
        out.v_cap[k] = base.v_cap[k] + h * slope.v_cap[k];
    }
}

std::size_t unit_index(const SystemParams& params, const std::string& id)
{
    auto idx = params.find_unit(id);
    if (!idx) {
        throw InvalidEvent("unknown unit '" + id + "'");
    }
    return *idx;
}

}  // namespace

std::string describe(const Event& event)
{
    std::ostringstream os;
    os << "t=" << event.at << " s ";
    std::visit(overloaded{
                   [&](const LoadStep& e) { os << "load_step p_cpl=" << e.p_cpl; },
                   [&](const PulseStart& e) { os << "pulse_start p_ppl=" << e.p_ppl; },
                   [&](const PulseEnd&) { os << "pulse_end"; },
                   [&](const UnitTrip& e) { os << "unit_trip " << e.unit; },
                   [&](const UnitRestore& e) { os << "unit_restore " << e.unit; },
               },
               event.action);
    return os.str();
}

void apply_event(SystemParams& params, PlantState& state, const Event& event)
{
    std::visit(overloaded{
                   [&](const LoadStep& e) { params.p_cpl = e.p_cpl; },
                   [&](const PulseStart& e) { params.p_ppl = e.p_ppl; },
                   [&](const PulseEnd&) { params.p_ppl = 0.0; },
                   [&](const UnitTrip& e) {
                       const auto k = unit_index(params, e.unit);
                       if (!params.units[k].online) {
                           throw InvalidEvent("unit '" + e.unit + "' is already offline");
                       }
                       params.units[k].online = false;
                       state.current[k] = 0.0;
                   },
                   [&](const UnitRestore& e) {
                       const auto k = unit_index(params, e.unit);
                       if (params.units[k].online) {
                           throw InvalidEvent("unit '" + e.unit + "' is already online");
                       }
                       params.units[k].online = true;
                       state.current[k] = 0.0;
                   },
               },
               event.action);
}

PlantState rk4_step(const PlantState& state, const SystemParams& params, double dt)
{
    const PlantState k1 = derivatives(state, params);
    PlantState probe;
    offset(probe, state, 0.5 * dt, k1);
    const PlantState k2 = derivatives(probe, params);
    offset(probe, state, 0.5 * dt, k2);
    const PlantState k3 = derivatives(probe, params);
    offset(probe, state, dt, k3);
    const PlantState k4 = derivatives(probe, params);

    const double w = dt / 6.0;
    PlantState next = state;
    next.v_t += w * (k1.v_t + 2.0 * k2.v_t + 2.0 * k3.v_t + k4.v_t);
    next.sigma += w * (k1.sigma + 2.0 * k2.sigma + 2.0 * k3.sigma + k4.sigma);
    for (std::size_t k = 0; k < next.current.size(); ++k) {
        next.current[k] += w * (k1.current[k] + 2.0 * k2.current[k] + 2.0 * k3.current[k] + k4.current[k]);
    }
    for (std::size_t k = 0; k < next.v_cap.size(); ++k) {
        next.v_cap[k] += w * (k1.v_cap[k] + 2.0 * k2.v_cap[k] + 2.0 * k3.v_cap[k] + k4.v_cap[k]);
    }
    return next;
}

std::int64_t grid_length(double horizon, double dt)
{
    const double ratio = horizon / dt;
    const double nearest = std::round(ratio);
    const double steps = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::floor(ratio);
    return static_cast<std::int64_t>(steps) + 1;
}

std::int64_t event_step(double at, double dt)
{
    const double ratio = at / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::ceil(ratio));
}

Simulator::Simulator(SystemParams params, PlantState initial, std::vector<Event> events, double dt, double horizon)
    : params_(std::move(params)), state_(std::move(initial)), events_(std::move(events)), dt_(dt), horizon_(horizon)
{
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.at < b.at; });
}

RunResult Simulator::run(const SampleSink& sink)
{
    RunResult result;
    const std::int64_t n = grid_length(horizon_, dt_);
    std::size_t next_event = 0;

    Sample sample;
    for (std::int64_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt_;
        try {
            while (next_event < events_.size() && event_step(events_[next_event].at, dt_) <= k) {
                apply_event(params_, state_, events_[next_event]);
                ++next_event;
                ++result.events_applied;
            }

            sample.step = k;
            sample.t = t;
            sample.state = state_;
            sample.p_cpl = params_.p_cpl;
            sample.p_ppl = params_.p_ppl;
            sink(sample);
            ++result.samples;

            if (k + 1 < n) {
                state_ = rk4_step(state_, params_, dt_);
            }
        } catch (const SimulationError&) {
            throw;
        } catch (const Error& e) {
            throw SimulationError(t, e.what());
        }
    }
    return result;
}

}  // namespace mvdc
