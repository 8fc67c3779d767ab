/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mvdc {

std::string_view to_string(UnitKind kind)
{
    switch (kind) {
    case UnitKind::SG: return "SG";
    case UnitKind::BESS: return "BESS";
    case UnitKind::SC: return "SC";
    }
    return "?";
}

std::optional<UnitKind> unit_kind_from_string(std::string_view text)
{
    if (text == "SG") return UnitKind::SG;
    if (text == "BESS") return UnitKind::BESS;
    if (text == "SC") return UnitKind::SC;
    return std::nullopt;
}

std::optional<std::size_t> SystemParams::find_unit(std::string_view id) const
{
    for (std::size_t k = 0; k < units.size(); ++k) {
        if (units[k].id == id) return k;
    }
    return std::nullopt;
}

std::size_t SystemParams::sc_count() const
{
    return static_cast<std::size_t>(std::count_if(units.begin(), units.end(),
        [](const UnitParams& u) { return u.kind == UnitKind::SC; }));
}

double equivalent_droop(const SystemParams& params)
{
    double conductance = 0.0;
    for (const auto& unit : params.units) {
        if (unit.online && unit.is_droop_source()) {
            conductance += 1.0 / unit.resistance;
        }
    }
    if (conductance <= 0.0) {
        throw NoOnlineSources();
    }
    return 1.0 / conductance;
}

double droop_equilibrium(double v_ref, double r_eq, double p_load)
{
    if (p_load < 0.0) {
        throw NoEquilibrium("negative load power");
    }
    const double disc = v_ref * v_ref - 4.0 * r_eq * p_load;
    if (disc < 0.0) {
        throw NoEquilibrium("load of " + std::to_string(p_load) +
                            " W exceeds the deliverable maximum " +
                            std::to_string(v_ref * v_ref / (4.0 * r_eq)) + " W");
    }
    // v_ref + sqrt(disc) never cancels, so this form keeps full precision.
    return 0.5 * (v_ref + std::sqrt(disc));
}

double droop_equilibrium(const SystemParams& params, double p_load)
{
    return droop_equilibrium(params.v_ref, equivalent_droop(params), p_load);
}

double secondary_delta(const PlantState& state, const SystemParams& params)
{
    return params.kp * (params.v_ref - state.v_t) + params.ki * state.sigma;
}

PlantState derivatives(const PlantState& state, const SystemParams& params)
{
    if (!(state.v_t > params.floor_voltage())) {
        throw VoltageFloor("bus voltage " + std::to_string(state.v_t) +
                           " V at or below floor " +
                           std::to_string(params.floor_voltage()) + " V");
    }

    PlantState d = zero_like(state);
    const double delta_v = secondary_delta(state, params);

    double injected = 0.0;
    std::size_t sc = 0;
    for (std::size_t k = 0; k < params.units.size(); ++k) {
        const auto& unit = params.units[k];
        const bool is_sc = unit.kind == UnitKind::SC;
        const std::size_t sc_index = sc;
        if (is_sc) ++sc;
        if (!unit.online) continue;

        const double i = state.current[k];
        injected += i;
        if (is_sc) {
            d.current[k] = (params.v_ref - unit.resistance * i - state.v_cap[sc_index] - state.v_t) /
                           unit.inductance;
            d.v_cap[sc_index] = i / *unit.capacitance;
        } else {
            d.current[k] = (params.v_ref - unit.resistance * i - state.v_t + delta_v) / unit.inductance;
        }
    }

    d.v_t = (injected - params.p_cpl / state.v_t - params.p_ppl / state.v_t) / params.c_eq;
    d.sigma = params.v_ref - state.v_t;
    return d;
}

PlantState equilibrium_state(const SystemParams& params)
{
    const double r_eq = equivalent_droop(params);
    const double load = params.total_load();

    PlantState s;
    s.current.assign(params.units.size(), 0.0);
    s.v_cap.assign(params.sc_count(), 0.0);

    double drive = 0.0;  // v_ref - v_t + delta_v seen by every droop source
    if (params.ki > 0.0) {
        s.v_t = params.v_ref;
        drive = r_eq * load / params.v_ref;
        s.sigma = drive / params.ki;
    } else {
        s.v_t = droop_equilibrium(params.v_ref, r_eq / (1.0 + params.kp), load);
        drive = (1.0 + params.kp) * (params.v_ref - s.v_t);
        s.sigma = 0.0;
    }

    for (std::size_t k = 0; k < params.units.size(); ++k) {
        const auto& unit = params.units[k];
        if (unit.online && unit.is_droop_source()) {
            s.current[k] = drive / unit.resistance;
        }
    }
    std::fill(s.v_cap.begin(), s.v_cap.end(), params.v_ref - s.v_t);
    return s;
}

std::optional<std::string> check_stability_guard(const SystemParams& params)
{
    const double load = params.total_load();
    if (load <= 0.0) return std::nullopt;
    const double r_eq = equivalent_droop(params);
    double v = 0.0;
    try {
        v = droop_equilibrium(params.v_ref, r_eq, load);
    } catch (const NoEquilibrium& e) {
        return std::string("no droop equilibrium: ") + e.what();
    }
    const double limit = v * v / load;
    if (!(r_eq < limit)) {
        return "R_eq = " + std::to_string(r_eq) + " Ohm violates the constant-power-load limit " +
               std::to_string(limit) + " Ohm at " + std::to_string(load) + " W";
    }
    return std::nullopt;
}

std::vector<std::string> validate_params(const SystemParams& params)
{
    std::vector<std::string> problems;
    if (!(params.v_ref > 0.0)) problems.emplace_back("system.v_ref must be > 0");
    if (!(params.c_eq > 0.0)) problems.emplace_back("system.c_eq must be > 0");
    if (!(params.voltage_floor > 0.0 && params.voltage_floor < 1.0)) {
        problems.emplace_back("system.voltage_floor must lie in (0, 1)");
    }
    if (params.p_cpl < 0.0) problems.emplace_back("system.p_cpl must be >= 0");
    if (params.p_ppl < 0.0) problems.emplace_back("system.p_ppl must be >= 0");
    if (params.kp < 0.0) problems.emplace_back("secondary.kp must be >= 0");
    if (params.ki < 0.0) problems.emplace_back("secondary.ki must be >= 0");

    std::set<std::string> ids;
    bool any_source = false;
    for (const auto& unit : params.units) {
        const std::string where = "unit '" + unit.id + "'";
        if (unit.id.empty()) problems.emplace_back("unit with empty id");
        if (!ids.insert(unit.id).second) problems.emplace_back(where + ": duplicate id");
        if (!(unit.inductance > 0.0)) problems.emplace_back(where + ": inductance must be > 0");
        if (!(unit.resistance > 0.0)) problems.emplace_back(where + ": resistance must be > 0");
        if (unit.kind == UnitKind::SC) {
            if (!unit.capacitance || !(*unit.capacitance > 0.0)) {
                problems.emplace_back(where + ": SC unit needs capacitance > 0");
            }
        } else if (unit.capacitance) {
            problems.emplace_back(where + ": capacitance is only valid for SC units");
        }
        any_source = any_source || (unit.online && unit.is_droop_source());
    }
    if (!any_source) problems.emplace_back("at least one SG or BESS unit must be online");
    return problems;
}

PlantState zero_like(const PlantState& state)
{
    PlantState z;
    z.current.assign(state.current.size(), 0.0);
    z.v_cap.assign(state.v_cap.size(), 0.0);
    return z;
}

}  // namespace mvdc
