/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

// Reduced-order model of a single-bus MVDC microgrid: droop-controlled
// generators (SG) and batteries (BESS), supercapacitor branches (SC) with a
// series capacitor, a DC-link capacitance and constant/pulsed power loads.

#include "mvdc/errors.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvdc {

enum class UnitKind { SG, BESS, SC };

std::string_view to_string(UnitKind kind);
std::optional<UnitKind> unit_kind_from_string(std::string_view text);

struct UnitParams {
    std::string id;
    UnitKind kind = UnitKind::SG;
    double inductance = 0.0;                // H
    double resistance = 0.0;                // Ohm
    std::optional<double> capacitance;      // F, SC only
    bool online = true;

    /// SG and BESS units receive the secondary correction and set the droop.
    [[nodiscard]] bool is_droop_source() const { return kind != UnitKind::SC; }

    bool operator==(const UnitParams&) const = default;
};

struct SystemParams {
    double v_ref = 6000.0;          // V
    double c_eq = 20e-3;            // F
    std::vector<UnitParams> units;
    double kp = 0.5;
    double ki = 200.0;              // 1/s
    double p_cpl = 10e6;            // W
    double p_ppl = 0.0;             // W
    double voltage_floor = 0.2;     // fraction of v_ref

    [[nodiscard]] double total_load() const { return p_cpl + p_ppl; }
    [[nodiscard]] double floor_voltage() const { return voltage_floor * v_ref; }
    /// Index of the unit with the given id, if any.
    [[nodiscard]] std::optional<std::size_t> find_unit(std::string_view id) const;
    /// Number of SC units (the length of PlantState::v_cap).
    [[nodiscard]] std::size_t sc_count() const;

    bool operator==(const SystemParams&) const = default;
};

struct PlantState {
    double v_t = 0.0;               // bus voltage, V
    std::vector<double> current;    // per unit, A (ordered as SystemParams::units)
    std::vector<double> v_cap;      // per SC unit, V
    double sigma = 0.0;             // secondary integrator, V*s

    bool operator==(const PlantState&) const = default;
};

/// Parallel combination of R_i over online SG/BESS units.
/// Throws NoOnlineSources if none is online.
double equivalent_droop(const SystemParams& params);

/// High-voltage root of v^2 - v_ref*v + r_eq*p_load = 0.
/// Throws NoEquilibrium when the load exceeds the deliverable maximum.
double droop_equilibrium(double v_ref, double r_eq, double p_load);
double droop_equilibrium(const SystemParams& params, double p_load);

/// Centralized PI correction K_p*(v_ref - v_t) + K_i*sigma.
double secondary_delta(const PlantState& state, const SystemParams& params);

/// Right-hand side of the plant ODE. Throws VoltageFloor when v_t is at or
/// below the configured floor.
PlantState derivatives(const PlantState& state, const SystemParams& params);

/// Steady operating point for the current load and topology. With K_i > 0
/// the secondary restores v_t = v_ref exactly; otherwise the bus settles on
/// the droop line with the proportional gain folded into R_eq.
PlantState equilibrium_state(const SystemParams& params);

/// Small-signal condition for a constant-power load: R_eq < v_t^2 / P at the
/// droop equilibrium. Returns a message describing the violation, if any.
std::optional<std::string> check_stability_guard(const SystemParams& params);

/// Structural checks on the parameter set (signs, SC capacitance, ids).
std::vector<std::string> validate_params(const SystemParams& params);

PlantState zero_like(const PlantState& state);

}  // namespace mvdc
