/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/scenario.hpp"

#include "mvdc/config_text.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mvdc {

namespace {

using config::Value;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double as_number(const Value& v, std::string_view key, int line)
{
    if (const auto* d = std::get_if<double>(&v)) return *d;
    throw ParseError(line, "field '" + std::string(key) + "' expects a number, got " + config::type_name(v));
}

std::string as_string(const Value& v, std::string_view key, int line)
{
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw ParseError(line, "field '" + std::string(key) + "' expects a string, got " + config::type_name(v));
}

bool as_bool(const Value& v, std::string_view key, int line)
{
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    throw ParseError(line, "field '" + std::string(key) + "' expects true/false, got " + config::type_name(v));
}

std::vector<double> as_array(const Value& v, std::string_view key, int line)
{
    if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
    throw ParseError(line, "field '" + std::string(key) + "' expects an array of numbers, got " +
                               config::type_name(v));
}

[[noreturn]] void unknown_key(std::string_view table, std::string_view key, int line)
{
    throw ParseError(line, "unknown key '" + std::string(key) + "' in [" + std::string(table) + "]");
}

void set_system(Scenario& s, std::string_view key, const Value& v, int line)
{
    if (key == "v_ref") s.params.v_ref = as_number(v, key, line);
    else if (key == "c_eq") s.params.c_eq = as_number(v, key, line);
    else if (key == "p_cpl") s.params.p_cpl = as_number(v, key, line);
    else if (key == "p_ppl") s.params.p_ppl = as_number(v, key, line);
    else if (key == "voltage_floor") s.params.voltage_floor = as_number(v, key, line);
    else if (key == "horizon") s.horizon = as_number(v, key, line);
    else if (key == "dt") s.dt = as_number(v, key, line);
    else if (key == "decimate") {
        const double d = as_number(v, key, line);
        if (d != std::floor(d) || std::abs(d) > 1e9) {
            throw ParseError(line, "field 'decimate' expects an integer");
        }
        s.decimate = static_cast<int>(d);
    } else unknown_key("system", key, line);
}

void set_secondary(Scenario& s, std::string_view key, const Value& v, int line)
{
    if (key == "kp") s.params.kp = as_number(v, key, line);
    else if (key == "ki") s.params.ki = as_number(v, key, line);
    else unknown_key("secondary", key, line);
}

void set_metrics(Scenario& s, std::string_view key, const Value& v, int line)
{
    if (key == "deadband") s.metrics.deadband = as_number(v, key, line);
    else if (key == "restore_band") s.metrics.restore_band = as_number(v, key, line);
    else if (key == "hold") s.metrics.hold = as_number(v, key, line);
    else if (key == "k") s.metrics.k = as_number(v, key, line);
    else if (key == "onset_floor") s.metrics.onset_floor = as_number(v, key, line);
    else unknown_key("metrics", key, line);
}

void set_sweep(SweepSpec& sweep, std::string_view key, const Value& v, int line)
{
    if (key == "parameter") sweep.parameter = as_string(v, key, line);
    else if (key == "values") sweep.values = as_array(v, key, line);
    else unknown_key("sweep", key, line);
}

void set_unit(UnitParams& u, std::string_view key, const Value& v, int line)
{
    if (key == "id") u.id = as_string(v, key, line);
    else if (key == "kind") {
        const auto text = as_string(v, key, line);
        const auto kind = unit_kind_from_string(text);
        if (!kind) throw ParseError(line, "unknown unit kind '" + text + "' (expected SG, BESS or SC)");
        u.kind = *kind;
    } else if (key == "inductance") u.inductance = as_number(v, key, line);
    else if (key == "resistance") u.resistance = as_number(v, key, line);
    else if (key == "capacitance") u.capacitance = as_number(v, key, line);
    else if (key == "online") u.online = as_bool(v, key, line);
    else unknown_key("units", key, line);
}

UnitParams read_unit(const config::Table& table)
{
    UnitParams u;
    bool has_id = false, has_kind = false, has_l = false, has_r = false;
    for (const auto& e : table.entries) {
        set_unit(u, e.key, e.value, e.line);
        has_id |= e.key == "id";
        has_kind |= e.key == "kind";
        has_l |= e.key == "inductance";
        has_r |= e.key == "resistance";
    }
    if (!(has_id && has_kind && has_l && has_r)) {
        throw ParseError(table.line, "[[units]] needs id, kind, inductance and resistance");
    }
    return u;
}

Event read_event(const config::Table& table)
{
    std::optional<double> at, power;
    std::optional<std::string> kind, unit;
    for (const auto& e : table.entries) {
        if (e.key == "at") at = as_number(e.value, e.key, e.line);
        else if (e.key == "kind") kind = as_string(e.value, e.key, e.line);
        else if (e.key == "power") power = as_number(e.value, e.key, e.line);
        else if (e.key == "unit") unit = as_string(e.value, e.key, e.line);
        else unknown_key("events", e.key, e.line);
    }
    if (!at || !kind) {
        throw ParseError(table.line, "[[events]] needs 'at' and 'kind'");
    }

    auto need_power = [&]() {
        if (!power) throw ParseError(table.line, "event '" + *kind + "' needs 'power'");
        if (unit) throw ParseError(table.line, "event '" + *kind + "' does not take 'unit'");
        return *power;
    };
    auto need_unit = [&]() {
        if (!unit) throw ParseError(table.line, "event '" + *kind + "' needs 'unit'");
        if (power) throw ParseError(table.line, "event '" + *kind + "' does not take 'power'");
        return *unit;
    };

    Event ev{*at, PulseEnd{}};
    if (*kind == "load_step") ev.action = LoadStep{need_power()};
    else if (*kind == "pulse_start") ev.action = PulseStart{need_power()};
    else if (*kind == "pulse_end") {
        if (power || unit) throw ParseError(table.line, "event 'pulse_end' takes no arguments");
        ev.action = PulseEnd{};
    } else if (*kind == "unit_trip") ev.action = UnitTrip{need_unit()};
    else if (*kind == "unit_restore") ev.action = UnitRestore{need_unit()};
    else {
        throw ParseError(table.line, "unknown event kind '" + *kind +
                                         "' (expected load_step, pulse_start, pulse_end, unit_trip, unit_restore)");
    }
    return ev;
}

std::string num(double v)
{
    return fmt::format("{}", v);
}

std::string quote_string(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

UnitParams make_unit(std::string id, UnitKind kind, double l, double r, std::optional<double> c = std::nullopt)
{
    return UnitParams{std::move(id), kind, l, r, c, true};
}

}  // namespace

MetricConfig Scenario::metric_config() const
{
    MetricConfig m = metrics;
    m.v_ref = params.v_ref;
    return m;
}

SystemParams default_params()
{
    SystemParams p;
    p.v_ref = 6000.0;
    p.c_eq = 20e-3;
    p.kp = 0.5;
    p.ki = 200.0;
    p.p_cpl = 10e6;
    p.p_ppl = 0.0;
    p.voltage_floor = 0.2;
    // SGs take the larger share of the constant-power load; the BESS droop is
    // softer but its converter responds faster. R_eq = 0.05 Ohm overall.
    p.units = {
        make_unit("sg_a", UnitKind::SG, 1e-3, 0.125),
        make_unit("sg_b", UnitKind::SG, 1e-3, 0.125),
        make_unit("b_a", UnitKind::BESS, 0.2e-3, 0.5),
        make_unit("b_b", UnitKind::BESS, 0.2e-3, 0.5),
        make_unit("sc_a", UnitKind::SC, 0.5e-3, 0.1, 1.0),
        make_unit("sc_b", UnitKind::SC, 0.5e-3, 0.1, 1.0),
    };
    return p;
}

Scenario default_scenario()
{
    Scenario s;
    s.params = default_params();
    return s;
}

Scenario paper_scenario()
{
    Scenario s = default_scenario();
    s.horizon = 12.0;
    s.events = {
        Event{6.0, LoadStep{15e6}},
        Event{10.0, UnitTrip{"sg_b"}},
    };
    return s;
}

Scenario parse_scenario(std::string_view text)
{
    const config::Document doc = config::parse(text);
    Scenario s = default_scenario();

    std::vector<UnitParams> units;
    bool saw_units = false;
    for (const auto& table : doc.tables) {
        const bool array_table = table.name == "units" || table.name == "events";
        if (table.is_array != array_table) {
            throw ParseError(table.line, array_table ? "use [[" + table.name + "]] for repeated tables"
                                                     : "[" + table.name + "] is not a repeated table");
        }
        if (table.name == "system") {
            for (const auto& e : table.entries) set_system(s, e.key, e.value, e.line);
        } else if (table.name == "secondary") {
            for (const auto& e : table.entries) set_secondary(s, e.key, e.value, e.line);
        } else if (table.name == "metrics") {
            for (const auto& e : table.entries) set_metrics(s, e.key, e.value, e.line);
        } else if (table.name == "sweep") {
            SweepSpec sweep;
            for (const auto& e : table.entries) set_sweep(sweep, e.key, e.value, e.line);
            s.sweep = std::move(sweep);
        } else if (table.name == "units") {
            saw_units = true;
            units.push_back(read_unit(table));
        } else if (table.name == "events") {
            s.events.push_back(read_event(table));
        } else {
            throw ParseError(table.line, "unknown table [" + table.name + "]");
        }
    }
    if (saw_units) {
        s.params.units = std::move(units);
    }

    validate_or_throw(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read scenario file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(0, path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        std::vector<std::string> problems;
        for (const auto& p : e.problems()) problems.push_back(path.string() + ": " + p);
        throw ValidationError(std::move(problems));
    }
}

std::string serialize(const Scenario& s)
{
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };

    out += "[system]\n";
    line("v_ref", num(s.params.v_ref));
    line("c_eq", num(s.params.c_eq));
    line("p_cpl", num(s.params.p_cpl));
    line("p_ppl", num(s.params.p_ppl));
    line("voltage_floor", num(s.params.voltage_floor));
    line("horizon", num(s.horizon));
    line("dt", num(s.dt));
    line("decimate", std::to_string(s.decimate));

    out += "\n[secondary]\n";
    line("kp", num(s.params.kp));
    line("ki", num(s.params.ki));

    out += "\n[metrics]\n";
    line("deadband", num(s.metrics.deadband));
    line("restore_band", num(s.metrics.restore_band));
    line("hold", num(s.metrics.hold));
    line("onset_floor", num(s.metrics.onset_floor));
    if (s.metrics.k) line("k", num(*s.metrics.k));

    for (const auto& u : s.params.units) {
        out += "\n[[units]]\n";
        line("id", quote_string(u.id));
        line("kind", quote_string(to_string(u.kind)));
        line("inductance", num(u.inductance));
        line("resistance", num(u.resistance));
        if (u.capacitance) line("capacitance", num(*u.capacitance));
        line("online", u.online ? "true" : "false");
    }

    for (const auto& ev : s.events) {
        out += "\n[[events]]\n";
        line("at", num(ev.at));
        std::visit(overloaded{
                       [&](const LoadStep& e) { line("kind", "\"load_step\""); line("power", num(e.p_cpl)); },
                       [&](const PulseStart& e) { line("kind", "\"pulse_start\""); line("power", num(e.p_ppl)); },
                       [&](const PulseEnd&) { line("kind", "\"pulse_end\""); },
                       [&](const UnitTrip& e) { line("kind", "\"unit_trip\""); line("unit", quote_string(e.unit)); },
                       [&](const UnitRestore& e) { line("kind", "\"unit_restore\""); line("unit", quote_string(e.unit)); },
                   },
                   ev.action);
    }

    if (s.sweep) {
        out += "\n[sweep]\n";
        line("parameter", quote_string(s.sweep->parameter));
        std::string values = "[";
        for (std::size_t k = 0; k < s.sweep->values.size(); ++k) {
            if (k) values += ", ";
            values += num(s.sweep->values[k]);
        }
        line("values", values + "]");
    }
    return out;
}

std::vector<std::string> validate(const Scenario& s)
{
    std::vector<std::string> problems = validate_params(s.params);

    if (!(s.dt > 0.0)) problems.emplace_back("system.dt must be > 0");
    if (!(s.horizon > 0.0)) problems.emplace_back("system.horizon must be > 0");
    if (s.decimate < 1) problems.emplace_back("system.decimate must be >= 1");

    if (s.params.v_ref > 0.0) {
        for (auto& p : validate_metrics(s.metric_config())) problems.push_back(std::move(p));
    }

    // Bail out before the topology walk if the unit list itself is broken.
    if (!problems.empty()) return problems;

    if (auto guard = check_stability_guard(s.params)) {
        problems.push_back("initial operating point: " + *guard);
    }

    std::vector<Event> events = s.events;
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });
    SystemParams params = s.params;
    PlantState scratch;
    scratch.current.assign(params.units.size(), 0.0);
    scratch.v_cap.assign(params.sc_count(), 0.0);
    for (const auto& ev : events) {
        const std::string where = "event " + describe(ev);
        if (!(ev.at >= 0.0)) problems.push_back(where + ": time must be >= 0");
        if (ev.at > s.horizon) problems.push_back(where + ": after the horizon " + num(s.horizon) + " s");
        if (const auto* step = std::get_if<LoadStep>(&ev.action); step && step->p_cpl < 0.0) {
            problems.push_back(where + ": power must be >= 0");
        }
        if (const auto* pulse = std::get_if<PulseStart>(&ev.action); pulse && pulse->p_ppl < 0.0) {
            problems.push_back(where + ": power must be >= 0");
        }
        try {
            apply_event(params, scratch, ev);
            if (auto guard = check_stability_guard(params)) {
                problems.push_back(where + ": " + *guard);
            }
        } catch (const Error& e) {
            problems.push_back(where + ": " + e.what());
        }
    }

    if (s.sweep) {
        if (s.sweep->values.empty()) {
            problems.emplace_back("sweep.values must not be empty");
        }
        for (double value : s.sweep->values) {
            try {
                for (const auto& p : validate(sweep_variant(s, value))) {
                    problems.push_back("sweep value " + num(value) + ": " + p);
                }
            } catch (const Error& e) {
                problems.push_back("sweep." + s.sweep->parameter + ": " + e.what());
                break;
            }
        }
    }
    return problems;
}

std::vector<std::string> validate_metrics(const MetricConfig& m)
{
    std::vector<std::string> problems;
    if (!(m.v_ref > 0.0)) problems.emplace_back("reference voltage must be > 0");
    if (!(m.deadband > 0.0)) problems.emplace_back("metrics.deadband must be > 0");
    if (!(m.restore_band > 0.0)) problems.emplace_back("metrics.restore_band must be > 0");
    if (!(m.hold >= 0.0)) problems.emplace_back("metrics.hold must be >= 0");
    if (m.k && !(*m.k > 0.0)) problems.emplace_back("metrics.k must be > 0");
    if (!(m.onset_floor >= 0.0 && m.onset_floor < m.deadband)) {
        problems.emplace_back("metrics.onset_floor must lie in [0, deadband)");
    }
    return problems;
}

void validate_or_throw(const Scenario& s)
{
    auto problems = validate(s);
    if (!problems.empty()) {
        throw ValidationError(std::move(problems));
    }
}

void apply_override(Scenario& s, std::string_view path, std::string_view literal)
{
    const Value value = config::parse_value(literal, 0);
    const auto dot = path.find('.');
    if (dot == std::string_view::npos) {
        throw ParseError(0, "override path '" + std::string(path) + "' needs the form table.key");
    }
    const auto table = path.substr(0, dot);
    const auto key = path.substr(dot + 1);

    if (table == "system") set_system(s, key, value, 0);
    else if (table == "secondary") set_secondary(s, key, value, 0);
    else if (table == "metrics") set_metrics(s, key, value, 0);
    else if (table == "units") {
        const auto dot2 = key.find('.');
        if (dot2 == std::string_view::npos) {
            throw ParseError(0, "override path '" + std::string(path) + "' needs the form units.<id>.<key>");
        }
        const auto id = key.substr(0, dot2);
        const auto idx = s.params.find_unit(id);
        if (!idx) throw ParseError(0, "override names unknown unit '" + std::string(id) + "'");
        set_unit(s.params.units[*idx], key.substr(dot2 + 1), value, 0);
    } else {
        throw ParseError(0, "override path '" + std::string(path) + "' names unknown table '" +
                                std::string(table) + "'");
    }
}

void apply_override(Scenario& s, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError(0, "override '" + std::string(assignment) + "' needs the form path=value");
    }
    apply_override(s, assignment.substr(0, eq), assignment.substr(eq + 1));
}

Scenario sweep_variant(const Scenario& s, double value)
{
    if (!s.sweep) {
        throw Error("scenario has no [sweep] table");
    }
    Scenario variant = s;
    variant.sweep.reset();
    apply_override(variant, s.sweep->parameter, num(value));
    return variant;
}

std::string scenario_digest(const Scenario& s)
{
    return sha256_hex(serialize(s));
}

std::string sha256_hex(std::string_view text)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int k = 0; k < len; ++k) {
        hex += fmt::format("{:02x}", digest[k]);
    }
    return hex;
}

}  // namespace mvdc
