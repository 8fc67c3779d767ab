/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/config_text.hpp"
#include "mvdc/scenario.hpp"

#include "support.hpp"

#include <doctest.h>

#include <string>

using namespace mvdc;
using namespace mvdc::test;

namespace {

template <class Fn>
std::string parse_error_of(Fn&& fn)
{
    try {
        fn();
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

template <class Fn>
std::vector<std::string> validation_errors_of(Fn&& fn)
{
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle)
{
    for (const auto& p : problems) {
        if (p.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("defaults")
{
    const auto s = default_scenario();
    CHECK(s.params.v_ref == 6000.0);
    CHECK(s.dt == 50e-6);
    CHECK(s.params.units.size() == 6);
    CHECK(s.params.sc_count() == 2);
    CHECK(validate(s).empty());
}

TEST_CASE("case-study scenario")
{
    const auto s = paper_scenario();
    CHECK(s.events.size() == 2);
    CHECK(s.horizon >= 10.0);
    CHECK(s.events[0] == Event{6.0, LoadStep{15e6}});
    CHECK(s.events[1] == Event{10.0, UnitTrip{"sg_b"}});
    CHECK(validate(s).empty());
}

TEST_CASE("the annotated fixture matches the built-in case study")
{
    CHECK(load_scenario(fixture("paper_scenario.toml")) == paper_scenario());
}

TEST_CASE("a file naming only the two events gets every default")
{
    CHECK(load_scenario(fixture("minimal_paper.toml")) == paper_scenario());
}

TEST_CASE("every shipped fixture validates")
{
    for (const char* name : {"paper_scenario.toml", "minimal_paper.toml", "flat.toml", "truncated.toml", "ceq_sweep.toml"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_scenario(fixture(name)));
    }
}

TEST_CASE("dt = 0 is a validation error")
{
    const auto problems = validation_errors_of([] { parse_scenario("[system]\ndt = 0\n"); });
    CHECK(mentions(problems, "dt"));
}

TEST_CASE("unknown keys are rejected by name")
{
    const auto msg = parse_error_of([] { parse_scenario("[system]\nv_ref = 6000\nfrequence = 60\n"); });
    CHECK(msg.find("frequence") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("malformed input is a parse error with a line")
{
    CHECK_FALSE(parse_error_of([] { parse_scenario("[system]\nc_eq = \"big\"\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[nonsense]\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[system]\n[system]\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[system]\nv_ref = 1\nv_ref = 2\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("v_ref = 1\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[system\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[[system]]\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[events]\nat = 1\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[[events]]\nat = 1\nkind = \"explode\"\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[[events]]\nat = 1\nkind = \"load_step\"\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[[events]]\nkind = \"pulse_end\"\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[[units]]\nid = \"x\"\nkind = \"SG\"\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[system]\ndecimate = 2.5\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[system]\nhorizon = 1e\n"); }).empty());
    CHECK_FALSE(parse_error_of([] { parse_scenario("[sweep]\nvalues = [1, , 2]\n"); }).empty());

    const auto msg = parse_error_of([] { parse_scenario("# header\n\n[secondary]\nkp = yes\n"); });
    CHECK(msg.find("line 4") != std::string::npos);
}

TEST_CASE("value syntax")
{
    using config::parse_value;
    CHECK(std::get<double>(parse_value("10_000_000", 1)) == 1e7);
    CHECK(std::get<double>(parse_value("+2.5e-3", 1)) == 2.5e-3);
    CHECK(std::get<std::string>(parse_value("\"a\\\"b\"", 1)) == "a\"b");
    CHECK(std::get<bool>(parse_value("false", 1)) == false);
    CHECK(std::get<std::vector<double>>(parse_value("[1, 2, 3,]", 1)) == std::vector<double>{1, 2, 3});
    CHECK(std::get<std::vector<double>>(parse_value("[]", 1)).empty());
    CHECK(config::parse("[a] # c\nk = \"x # y\" # z\n").tables.at(0).entries.at(0).value ==
          config::Value{std::string("x # y")});
}

TEST_CASE("validation lists every problem")
{
    const auto problems = validation_errors_of([] {
        parse_scenario("[system]\ndt = -1\nc_eq = 0\n[metrics]\nhold = -1\n[[events]]\nat = 99\nkind = \"unit_trip\"\nunit = \"zz\"\n");
    });
    CHECK(problems.size() >= 3);
    CHECK(mentions(problems, "dt"));
    CHECK(mentions(problems, "c_eq"));
    CHECK(mentions(problems, "hold"));
}

TEST_CASE("event topology is checked in time order")
{
    auto s = paper_scenario();
    s.events.push_back(Event{11.0, UnitTrip{"sg_b"}});
    s.horizon = 12.0;
    CHECK(mentions(validate(s), "already offline"));

    s = paper_scenario();
    s.events.push_back(Event{13.0, LoadStep{1e6}});
    CHECK(mentions(validate(s), "horizon"));

    s = paper_scenario();
    s.events = {Event{1.0, UnitTrip{"sg_a"}}, Event{2.0, UnitTrip{"sg_b"}}, Event{3.0, UnitTrip{"b_a"}},
                Event{4.0, UnitTrip{"b_b"}}};
    CHECK(mentions(validate(s), "no online"));

    s = paper_scenario();
    s.events.push_back(Event{11.0, LoadStep{500e6}});
    CHECK(mentions(validate(s), "equilibrium"));
}

TEST_CASE("round trip through the canonical text")
{
    auto s = paper_scenario();
    s.metrics.k = 1e-4;
    s.events.push_back(Event{10.5, PulseStart{2e6}});
    s.events.push_back(Event{10.7, PulseEnd{}});
    s.events.push_back(Event{11.0, UnitRestore{"sg_b"}});
    s.params.units[0].id = "odd\"id";
    s.events[1] = Event{10.0, UnitTrip{"odd\"id"}};
    s.events[4] = Event{11.0, UnitRestore{"odd\"id"}};
    s.sweep = SweepSpec{"system.c_eq", {0.01, 0.1 + 0.2, 1.0 / 3.0}};
    s.params.c_eq = 0.1 + 0.2;
    REQUIRE(validate(s).empty());

    const auto text = serialize(s);
    const auto back = parse_scenario(text);
    CHECK(back == s);
    CHECK(serialize(back) == text);

    const auto fixture_text = slurp(fixture("paper_scenario.toml"));
    CHECK(parse_scenario(serialize(parse_scenario(fixture_text))) == parse_scenario(fixture_text));
}

TEST_CASE("overrides")
{
    auto s = paper_scenario();
    apply_override(s, "system.c_eq=0.04");
    apply_override(s, "secondary.ki", "50");
    apply_override(s, "metrics.hold=0.1");
    apply_override(s, "units.sg_a.resistance=0.2");
    apply_override(s, "units.sc_b.online=false");
    CHECK(s.params.c_eq == 0.04);
    CHECK(s.params.ki == 50.0);
    CHECK(s.metrics.hold == 0.1);
    CHECK(s.params.units[0].resistance == 0.2);
    CHECK_FALSE(s.params.units[5].online);

    CHECK_THROWS_AS(apply_override(s, "system.frequence=1"), ParseError);
    CHECK_THROWS_AS(apply_override(s, "units.nope.resistance=1"), ParseError);
    CHECK_THROWS_AS(apply_override(s, "system.c_eq"), ParseError);
    CHECK_THROWS_AS(apply_override(s, "c_eq=1"), ParseError);
    CHECK_THROWS_AS(apply_override(s, "bogus.c_eq=1"), ParseError);
    CHECK_THROWS_AS(apply_override(s, "system.c_eq=\"x\""), ParseError);
}

TEST_CASE("sweep variants")
{
    const auto s = load_scenario(fixture("ceq_sweep.toml"));
    REQUIRE(s.sweep.has_value());
    CHECK(s.sweep->values == std::vector<double>{0.01, 0.02, 0.04});
    const auto v = sweep_variant(s, 0.04);
    CHECK(v.params.c_eq == 0.04);
    CHECK_FALSE(v.sweep.has_value());
    CHECK_THROWS_AS(sweep_variant(default_scenario(), 1.0), Error);

    auto bad = s;
    bad.sweep->values = {0.01, -1.0};
    CHECK(mentions(validate(bad), "sweep value -1"));
    bad.sweep->values.clear();
    CHECK(mentions(validate(bad), "sweep.values"));
    bad.sweep = SweepSpec{"system.nothing", {1.0}};
    CHECK(mentions(validate(bad), "sweep.system.nothing"));
}

TEST_CASE("scenario digest")
{
    const auto a = scenario_digest(paper_scenario());
    CHECK(a.size() == 64);
    CHECK(a == scenario_digest(paper_scenario()));
    auto s = paper_scenario();
    s.params.c_eq = 0.021;
    CHECK(scenario_digest(s) != a);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // TEST_SUITE
