/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/cli.hpp"

#include "mvdc/sim.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace mvdc::cli {

namespace {

using nlohmann::json;

constexpr const char* kTelemetryName = "telemetry.csv";
constexpr const char* kReportsName = "reports.json";

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void make_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    }
}

/// Buffered CSV output; doubles use the shortest text that parses back exactly.
class CsvWriter {
public:
    explicit CsvWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc)
    {
        if (!out_) {
            throw IoError("cannot write '" + path.string() + "'");
        }
    }

    void header(const std::vector<std::string>& names)
    {
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (k) buf_.push_back(',');
            fmt::format_to(std::back_inserter(buf_), "{}", names[k]);
        }
        end_row();
    }

    void cell(double v) { sep(); fmt::format_to(std::back_inserter(buf_), "{}", v); }
    void cell(int v) { sep(); fmt::format_to(std::back_inserter(buf_), "{}", v); }
    void cell(std::string_view v) { sep(); buf_.append(v.data(), v.data() + v.size()); }

    void end_row()
    {
        buf_.push_back('\n');
        first_ = true;
        if (buf_.size() > (1u << 20)) flush();
    }

    void close()
    {
        flush();
        out_.close();
        if (!out_) {
            throw IoError("failed writing '" + path_.string() + "'");
        }
    }

private:
    void sep()
    {
        if (!first_) buf_.push_back(',');
        first_ = false;
    }
    void flush()
    {
        out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        buf_.clear();
    }

    fs::path path_;
    std::ofstream out_;
    fmt::memory_buffer buf_;
    bool first_ = true;
};

void write_metrics(CsvWriter& w, const MetricSample& m)
{
    w.cell(m.rv);
    w.cell(m.vdi);
    w.cell(m.vrei);
    w.cell(static_cast<int>(m.phase));
}

std::string_view phase_name(Phase p)
{
    switch (p) {
    case Phase::Steady: return "steady";
    case Phase::Degrading: return "degrading";
    case Phase::Recovering: return "recovering";
    }
    return "steady";
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

json report_json(const EventReport& r, double v_ref)
{
    json j;
    j["resolved"] = r.resolved;
    j["t_d"] = r.t_d;
    j["t_r"] = optional_json(r.t_r);
    j["t_pr"] = optional_json(r.t_pr);
    j["v_pe"] = r.v_pe;
    j["depth"] = std::abs(v_ref - r.v_pe);
    j["recovery_time"] = r.t_r && r.t_pr ? json(*r.t_pr - *r.t_r) : json(nullptr);
    j["delta_rv"] = r.delta_rv;
    j["vdi_peak"] = r.vdi_peak;
    j["vrei"] = optional_json(r.vrei);
    j["instantaneous_recovery"] = r.instantaneous_recovery;
    j["phase_at_end"] = phase_name(r.phase_at_end);
    return j;
}

void write_reports(const fs::path& path, json head, const std::vector<EventReport>& events, double v_ref)
{
    json list = json::array();
    for (const auto& e : events) list.push_back(report_json(e, v_ref));
    head["events"] = std::move(list);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << head.dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string g9(double v)
{
    return fmt::format("{:.9g}", v);
}

std::string g9(const std::optional<double>& v)
{
    return v ? g9(*v) : std::string("-");
}

std::string summarize(const RunOutputs& out, double v_ref)
{
    std::string s = fmt::format("samples {}, telemetry rows {}\n", out.samples, out.rows);
    s += fmt::format("events {}\n", out.events.size());
    for (std::size_t k = 0; k < out.events.size(); ++k) {
        const auto& e = out.events[k];
        s += fmt::format("  #{} {} t_d={} t_r={} t_pr={} v_pe={} depth={} delta_rv={} vdi_peak={} vrei={}\n", k + 1,
                         e.resolved ? "resolved" : "unresolved", g9(e.t_d), g9(e.t_r), g9(e.t_pr), g9(e.v_pe),
                         g9(std::abs(v_ref - e.v_pe)), g9(e.delta_rv), g9(e.vdi_peak), g9(e.vrei));
    }
    s += fmt::format("telemetry {}\nreports {}\n", out.telemetry.string(), out.reports.string());
    return s;
}

std::vector<EventReport> collect_events(const MetricEngine& engine)
{
    std::vector<EventReport> events = engine.reports();
    if (auto open = engine.unresolved()) events.push_back(*open);
    return events;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_row(std::string_view line)
{
    std::vector<std::string> cells;
    while (true) {
        const auto comma = line.find(',');
        cells.emplace_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return cells;
}

CsvTable parse_csv(std::string_view text, const std::string& name)
{
    CsvTable table;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) continue;

        auto cells = split_row(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ParseError(line_no, fmt::format("{}: expected {} columns, found {}", name, table.header.size(),
                                                  cells.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) {
        throw ParseError(0, name + ": missing header row");
    }
    return table;
}

std::string sweep_dir_name(std::size_t index, double value)
{
    return fmt::format("{:02}_{}", index, value);
}

}  // namespace

bool SweepOutputs::all_ok() const
{
    return std::all_of(runs.begin(), runs.end(), [](const SweepRun& r) { return r.error.empty(); });
}

std::string current_column(std::string_view unit_id)
{
    std::string name = "i_";
    for (char c : unit_id) {
        if (c != '_') name.push_back(c);
    }
    return name;
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::numbers(std::string_view name) const
{
    const auto col = column(name);
    if (!col) {
        throw ParseError(0, "missing column '" + std::string(name) + "'");
    }
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string& cell = rows[r][*col];
        double v = 0.0;
        const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || end != cell.data() + cell.size()) {
            throw ParseError(0, fmt::format("row {}: column '{}' holds '{}', not a number", r + 1, name, cell));
        }
        out.push_back(v);
    }
    return out;
}

CsvTable read_csv(const fs::path& path)
{
    return parse_csv(read_file(path), path.string());
}

Scenario prepare_scenario(const RunOptions& options)
{
    Scenario s = load_scenario(options.scenario);
    for (const auto& o : options.overrides) {
        apply_override(s, o);
    }
    if (options.dt) s.dt = *options.dt;
    if (options.decimate) s.decimate = *options.decimate;
    validate_or_throw(s);
    return s;
}

RunOutputs run_scenario(const Scenario& scenario, const fs::path& out_dir)
{
    make_dir(out_dir);
    RunOutputs out;
    out.telemetry = out_dir / kTelemetryName;
    out.reports = out_dir / kReportsName;

    const SystemParams& params = scenario.params;
    std::vector<std::string> header = {"t", "v_t"};
    for (const auto& u : params.units) header.push_back(current_column(u.id));
    for (const char* name : {"p_cpl", "p_ppl", "rv", "vdi", "vrei", "phase"}) header.emplace_back(name);

    CsvWriter csv(out.telemetry);
    csv.header(header);

    MetricEngine engine(scenario.metric_config());
    Simulator sim(params, equilibrium_state(params), scenario.events, scenario.dt, scenario.horizon);
    const std::int64_t decimate = scenario.decimate;

    const RunResult result = sim.run([&](const Sample& s) {
        const MetricSample m = engine.update(s.t, s.state.v_t);
        if (s.step % decimate != 0) return;
        csv.cell(s.t);
        csv.cell(s.state.v_t);
        for (double i : s.state.current) csv.cell(i);
        csv.cell(s.p_cpl);
        csv.cell(s.p_ppl);
        write_metrics(csv, m);
        csv.end_row();
        ++out.rows;
    });
    csv.close();

    out.samples = result.samples;
    out.events = collect_events(engine);

    json head;
    head["scenario_digest"] = scenario_digest(scenario);
    head["v_ref"] = params.v_ref;
    head["samples"] = out.samples;
    write_reports(out.reports, std::move(head), out.events, params.v_ref);

    out.summary = summarize(out, params.v_ref);
    return out;
}

RunOutputs cmd_simulate(const RunOptions& options)
{
    return run_scenario(prepare_scenario(options), options.out);
}

SweepOutputs cmd_sweep(const RunOptions& options)
{
    const Scenario base = prepare_scenario(options);
    if (!base.sweep) {
        throw ValidationError({"scenario has no [sweep] table"});
    }
    make_dir(options.out);

    const auto& values = base.sweep->values;
    SweepOutputs result;
    result.runs.resize(values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next++; k < values.size(); k = next++) {
            SweepRun& run = result.runs[k];
            run.value = values[k];
            try {
                run.outputs = run_scenario(sweep_variant(base, values[k]), options.out / sweep_dir_name(k, values[k]));
            } catch (const std::exception& e) {
                run.error = e.what();
                if (run.error.empty()) run.error = "unknown failure";
            }
        }
    };
    const std::size_t workers =
        std::min<std::size_t>(values.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    result.summary_csv = options.out / "sweep_summary.csv";
    CsvWriter csv(result.summary_csv);
    csv.header({"value", "status", "event", "t_d", "t_r", "t_pr", "depth", "recovery", "v_rei", "v_di_peak"});
    auto opt_cell = [&](const std::optional<double>& v) {
        if (v) csv.cell(*v);
        else csv.cell("");
    };

    const double v_ref = base.params.v_ref;
    result.summary = fmt::format("sweep {} over {} values\n", base.sweep->parameter, values.size());
    for (const auto& run : result.runs) {
        if (!run.error.empty()) {
            csv.cell(run.value);
            csv.cell("error");
            for (int k = 0; k < 8; ++k) csv.cell("");
            csv.end_row();
            result.summary += fmt::format("  {} error: {}\n", g9(run.value), run.error);
            continue;
        }
        const auto& events = run.outputs->events;
        if (events.empty()) {
            csv.cell(run.value);
            csv.cell("no_event");
            for (int k = 0; k < 8; ++k) csv.cell("");
            csv.end_row();
            result.summary += fmt::format("  {} no event\n", g9(run.value));
        }
        for (std::size_t k = 0; k < events.size(); ++k) {
            const auto& e = events[k];
            const std::optional<double> recovery =
                e.t_r && e.t_pr ? std::optional<double>(*e.t_pr - *e.t_r) : std::nullopt;
            csv.cell(run.value);
            csv.cell(e.resolved ? "resolved" : "unresolved");
            csv.cell(static_cast<int>(k + 1));
            csv.cell(e.t_d);
            opt_cell(e.t_r);
            opt_cell(e.t_pr);
            csv.cell(std::abs(v_ref - e.v_pe));
            opt_cell(recovery);
            opt_cell(e.vrei);
            csv.cell(e.vdi_peak);
            csv.end_row();
            result.summary += fmt::format("  {} #{} depth={} recovery={} vrei={} vdi_peak={}\n", g9(run.value), k + 1,
                                          g9(std::abs(v_ref - e.v_pe)), g9(recovery), g9(e.vrei), g9(e.vdi_peak));
        }
    }
    csv.close();
    result.summary += fmt::format("summary {}\n", result.summary_csv.string());
    return result;
}

RunOutputs cmd_replay(const ReplayOptions& options)
{
    Scenario settings = options.scenario ? load_scenario(*options.scenario) : default_scenario();
    for (const auto& o : options.overrides) {
        apply_override(settings, o);
    }
    if (options.v_ref) settings.params.v_ref = *options.v_ref;
    const MetricConfig config = settings.metric_config();
    if (auto problems = validate_metrics(config); !problems.empty()) {
        throw ValidationError(std::move(problems));
    }

    const std::string text = read_file(options.trace);
    const CsvTable table = parse_csv(text, options.trace.string());
    if (table.rows.empty()) {
        throw ParseError(0, options.trace.string() + ": trace contains no samples");
    }
    const std::vector<double> t = table.numbers("t");
    const std::vector<double> v = table.numbers("v_t");
    for (std::size_t r = 1; r < t.size(); ++r) {
        if (!(t[r] > t[r - 1])) {
            throw NonMonotoneTime(fmt::format("{}: row {}: t = {} does not follow t = {}", options.trace.string(),
                                              r + 1, t[r], t[r - 1]));
        }
    }

    // Columns other than time, voltage and the metric outputs are carried through verbatim.
    std::vector<std::size_t> passthrough;
    std::vector<std::string> header = {"t", "v_t"};
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const auto& name = table.header[c];
        if (name == "t" || name == "v_t" || name == "rv" || name == "vdi" || name == "vrei" || name == "phase") {
            continue;
        }
        passthrough.push_back(c);
        header.push_back(name);
    }
    for (const char* name : {"rv", "vdi", "vrei", "phase"}) header.emplace_back(name);

    make_dir(options.out);
    RunOutputs out;
    out.telemetry = options.out / kTelemetryName;
    out.reports = options.out / kReportsName;

    CsvWriter csv(out.telemetry);
    csv.header(header);
    MetricEngine engine(config);
    for (std::size_t r = 0; r < t.size(); ++r) {
        const MetricSample m = engine.update(t[r], v[r]);
        csv.cell(t[r]);
        csv.cell(v[r]);
        for (std::size_t c : passthrough) csv.cell(table.rows[r][c]);
        write_metrics(csv, m);
        csv.end_row();
    }
    csv.close();

    out.samples = static_cast<std::int64_t>(t.size());
    out.rows = out.samples;
    out.events = collect_events(engine);

    json head;
    head["trace_digest"] = sha256_hex(text);
    head["v_ref"] = config.v_ref;
    head["samples"] = out.samples;
    write_reports(out.reports, std::move(head), out.events, config.v_ref);

    out.summary = summarize(out, config.v_ref);
    return out;
}

}  // namespace mvdc::cli
