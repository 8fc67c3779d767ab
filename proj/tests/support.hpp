/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

// Helpers shared by the unit and acceptance tests. The oracles here are
// written independently of the streaming code they check.

#include "mvdc/metrics.hpp"
#include "mvdc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mvdc::test {

inline std::filesystem::path fixture(const std::string& name)
{
    return std::filesystem::path(MVDC_FIXTURE_DIR) / name;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("mvdc_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Composite trapezoid on a uniform grid: dx/2 * (f0 + 2*sum(inner) + fN).
inline double batch_trapezoid(const std::vector<double>& f, double dx)
{
    if (f.size() < 2) return 0.0;
    double inner = 0.0;
    for (std::size_t k = 1; k + 1 < f.size(); ++k) inner += f[k];
    return 0.5 * dx * (f.front() + 2.0 * inner + f.back());
}

/// Trapezoid over arbitrary abscissae, summed left to right.
inline double trapezoid(const std::vector<double>& t, const std::vector<double>& f, std::size_t from, std::size_t to)
{
    double s = 0.0;
    for (std::size_t k = from; k < to; ++k) s += 0.5 * (f[k] + f[k + 1]) * (t[k + 1] - t[k]);
    return s;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-300)
{
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

struct Trace {
    std::vector<double> t;
    std::vector<double> v;
};

/// Piecewise-linear trace through (time, voltage) knots sampled every dt
/// from 0 to t_end; t_k = k*dt.
inline Trace piecewise(const std::vector<std::pair<double, double>>& knots, double dt, double t_end)
{
    Trace tr;
    const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * dt;
        double v = knots.back().second;
        if (t <= knots.front().first) {
            v = knots.front().second;
        } else {
            for (std::size_t j = 1; j < knots.size(); ++j) {
                if (t <= knots[j].first) {
                    const auto [t0, v0] = knots[j - 1];
                    const auto [t1, v1] = knots[j];
                    v = v0 + (v1 - v0) * (t - t0) / (t1 - t0);
                    break;
                }
            }
        }
        tr.t.push_back(t);
        tr.v.push_back(v);
    }
    return tr;
}

inline Trace reflect(Trace tr, double v_ref)
{
    for (double& v : tr.v) v = 2.0 * v_ref - v;
    return tr;
}

struct Scored {
    std::vector<MetricSample> samples;
    std::vector<EventReport> reports;
    std::optional<EventReport> open;
};

inline Scored score(const Trace& tr, const MetricConfig& cfg)
{
    MetricEngine engine(cfg);
    Scored out;
    for (std::size_t k = 0; k < tr.t.size(); ++k) out.samples.push_back(engine.update(tr.t[k], tr.v[k]));
    out.reports = engine.reports();
    out.open = engine.unresolved();
    return out;
}

/// The V-shaped dip used throughout: flat at 6000 V until 1.0 s, down to
/// 5900 V at 1.2 s, then back up at 94 V per 0.3 s so it reaches the 6 V
/// band at 1.5 s and is clipped at 6000 V. Matches fixtures/v_shape.csv.
inline Trace v_shape(double dt = 1e-3)
{
    Trace tr;
    const auto n = static_cast<std::size_t>(std::llround(2.0 / dt));
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * dt;
        double v = 6000.0;
        if (t > 1.0 && t <= 1.2) v = 6000.0 - 100.0 * (t - 1.0) / 0.2;
        else if (t > 1.2) v = std::min(5900.0 + 94.0 * (t - 1.2) / 0.3, 6000.0);
        tr.t.push_back(t);
        tr.v.push_back(v);
    }
    return tr;
}

}  // namespace mvdc::test
