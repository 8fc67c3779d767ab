/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

// Streaming voltage-resilience metrics over a uniform-rate bus voltage trace.
//
//   R_V    cumulative area of |v_ref - v_t| outside a small deadband; never
//          reset, so it keeps a memory of every past disturbance.
//   V_DI   k * integral(|v_ref - v_t|) / (v_ref * (t - t_d)) over the running
//          degradation window [t_d, t]; zero outside degradation.
//   V_REI  integral(v_t - V_pe) / ((v_ref - V_pe) * (t_pr - t_r)) over the
//          restoration window; 1 for instantaneous full restoration.
//
// Every tracker consumes one sample at a time, keeps O(1) state and never
// looks ahead. Deviation magnitudes are used throughout, so an overshoot and
// the mirrored undershoot score identically.

#include "mvdc/errors.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace mvdc {

/// Running composite trapezoidal sum. The upper limit advances with every
/// sample fed; on a uniform grid the total equals the closed-form
/// dx/2 * (f0 + 2*sum(f_inner) + fN).
class TrapezoidAccumulator {
public:
    /// Throws NonMonotoneTime unless t is strictly after the previous sample.
    void feed(double t, double f);
    void reset();

    [[nodiscard]] double total() const { return total_; }
    [[nodiscard]] bool empty() const { return count_ == 0; }
    [[nodiscard]] std::size_t count() const { return count_; }
    [[nodiscard]] double last_t() const { return last_t_; }
    [[nodiscard]] double last_f() const { return last_f_; }

private:
    double last_t_ = 0.0;
    double last_f_ = 0.0;
    double total_ = 0.0;
    std::size_t count_ = 0;
};

struct MetricConfig {
    double v_ref = 6000.0;
    double deadband = 5e-4;        // fraction of v_ref
    double restore_band = 1e-3;    // fraction of v_ref
    double hold = 0.05;            // s
    std::optional<double> k;       // V_DI scale, defaults to 1/v_ref
    double onset_floor = 1e-5;     // fraction of v_ref treated as "at reference" for onset

    [[nodiscard]] double vdi_scale() const { return k ? *k : 1.0 / v_ref; }
    bool operator==(const MetricConfig&) const = default;
};

/// Lifetime R_V. The integrand is |dv| where |dv| > deadband*v_ref and 0
/// otherwise, so quiet stretches contribute exactly nothing.
class RvTracker {
public:
    RvTracker(double v_ref, double deadband);
    double update(double t, double v);
    [[nodiscard]] double value() const { return area_.total(); }

private:
    double v_ref_;
    double threshold_;
    TrapezoidAccumulator area_;
};

enum class Phase { Steady = 0, Degrading = 1, Recovering = 2 };

enum class Transition { None, Onset, RecoveryStart, Restored };

struct PhaseUpdate {
    Phase phase = Phase::Steady;
    Transition transition = Transition::None;
    bool onset_moved = false;    // the candidate onset was pulled up to this sample
    bool recovery_started = false;  // this sample is t_r (set even if it also restores)
    bool band_entered = false;   // first sample of a stay inside the restore band
    bool band_left = false;      // a pending band stay was broken
};

/// Event phase state machine.
///
/// Steady -> Degrading when |dv| exceeds the deadband while growing. The
/// onset t_d is the last sample before the excursion started: the most
/// recent sample whose |dv| did not grow or sat below the onset floor.
///
/// Degrading -> Recovering at the first sample that moves back toward
/// v_ref (rising below the reference, falling above it); that sample is t_r
/// and the extremum reached so far is V_pe.
///
/// Recovering -> Steady once |dv| stays inside the restore band for the hold
/// time; t_pr is the time the band was entered.
class PhaseDetector {
public:
    explicit PhaseDetector(const MetricConfig& config);

    PhaseUpdate update(double t, double v);

    [[nodiscard]] Phase phase() const { return phase_; }
    [[nodiscard]] double onset_candidate() const { return onset_t_; }
    [[nodiscard]] double t_d() const { return t_d_; }
    [[nodiscard]] std::optional<double> t_r() const { return t_r_; }
    [[nodiscard]] std::optional<double> t_pr() const { return t_pr_; }
    [[nodiscard]] std::optional<double> band_entry() const { return band_entry_; }
    /// Signed extremum of v_t since t_d (V_pe once Recovering).
    [[nodiscard]] double extremum() const { return extremum_; }
    /// -1 for an undershoot, +1 for an overshoot.
    [[nodiscard]] int direction() const { return direction_; }

private:
    double v_ref_;
    double deadband_;
    double band_;
    double hold_;
    double onset_floor_;

    Phase phase_ = Phase::Steady;
    bool primed_ = false;
    double prev_v_ = 0.0;
    double prev_mag_ = 0.0;
    double onset_t_ = 0.0;
    double t_d_ = 0.0;
    std::optional<double> t_r_;
    std::optional<double> t_pr_;
    std::optional<double> band_entry_;
    double extremum_ = 0.0;
    int direction_ = 0;
};

/// V_DI driven by the phase detector. While Steady it integrates |dv| from
/// the current onset candidate so the degradation integral starts at t_d;
/// it outputs zero everywhere outside Degrading and resets when recovery
/// begins.
class VdiTracker {
public:
    explicit VdiTracker(const MetricConfig& config);

    double update(double t, double v, const PhaseUpdate& phase, const PhaseDetector& detector);

    [[nodiscard]] double value() const { return value_; }
    [[nodiscard]] double s_total() const { return area_.total(); }
    [[nodiscard]] double denominator() const { return denom_; }

private:
    double v_ref_;
    double scale_;
    TrapezoidAccumulator area_;
    double denom_ = 0.0;
    double value_ = 0.0;
};

/// Running V_REI over a restoration window that opens at t_r. The first
/// sample fed must be the one at t_r.
class VreiAccumulator {
public:
    VreiAccumulator(double v_ref, double v_pe, double t_r);

    /// Feeds a sample and returns the running index over [t_r, t]; 0 while
    /// the window still has zero length.
    double feed(double t, double v);

    [[nodiscard]] double numerator() const { return area_.total(); }
    /// Index for a window closed at t_end with the given numerator; an
    /// empty window (t_end == t_r) is an instantaneous recovery and scores 1.
    [[nodiscard]] double close(double t_end, double numerator) const;
    [[nodiscard]] double t_r() const { return t_r_; }

private:
    double v_ref_;
    double v_pe_;
    double t_r_;
    TrapezoidAccumulator area_;
};

struct EventReport {
    double t_d = 0.0;
    std::optional<double> t_r;
    std::optional<double> t_pr;
    double v_pe = 0.0;
    double delta_rv = 0.0;
    double vdi_peak = 0.0;
    std::optional<double> vrei;
    bool resolved = false;
    bool instantaneous_recovery = false;
    Phase phase_at_end = Phase::Steady;  // where an unresolved event stopped
};

struct MetricSample {
    double rv = 0.0;
    double vdi = 0.0;
    double vrei = 0.0;
    Phase phase = Phase::Steady;
};

/// All trackers over one voltage stream, plus the per-event bookkeeping that
/// turns phase transitions into EventReports.
class MetricEngine {
public:
    explicit MetricEngine(const MetricConfig& config);

    /// Throws NonMonotoneTime if t does not advance.
    MetricSample update(double t, double v);

    /// Reports completed so far, in order.
    [[nodiscard]] const std::vector<EventReport>& reports() const { return reports_; }

    /// Partial report for an event still open at the end of the stream.
    [[nodiscard]] std::optional<EventReport> unresolved() const;

    [[nodiscard]] const PhaseDetector& detector() const { return phase_; }
    [[nodiscard]] const MetricConfig& config() const { return config_; }

private:
    EventReport finalize_event(bool resolved) const;

    MetricConfig config_;
    RvTracker rv_;
    PhaseDetector phase_;
    VdiTracker vdi_;
    std::optional<VreiAccumulator> vrei_;

    bool started_ = false;
    double last_t_ = 0.0;
    double rv_at_onset_ = 0.0;
    double rv_at_band_ = 0.0;
    double vrei_num_at_band_ = 0.0;
    double vdi_peak_ = 0.0;
    double vrei_value_ = 0.0;
    std::optional<double> vrei_final_;
    bool instantaneous_ = false;
    std::vector<EventReport> reports_;
};

}  // namespace mvdc
