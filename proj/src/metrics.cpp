/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mvdc {

void TrapezoidAccumulator::feed(double t, double f)
{
    if (count_ > 0) {
        if (!(t > last_t_)) {
            throw NonMonotoneTime("sample at t = " + std::to_string(t) +
                                  " s does not follow t = " + std::to_string(last_t_) + " s");
        }
        total_ += 0.5 * (f + last_f_) * (t - last_t_);
    }
    last_t_ = t;
    last_f_ = f;
    ++count_;
}

void TrapezoidAccumulator::reset()
{
    *this = TrapezoidAccumulator{};
}

RvTracker::RvTracker(double v_ref, double deadband) : v_ref_(v_ref), threshold_(deadband * v_ref) {}

double RvTracker::update(double t, double v)
{
    const double mag = std::abs(v_ref_ - v);
    area_.feed(t, mag > threshold_ ? mag : 0.0);
    return area_.total();
}

PhaseDetector::PhaseDetector(const MetricConfig& config)
    : v_ref_(config.v_ref),
      deadband_(config.deadband * config.v_ref),
      band_(config.restore_band * config.v_ref),
      hold_(config.hold),
      onset_floor_(config.onset_floor * config.v_ref)
{
}

PhaseUpdate PhaseDetector::update(double t, double v)
{
    PhaseUpdate out;
    const double mag = std::abs(v - v_ref_);

    if (!primed_) {
        primed_ = true;
        onset_t_ = t;
        out.onset_moved = true;
    } else {
        switch (phase_) {
        case Phase::Steady:
            if (mag > deadband_ && mag > prev_mag_) {
                phase_ = Phase::Degrading;
                t_d_ = onset_t_;
                t_r_.reset();
                t_pr_.reset();
                band_entry_.reset();
                direction_ = v < v_ref_ ? -1 : 1;
                extremum_ = v;
                out.transition = Transition::Onset;
            } else if (mag <= prev_mag_ || mag <= onset_floor_) {
                onset_t_ = t;
                out.onset_moved = true;
            }
            break;

        case Phase::Degrading: {
            const bool moving_back = direction_ < 0 ? v > prev_v_ : v < prev_v_;
            if (moving_back) {
                phase_ = Phase::Recovering;
                t_r_ = t;
                out.transition = Transition::RecoveryStart;
                out.recovery_started = true;
            } else if (direction_ < 0 ? v < extremum_ : v > extremum_) {
                extremum_ = v;
            }
            break;
        }

        case Phase::Recovering:
            break;
        }

        if (phase_ == Phase::Recovering) {
            if (mag <= band_) {
                if (!band_entry_) {
                    band_entry_ = t;
                    out.band_entered = true;
                }
                // Grid times are k*dt products; allow for their rounding.
                if (t - *band_entry_ >= hold_ * (1.0 - 1e-9)) {
                    phase_ = Phase::Steady;
                    t_pr_ = band_entry_;
                    onset_t_ = t;
                    out.onset_moved = true;
                    out.transition = Transition::Restored;
                }
            } else if (band_entry_) {
                band_entry_.reset();
                out.band_left = true;
            }
        }
    }

    prev_v_ = v;
    prev_mag_ = mag;
    out.phase = phase_;
    return out;
}

VdiTracker::VdiTracker(const MetricConfig& config) : v_ref_(config.v_ref), scale_(config.vdi_scale()) {}

double VdiTracker::update(double t, double v, const PhaseUpdate& phase, const PhaseDetector& detector)
{
    const double mag = std::abs(v_ref_ - v);

    switch (phase.phase) {
    case Phase::Steady:
        if (phase.onset_moved) {
            area_.reset();
        }
        area_.feed(t, mag);
        denom_ = 0.0;
        value_ = 0.0;
        break;

    case Phase::Degrading:
        area_.feed(t, mag);
        denom_ = v_ref_ * (t - detector.t_d());
        value_ = denom_ > 0.0 ? scale_ * area_.total() / denom_ : 0.0;
        break;

    case Phase::Recovering:
        area_.reset();
        denom_ = 0.0;
        value_ = 0.0;
        break;
    }
    return value_;
}

VreiAccumulator::VreiAccumulator(double v_ref, double v_pe, double t_r) : v_ref_(v_ref), v_pe_(v_pe), t_r_(t_r)
{
    if (v_pe == v_ref) {
        throw Error("V_REI needs V_pe != v_ref");
    }
}

double VreiAccumulator::feed(double t, double v)
{
    area_.feed(t, v - v_pe_);
    const double width = t - t_r_;
    return width > 0.0 ? area_.total() / ((v_ref_ - v_pe_) * width) : 0.0;
}

double VreiAccumulator::close(double t_end, double numerator) const
{
    const double width = t_end - t_r_;
    if (!(width > 0.0)) {
        return 1.0;
    }
    return numerator / ((v_ref_ - v_pe_) * width);
}

MetricEngine::MetricEngine(const MetricConfig& config)
    : config_(config), rv_(config.v_ref, config.deadband), phase_(config), vdi_(config)
{
}

MetricSample MetricEngine::update(double t, double v)
{
    if (started_ && !(t > last_t_)) {
        throw NonMonotoneTime("sample at t = " + std::to_string(t) + " s does not follow t = " +
                              std::to_string(last_t_) + " s");
    }
    started_ = true;
    last_t_ = t;

    MetricSample out;
    out.rv = rv_.update(t, v);
    const PhaseUpdate pu = phase_.update(t, v);
    out.vdi = vdi_.update(t, v, pu, phase_);
    out.phase = pu.phase;

    if (pu.transition == Transition::Onset) {
        vdi_peak_ = 0.0;
        instantaneous_ = false;
        vrei_final_.reset();
    }
    if (pu.recovery_started) {
        vrei_.emplace(config_.v_ref, phase_.extremum(), t);
    }

    if (pu.phase == Phase::Degrading) {
        vdi_peak_ = std::max(vdi_peak_, out.vdi);
    }

    if (vrei_) {
        vrei_value_ = vrei_->feed(t, v);
        if (pu.band_entered) {
            rv_at_band_ = out.rv;
            vrei_num_at_band_ = vrei_->numerator();
        }
        if (pu.transition == Transition::Restored) {
            const double t_pr = *phase_.t_pr();
            instantaneous_ = !(t_pr > vrei_->t_r());
            vrei_final_ = vrei_->close(t_pr, vrei_num_at_band_);
            vrei_value_ = *vrei_final_;
            reports_.push_back(finalize_event(true));
            vrei_.reset();
        }
    }
    out.vrei = vrei_value_;

    if (pu.onset_moved) {
        rv_at_onset_ = out.rv;
    }
    return out;
}

std::optional<EventReport> MetricEngine::unresolved() const
{
    if (phase_.phase() == Phase::Steady) {
        return std::nullopt;
    }
    return finalize_event(false);
}

EventReport MetricEngine::finalize_event(bool resolved) const
{
    EventReport r;
    r.t_d = phase_.t_d();
    r.t_r = phase_.t_r();
    r.v_pe = phase_.extremum();
    r.vdi_peak = vdi_peak_;
    r.resolved = resolved;
    r.phase_at_end = phase_.phase();
    if (resolved) {
        r.t_pr = phase_.t_pr();
        r.delta_rv = rv_at_band_ - rv_at_onset_;
        r.vrei = vrei_final_;
        r.instantaneous_recovery = instantaneous_;
    } else {
        r.delta_rv = rv_.value() - rv_at_onset_;
    }
    return r;
}

}  // namespace mvdc
