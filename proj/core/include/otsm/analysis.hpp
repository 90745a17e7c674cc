#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otsm/dynamics.hpp"

namespace otsm::analysis {

using dynamics::Trajectory;

/// Strict sign change of s between samples `index` and `index + 1`;
/// crossing time and state are linearly interpolated.
struct CrossingEvent {
    double t = 0.0;
    State state;
    std::size_t index = 0;
};

enum class Mode { Terminal, Twisting, Mixed, NotConverged };

std::string to_string(Mode mode);

struct ModeReport {
    Mode mode = Mode::NotConverged;
    std::vector<CrossingEvent> crossings;
    std::optional<double> reach_time;     // first surface crossing
    std::optional<double> settling_time;  // per settling_time()
    double residual_amplitude = 0.0;      // max |x1| over the post-settling window
    double band = 0.0;                    // sliding band used for classification
    std::optional<double> margin_min;     // reachability margin summary (optimal surface)
    std::optional<double> margin_mean;
};

struct AnalysisConfig {
    std::optional<double> band;    // absent: 5*dt*(1+2*alpha)*max|x2| from the run
    double eps_x1 = 1e-2;
    double eps_x2 = 1e-1;
    double eta = 1e-2;
    std::optional<double> window;  // seconds; absent: final 25% of the horizon

    bool operator==(const AnalysisConfig&) const = default;
};

std::vector<CrossingEvent> detect_crossings(const Trajectory& traj);

/// Discrete sliding band for a run of the optimal surface; the relay
/// overshoots s by at most one Euler step.
double default_band(const Trajectory& traj, double alpha);

/// Terminal: after the first crossing |s| stays within `band`.
/// Twisting: >= 3 crossings above the relay chatter floor with strictly
/// decreasing crossing-state norms and strictly shrinking switching
/// intervals (the spiral tightens as it converges).
/// Mixed: sliding intervals interrupted by out-of-band excursions.
ModeReport classify_mode(const Trajectory& traj, double band);

/// First time after which |x1| <= eps_x1 and |x2| <= eps_x2 hold for every
/// later sample; absent if the box is never permanently entered.
std::optional<double> settling_time(const Trajectory& traj, double eps_x1, double eps_x2);

/// t_r <= |s(0)| / eta, the eta-reachability bound on the reaching time.
double reaching_time_bound(double s0, double eta);

/// (-eta + 2*alpha*|x2|) - x2*sgn(s); positive means the reachability
/// condition holds at this sample.
double reachability_margin(double x2, double s, double alpha, double eta);

/// V_k = 0.5 * s_k^2 per sample.
std::vector<double> lyapunov_series(const Trajectory& traj);

/// Max |x1| over the final `window` seconds of the run.
double limit_cycle_amplitude(const Trajectory& traj, double window);

/// Full report over one trajectory; alpha (when the run used the optimal
/// surface) feeds the default band and the margin summary.
ModeReport analyze(const Trajectory& traj, const AnalysisConfig& cfg, std::optional<double> alpha);

/// JSON document: mode, crossings[], reach_time, settling_time,
/// residual_amplitude, band, margins summary.
std::string report_json(const ModeReport& report);

}  // namespace otsm::analysis
