#include "otsm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace otsm::analysis {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::Terminal: return "terminal";
        case Mode::Twisting: return "twisting";
        case Mode::Mixed: return "mixed";
        default: return "not_converged";
    }
}

std::vector<CrossingEvent> detect_crossings(const Trajectory& traj) {
    if (traj.samples.empty()) throw ValidationError("trajectory must be nonempty");

    std::vector<CrossingEvent> events;
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
        const auto& a = traj.samples[k];
        const auto& b = traj.samples[k + 1];
        if (a.s * b.s < 0.0) {
            const double frac = a.s / (a.s - b.s);
            CrossingEvent ev;
            ev.index = k;
            ev.t = a.t + frac * (b.t - a.t);
            ev.state = {a.state.x1 + frac * (b.state.x1 - a.state.x1),
                        a.state.x2 + frac * (b.state.x2 - a.state.x2)};
            events.push_back(ev);
        }
    }
    return events;
}

double default_band(const Trajectory& traj, double alpha) {
    double max_x2 = 0.0;
    for (const auto& smp : traj.samples) max_x2 = std::max(max_x2, std::abs(smp.state.x2));
    return 5.0 * traj.dt * (1.0 + 2.0 * alpha) * max_x2;
}

namespace {

double norm2(const State& s) { return std::hypot(s.x1, s.x2); }

// Crossing states below this norm are dominated by the one-step velocity
// quantum of the relay and carry no convergence information.
double chatter_floor(const Trajectory& traj) {
    double q = 0.0;
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k)
        q = std::max(q, std::abs(traj.samples[k + 1].state.x2 - traj.samples[k].state.x2));
    return 5.0 * q;
}

// Twisting signature: above the chatter floor, crossing-state norms shrink
// strictly and the switching intervals shrink strictly (the switching
// frequency grows as the spiral tightens). Perturbed runs that are forced
// back into repeated reaching phases fail the interval test.
bool is_twisting(const Trajectory& traj, const std::vector<CrossingEvent>& events) {
    const double floor = chatter_floor(traj);
    std::vector<const CrossingEvent*> above;
    for (const auto& ev : events)
        if (norm2(ev.state) > floor) above.push_back(&ev);
    if (above.size() < 3) return false;

    for (std::size_t i = 0; i + 1 < above.size(); ++i)
        if (!(norm2(above[i + 1]->state) < norm2(above[i]->state))) return false;
    for (std::size_t i = 0; i + 2 < above.size(); ++i)
        if (!(above[i + 2]->t - above[i + 1]->t < above[i + 1]->t - above[i]->t)) return false;
    return true;
}

// A sliding interval of at least min_run in-band samples interrupted by a
// later out-of-band excursion.
bool interrupted_sliding(const Trajectory& traj, std::size_t start, double band,
                         std::size_t min_run) {
    std::size_t run = 0;
    bool had_interval = false;
    for (std::size_t k = start; k < traj.samples.size(); ++k) {
        if (std::abs(traj.samples[k].s) <= band) {
            if (++run >= min_run) had_interval = true;
        } else {
            if (had_interval) return true;
            run = 0;
        }
    }
    return false;
}

}  // namespace

ModeReport classify_mode(const Trajectory& traj, double band) {
    if (!(band > 0.0)) throw ValidationError("sliding band must be positive");

    ModeReport report;
    report.band = band;
    report.crossings = detect_crossings(traj);

    const auto in_band = [&](const dynamics::Sample& smp) { return std::abs(smp.s) <= band; };

    if (report.crossings.empty()) {
        report.mode = std::all_of(traj.samples.begin(), traj.samples.end(), in_band)
                          ? Mode::Terminal
                          : Mode::NotConverged;
        return report;
    }

    report.reach_time = report.crossings.front().t;
    const std::size_t first = report.crossings.front().index + 1;

    if (std::all_of(traj.samples.begin() + static_cast<std::ptrdiff_t>(first),
                    traj.samples.end(), in_band)) {
        report.mode = Mode::Terminal;
    } else if (is_twisting(traj, report.crossings)) {
        report.mode = Mode::Twisting;
    } else if (interrupted_sliding(traj, first, band, 10)) {
        report.mode = Mode::Mixed;
    } else {
        report.mode = Mode::NotConverged;
    }
    return report;
}

std::optional<double> settling_time(const Trajectory& traj, double eps_x1, double eps_x2) {
    if (!(eps_x1 > 0.0) || !(eps_x2 > 0.0)) throw ValidationError("settling tolerances must be positive");
    if (traj.samples.empty()) throw ValidationError("trajectory must be nonempty");

    const auto settled = [&](const dynamics::Sample& smp) {
        return std::abs(smp.state.x1) <= eps_x1 && std::abs(smp.state.x2) <= eps_x2;
    };

    std::size_t k = traj.samples.size();
    while (k > 0 && settled(traj.samples[k - 1])) --k;
    if (k == traj.samples.size()) return std::nullopt;  // final sample violates
    if (k == 0) return traj.samples.front().t;
    return traj.samples[k].t;
}

double reaching_time_bound(double s0, double eta) {
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");
    return std::abs(s0) / eta;
}

double reachability_margin(double x2, double s, double alpha, double eta) {
    return (-eta + 2.0 * alpha * std::abs(x2)) - x2 * sgn(s);
}

std::vector<double> lyapunov_series(const Trajectory& traj) {
    std::vector<double> v;
    v.reserve(traj.samples.size());
    for (const auto& smp : traj.samples) v.push_back(0.5 * smp.s * smp.s);
    return v;
}

double limit_cycle_amplitude(const Trajectory& traj, double window) {
    if (traj.samples.empty()) throw ValidationError("trajectory must be nonempty");
    if (window > traj.duration()) throw ValidationError("window exceeds trajectory duration");

    const double t_start = traj.duration() - window;
    double amp = 0.0;
    for (const auto& smp : traj.samples)
        if (smp.t >= t_start - 1e-12) amp = std::max(amp, std::abs(smp.state.x1));
    return amp;
}

ModeReport analyze(const Trajectory& traj, const AnalysisConfig& cfg, std::optional<double> alpha) {
    const double band = cfg.band.value_or(default_band(traj, alpha.value_or(1.0)));
    ModeReport report = classify_mode(traj, band);
    report.settling_time = settling_time(traj, cfg.eps_x1, cfg.eps_x2);

    const double window = cfg.window.value_or(0.25 * traj.duration());
    report.residual_amplitude = limit_cycle_amplitude(traj, window);

    // Margin summary over the reaching phase; the condition degenerates
    // near x2 = 0, so margins are reported rather than asserted.
    if (alpha) {
        const std::size_t end = report.crossings.empty() ? traj.samples.size()
                                                         : report.crossings.front().index + 1;
        double mn = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t k = 0; k < end; ++k) {
            const auto& smp = traj.samples[k];
            const double m = reachability_margin(smp.state.x2, smp.s, *alpha, cfg.eta);
            mn = std::min(mn, m);
            sum += m;
        }
        if (end > 0) {
            report.margin_min = mn;
            report.margin_mean = sum / static_cast<double>(end);
        }
    }
    return report;
}

std::string report_json(const ModeReport& report) {
    nlohmann::json j;
    j["mode"] = to_string(report.mode);

    auto& crossings = j["crossings"] = nlohmann::json::array();
    for (const auto& ev : report.crossings)
        crossings.push_back({{"t", ev.t}, {"x1", ev.state.x1}, {"x2", ev.state.x2}, {"index", ev.index}});

    j["reach_time"] = report.reach_time ? nlohmann::json(*report.reach_time) : nlohmann::json();
    j["settling_time"] =
        report.settling_time ? nlohmann::json(*report.settling_time) : nlohmann::json();
    j["residual_amplitude"] = report.residual_amplitude;
    j["band"] = report.band;
    if (report.margin_min)
        j["margins"] = {{"min", *report.margin_min}, {"mean", *report.margin_mean}};
    else
        j["margins"] = nullptr;

    return j.dump(2) + "\n";
}

}  // namespace otsm::analysis
