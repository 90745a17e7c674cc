#include "otsm/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace otsm::dynamics {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void require_finite(double v, const char* field) {
    if (!std::isfinite(v))
        throw ValidationError(std::string("non-finite value in field '") + field + "'");
}

}  // namespace

void validate(const PerturbationSpec& spec, const PlantParams& plant) {
    validate(plant);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FrictionPerturbation>) {
                if (!(p.Fc > 0.0) || !std::isfinite(p.Fc))
                    throw ValidationError("friction Fc must be positive and finite");
                if (!(p.Fc < plant.U))
                    throw ValidationError("perturbation amplitude must be < U (friction Fc)");
                if (!(p.sigma0 > 0.0) || !std::isfinite(p.sigma0))
                    throw ValidationError("friction sigma0 must be positive and finite");
            } else if constexpr (std::is_same_v<T, HarmonicPerturbation>) {
                if (!(p.A > 0.0) || !std::isfinite(p.A))
                    throw ValidationError("harmonic amplitude A must be positive and finite");
                if (!(p.A < plant.U))
                    throw ValidationError("perturbation amplitude must be < U (harmonic A)");
                if (!std::isfinite(p.omega) || !std::isfinite(p.phase))
                    throw ValidationError("harmonic omega/phase must be finite");
            } else if constexpr (std::is_same_v<T, RandomBinaryPerturbation>) {
                if (!(p.A > 0.0) || !std::isfinite(p.A))
                    throw ValidationError("random binary amplitude A must be positive and finite");
                if (!(p.A < plant.U))
                    throw ValidationError("perturbation amplitude must be < U (random binary A)");
                if (!(p.dwell > 0.0) || !std::isfinite(p.dwell))
                    throw ValidationError("random binary dwell must be positive and finite");
            }
        },
        spec);
}

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.dt < cfg.t_end))
        throw ValidationError("sim config requires 0 < dt < t_end");
    if (!is_finite(cfg.initial))
        throw ValidationError("non-finite value in field 'initial'");
}

SimulationDiverged::SimulationDiverged(double t)
    : std::runtime_error("simulation diverged (non-finite state) at t = " + std::to_string(t)), t_(t) {}

State step_euler(const State& state, double u, double xi, const PlantParams& plant, double dt) {
    require_finite(state.x1, "x1");
    require_finite(state.x2, "x2");
    require_finite(u, "u");
    require_finite(xi, "xi");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    validate(plant);

    return {state.x1 + dt * state.x2, state.x2 + dt * (u + xi) / plant.m};
}

PerturbationResult eval_perturbation(const PerturbationSpec& spec, double t, const State& state,
                                     const FrictionState& fstate, double dt) {
    return std::visit(
        [&](const auto& p) -> PerturbationResult {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NoPerturbation>) {
                return {0.0, fstate};
            } else if constexpr (std::is_same_v<T, HarmonicPerturbation>) {
                return {p.A * std::sin(p.omega * t + p.phase), fstate};
            } else if constexpr (std::is_same_v<T, RandomBinaryPerturbation>) {
                const auto k = static_cast<std::uint64_t>(std::floor(t / p.dwell));
                const bool up = splitmix64(p.seed ^ (k * 0x9e3779b97f4a7c15ULL)) & 1u;
                return {up ? p.A : -p.A, fstate};
            } else {
                // Dahl presliding update; the force applied now uses the
                // deflection at the start of the step. The clamp keeps the
                // stiff Euler update inside the |z| <= Fc invariant.
                const double xi = -fstate.z;
                double z = fstate.z +
                           dt * p.sigma0 * state.x2 * (1.0 - fstate.z / p.Fc * sgn(state.x2));
                z = std::clamp(z, -p.Fc, p.Fc);
                return {xi, FrictionState{z}};
            }
        },
        spec);
}

std::size_t sample_count(double t_end, double dt) {
    // Tolerant floor so that t_end being an exact multiple of dt lands on
    // the intended grid despite binary rounding of dt.
    return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;
}

Trajectory simulate(const PlantParams& plant, const control::SurfaceSpec& surface,
                    const PerturbationSpec& pert, const SimConfig& cfg) {
    validate(plant);
    control::validate(surface);
    validate(pert, plant);
    validate(cfg);

    const std::size_t n = sample_count(cfg.t_end, cfg.dt);
    Trajectory traj;
    traj.dt = cfg.dt;
    traj.samples.reserve(n);

    State state = cfg.initial;
    FrictionState fstate;

    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        if (!is_finite(state)) throw SimulationDiverged(t);

        const double s = control::eval_surface(surface, state, plant);
        const double u = control::relay_control(s, plant).u;
        const auto [xi, fnext] = eval_perturbation(pert, t, state, fstate, cfg.dt);
        traj.samples.push_back({t, state, s, u, xi});

        state = step_euler(state, u, xi, plant, cfg.dt);
        fstate = fnext;
    }
    return traj;
}

}  // namespace otsm::dynamics
