#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "otsm/control.hpp"
#include "otsm/types.hpp"

namespace otsm::dynamics {

struct NoPerturbation {
    bool operator==(const NoPerturbation&) const = default;
};

/// Coulomb friction with continuous presliding transitions (Dahl form):
/// dz/dt = sigma0 * x2 * (1 - (z/Fc) * sgn(x2)), friction force f = z,
/// entering the plant as the matched perturbation xi = -f.
struct FrictionPerturbation {
    double Fc = 0.5;        // Coulomb level
    double sigma0 = 1e5;    // presliding stiffness

    bool operator==(const FrictionPerturbation&) const = default;
};

/// xi(t) = A * sin(omega * t + phase).
struct HarmonicPerturbation {
    double A = 0.5;
    double omega = 20.0;
    double phase = 0.0;

    bool operator==(const HarmonicPerturbation&) const = default;
};

/// xi(t) in {-A, +A}, resampled every `dwell` seconds from a seeded
/// generator; the value is a pure function of (seed, floor(t/dwell)).
struct RandomBinaryPerturbation {
    double A = 0.5;
    double dwell = 0.1;
    std::uint64_t seed = 0;

    bool operator==(const RandomBinaryPerturbation&) const = default;
};

using PerturbationSpec =
    std::variant<NoPerturbation, FrictionPerturbation, HarmonicPerturbation, RandomBinaryPerturbation>;

/// Checks spec invariants including the matched-perturbation amplitude
/// bound |xi| < U against the given plant.
void validate(const PerturbationSpec& spec, const PlantParams& plant);

/// Internal presliding deflection of the friction model; |z| <= Fc always.
struct FrictionState {
    double z = 0.0;
};

struct SimConfig {
    double dt = 1e-3;
    double t_end = 2.0;
    State initial{-1.0, 0.0};
    std::uint64_t seed = 0;

    bool operator==(const SimConfig&) const = default;
};

void validate(const SimConfig& cfg);

struct Sample {
    double t = 0.0;
    State state;
    double s = 0.0;   // sliding value
    double u = 0.0;   // applied control
    double xi = 0.0;  // applied perturbation
};

struct Trajectory {
    std::vector<Sample> samples;
    double dt = 0.0;

    double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
};

class SimulationDiverged : public std::runtime_error {
public:
    explicit SimulationDiverged(double t);
    double time() const { return t_; }

private:
    double t_;
};

/// Explicit forward Euler over the perturbed double integrator:
/// x1' = x1 + dt*x2 (previous velocity), x2' = x2 + dt*(u + xi)/m.
State step_euler(const State& state, double u, double xi, const PlantParams& plant, double dt);

struct PerturbationResult {
    double xi = 0.0;
    FrictionState fstate;
};

/// Matched disturbance at time t with the friction state advanced by one
/// step (unchanged for non-friction specs). dt drives the friction update.
PerturbationResult eval_perturbation(const PerturbationSpec& spec, double t, const State& state,
                                     const FrictionState& fstate, double dt);

/// Number of samples in a run, floor(t_end/dt) + 1 including t = 0.
std::size_t sample_count(double t_end, double dt);

/// Closed loop: per sample evaluate s, u = relay(s), xi, then Euler-step.
/// Bit-reproducible for a fixed config; throws SimulationDiverged with the
/// failing timestamp if the state leaves the finite range.
Trajectory simulate(const PlantParams& plant, const control::SurfaceSpec& surface,
                    const PerturbationSpec& pert, const SimConfig& cfg);

}  // namespace otsm::dynamics
