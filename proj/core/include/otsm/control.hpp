#pragma once

#include <variant>

#include "otsm/types.hpp"

namespace otsm::control {

/// s = x1 + alpha * m/U * x2^2 * sgn(x2). The surface shape is fixed by the
/// plant quantities m and U; alpha is the single free gain.
struct OptimalSurface {
    double alpha = 0.6;

    bool operator==(const OptimalSurface&) const = default;
};

/// s = x2 + beta * |x1|^(q/p) * sgn(x1), the first-order terminal surface.
struct ClassicSurface {
    double beta = 1.0;
    double q_over_p = 0.5;

    bool operator==(const ClassicSurface&) const = default;
};

/// s = x1 + beta^-1 * |x2|^(p/q) * sgn(x2), the non-singular variant.
struct NonSingularSurface {
    double beta = 1.0;
    double p_over_q = 2.0;

    bool operator==(const NonSingularSurface&) const = default;
};

using SurfaceSpec = std::variant<OptimalSurface, ClassicSurface, NonSingularSurface>;

void validate(const SurfaceSpec& spec);

/// Relay output paired with the sliding value it was derived from.
struct ControlDecision {
    double u = 0.0;
    double s = 0.0;
};

/// Sliding value of the selected surface at the given state. Non-integer
/// exponents use the odd real extension, so the evaluation is total.
double eval_surface(const SurfaceSpec& spec, const State& state, const PlantParams& plant);

/// u = -U * sgn(s); the zero branch makes the origin an exact fixed point.
ControlDecision relay_control(double s, const PlantParams& plant);

/// Closed-loop derivative of the optimal surface value,
/// ds/dt = x2 - 2*alpha*|x2|*sgn(s), for the unperturbed relay loop.
double sliding_derivative_optimal(const State& state, double s, double alpha);

/// Closed-form single-switch rest-to-rest transfer to the origin.
struct BangBangReference {
    State switch_state;
    double switch_time = 0.0;
    double final_time = 0.0;
};

/// Time-optimal reference for an initial state at rest: full acceleration
/// toward the origin for half the distance, full deceleration for the rest.
/// final_time = 2*sqrt(m*|x1(0)|/U). Initial velocity != 0 is unsupported.
BangBangReference bang_bang_reference(const State& initial, const PlantParams& plant);

/// Terminal-mode existence condition of the optimal surface: alpha > 0.5.
bool existence_condition(double alpha);

/// Existence condition of the classic surface, beta^2 < 2 * relay_gain.
/// relay_gain is the relay amplitude of the classic scheme, a parameter of
/// its own; it is deliberately distinct from the optimal-surface alpha.
bool classic_existence_condition(double relay_gain, double beta);

}  // namespace otsm::control
