#include "otsm/control.hpp"

#include <cmath>

namespace otsm::control {

void validate(const SurfaceSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OptimalSurface>) {
                if (!(s.alpha > 0.0) || !std::isfinite(s.alpha))
                    throw ValidationError("surface alpha must be positive and finite");
            } else if constexpr (std::is_same_v<T, ClassicSurface>) {
                if (!(s.beta > 0.0) || !std::isfinite(s.beta))
                    throw ValidationError("surface beta must be positive and finite");
                if (!(s.q_over_p > 0.0) || !(s.q_over_p < 1.0))
                    throw ValidationError("classic surface requires 0 < q_over_p < 1");
            } else {
                if (!(s.beta > 0.0) || !std::isfinite(s.beta))
                    throw ValidationError("surface beta must be positive and finite");
                if (!(s.p_over_q > 1.0) || !std::isfinite(s.p_over_q))
                    throw ValidationError("non-singular surface requires p_over_q > 1");
            }
        },
        spec);
}

double eval_surface(const SurfaceSpec& spec, const State& state, const PlantParams& plant) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OptimalSurface>) {
                return state.x1 + s.alpha * plant.m / plant.U * state.x2 * std::abs(state.x2);
            } else if constexpr (std::is_same_v<T, ClassicSurface>) {
                return state.x2 + s.beta * odd_pow(state.x1, s.q_over_p);
            } else {
                return state.x1 + odd_pow(state.x2, s.p_over_q) / s.beta;
            }
        },
        spec);
}

ControlDecision relay_control(double s, const PlantParams& plant) {
    return {-plant.U * sgn(s), s};
}

double sliding_derivative_optimal(const State& state, double s, double alpha) {
    return state.x2 - 2.0 * alpha * std::abs(state.x2) * sgn(s);
}

BangBangReference bang_bang_reference(const State& initial, const PlantParams& plant) {
    validate(plant);
    if (initial.x2 != 0.0)
        throw ValidationError("bang_bang_reference supports rest-to-rest transfers only (x2(0) must be 0)");

    const double d = std::abs(initial.x1);
    const double tf = 2.0 * std::sqrt(plant.m * d / plant.U);
    // Acceleration points toward the origin; the switch velocity carries its sign.
    const double v_switch = std::sqrt(plant.U * d / plant.m) * -sgn(initial.x1);

    BangBangReference ref;
    ref.final_time = tf;
    ref.switch_time = 0.5 * tf;
    ref.switch_state = {0.5 * initial.x1, v_switch};
    return ref;
}

bool existence_condition(double alpha) {
    return alpha > 0.5;
}

bool classic_existence_condition(double relay_gain, double beta) {
    return beta * beta < 2.0 * relay_gain;
}

}  // namespace otsm::control
