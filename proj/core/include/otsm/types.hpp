#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace otsm {

/// Physical characterization of the 1-DOF motion plant: inertia and the
/// symmetric actuator bound u in [-U, +U].
struct PlantParams {
    double m = 0.1;  // mass or moment of inertia
    double U = 1.0;  // control force/torque bound

    bool operator==(const PlantParams&) const = default;
};

/// Position/velocity pair of the 1-DOF motion.
struct State {
    double x1 = 0.0;  // position
    double x2 = 0.0;  // velocity

    bool operator==(const State&) const = default;
};

inline bool is_finite(const State& s) {
    return std::isfinite(s.x1) && std::isfinite(s.x2);
}

/// Strict sign with sgn(0) = 0.
inline double sgn(double v) {
    return (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

/// Odd real extension |v|^r * sgn(v), total for every real v.
inline double odd_pow(double v, double r) {
    return std::pow(std::abs(v), r) * sgn(v);
}

/// Thrown when an input value violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what)
        : std::invalid_argument(what) {}
};

inline void validate(const PlantParams& p) {
    if (!(p.m > 0.0) || !std::isfinite(p.m))
        throw ValidationError("plant inertia m must be positive and finite");
    if (!(p.U > 0.0) || !std::isfinite(p.U))
        throw ValidationError("control bound U must be positive and finite");
}

}  // namespace otsm
