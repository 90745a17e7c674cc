#include <doctest.h>

#include <cmath>

#include "otsm/control.hpp"

using namespace otsm;
using namespace otsm::control;

namespace {
const PlantParams kPlant{0.1, 1.0};
}

TEST_CASE("optimal surface evaluation") {
    // Point on the decelerating parabola x1 = -0.5*m/U*x2^2: s vanishes for
    // alpha = 0.5.
    const double v = std::sqrt(10.0);
    CHECK(eval_surface(OptimalSurface{0.5}, {-0.5, v}, kPlant) == doctest::Approx(0.0).epsilon(1e-12));

    // x2 = 0 reduces s to x1.
    CHECK(eval_surface(OptimalSurface{0.6}, {-1.0, 0.0}, kPlant) == -1.0);

    // -0.5 + 0.6*0.1*10 = 0.1
    CHECK(eval_surface(OptimalSurface{0.6}, {-0.5, v}, kPlant) == doctest::Approx(0.1));
}

TEST_CASE("classic surface evaluation") {
    CHECK(eval_surface(ClassicSurface{1.0, 0.5}, {0.0, 0.7}, kPlant) == doctest::Approx(0.7));
    CHECK(eval_surface(ClassicSurface{2.0, 0.5}, {0.25, 0.0}, kPlant) == doctest::Approx(1.0));
}

TEST_CASE("parabola membership: alpha=0.5 surface vanishes on the -U trajectory") {
    for (double x2 = -3.0; x2 <= 3.0; x2 += 0.25) {
        const double x1 = -0.5 * kPlant.m / kPlant.U * x2 * std::abs(x2);
        CHECK(std::abs(eval_surface(OptimalSurface{0.5}, {x1, x2}, kPlant)) < 1e-12);
    }
}

TEST_CASE("surface odd symmetry") {
    const SurfaceSpec specs[] = {OptimalSurface{0.7}, ClassicSurface{1.3, 0.5},
                                 NonSingularSurface{1.3, 2.0}};
    for (const auto& spec : specs)
        for (double x1 = -2.0; x1 <= 2.0; x1 += 0.4)
            for (double x2 = -2.0; x2 <= 2.0; x2 += 0.4) {
                const double plus = eval_surface(spec, {x1, x2}, kPlant);
                const double minus = eval_surface(spec, {-x1, -x2}, kPlant);
                CHECK(minus == doctest::Approx(-plus).epsilon(1e-12));
            }
}

TEST_CASE("classic and non-singular surfaces share a zero set") {
    // Same beta with reciprocal exponents; signs agree at off-surface states.
    const ClassicSurface classic{1.0, 0.5};
    const NonSingularSurface nonsingular{1.0, 2.0};
    for (double x1 = -2.0; x1 <= 2.0; x1 += 0.2)
        for (double x2 = -2.0; x2 <= 2.0; x2 += 0.2) {
            const double sc = eval_surface(SurfaceSpec{classic}, {x1, x2}, kPlant);
            const double sn = eval_surface(SurfaceSpec{nonsingular}, {x1, x2}, kPlant);
            if (std::abs(sc) > 1e-9 && std::abs(sn) > 1e-9) CHECK(sgn(sc) == sgn(sn));
        }
}

TEST_CASE("relay control") {
    CHECK(relay_control(-1.0, kPlant).u == 1.0);
    CHECK(relay_control(0.0, kPlant).u == 0.0);
    CHECK(relay_control(1e-12, kPlant).u == -1.0);
}

TEST_CASE("relay is scale invariant in s") {
    for (double s : {-3.0, -1e-9, 0.0, 1e-9, 0.5, 2.0})
        for (double k : {1e-6, 0.5, 1.0, 7.0, 1e6})
            CHECK(relay_control(k * s, kPlant).u == relay_control(s, kPlant).u);
}

TEST_CASE("sliding derivative of the optimal surface") {
    CHECK(sliding_derivative_optimal({0.0, 1.0}, 1.0, 0.6) == doctest::Approx(-0.2));
    CHECK(sliding_derivative_optimal({0.0, 0.0}, 1.0, 0.6) == 0.0);
    CHECK(sliding_derivative_optimal({0.0, -2.0}, -1.0, 0.6) == doctest::Approx(0.4));
}

TEST_CASE("bang-bang rest-to-rest reference") {
    const auto ref = bang_bang_reference({-1.0, 0.0}, kPlant);
    CHECK(ref.final_time == doctest::Approx(2.0 * std::sqrt(0.1)));
    CHECK(ref.switch_time == doctest::Approx(std::sqrt(0.1)));
    CHECK(ref.switch_state.x1 == doctest::Approx(-0.5));
    CHECK(ref.switch_state.x2 == doctest::Approx(std::sqrt(10.0)));

    CHECK(bang_bang_reference({0.0, 0.0}, kPlant).final_time == 0.0);

    // Odd symmetry of the mirrored transfer.
    const auto mirror = bang_bang_reference({1.0, 0.0}, kPlant);
    CHECK(mirror.final_time == doctest::Approx(ref.final_time));
    CHECK(mirror.switch_state.x1 == doctest::Approx(0.5));
    CHECK(mirror.switch_state.x2 == doctest::Approx(-ref.switch_state.x2));

    CHECK_THROWS_AS(bang_bang_reference({-1.0, 0.5}, kPlant), ValidationError);
}

TEST_CASE("existence conditions") {
    CHECK(existence_condition(0.6));
    CHECK_FALSE(existence_condition(0.5));
    CHECK_FALSE(existence_condition(0.3));

    CHECK(classic_existence_condition(1.0, 1.0));
    CHECK_FALSE(classic_existence_condition(0.5, 1.0));
    CHECK_FALSE(classic_existence_condition(2.0, 2.0));
}

TEST_CASE("surface validation rejects bad parameters") {
    CHECK_THROWS_AS(validate(SurfaceSpec{OptimalSurface{0.0}}), ValidationError);
    CHECK_THROWS_AS(validate(SurfaceSpec{ClassicSurface{1.0, 1.5}}), ValidationError);
    CHECK_THROWS_AS(validate(SurfaceSpec{NonSingularSurface{1.0, 0.5}}), ValidationError);
}
