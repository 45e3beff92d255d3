#include "microswim/dynamics.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"

namespace microswim {
namespace {

const RobotGeometry kSingle{Configuration::Single, 4.5e-5, 8.0e-9, 0.0458, 0.0};
const RobotGeometry kDual{Configuration::Dual, 9.0e-5, 1.7e-8, 0.046, 0.006};
const DragModel kDragSingle{0.02, 0.08, 1.0e-7};
const DragModel kDragDual{0.0592, 0.2368, 3.28e-7};
constexpr double kDt = 1.0 / 250.0;

DisturbanceStream quiet() { return DisturbanceStream(Disturbance{0.0, 0.0, 0.0, 0}); }

double kinetic_energy(const RobotState& s, const RobotGeometry& g) {
    return 0.5 * g.mass_kg * (s.velocity.x * s.velocity.x + s.velocity.y * s.velocity.y) +
           0.5 * g.yaw_inertia_kg_m2 * s.yaw_rate * s.yaw_rate;
}

TEST(PropulsorWrench, EqualThrustsCancelTorque) {
    const Wrench w = propulsor_wrench(1.0e-6, 1.0e-6, kDual);
    EXPECT_EQ(w.tau, 0.0);
    EXPECT_DOUBLE_EQ(w.f1, 2.0e-6);
    EXPECT_EQ(w.f2, 0.0);
}

TEST(PropulsorWrench, RightThrustTurnsLeft) {
    // F_l = 0, F_r = 1 mN over a 6 mm separation -> +3e-6 N*m
    const Wrench w = propulsor_wrench(0.0, 1.0e-3, kDual);
    EXPECT_DOUBLE_EQ(w.tau, 3.0e-6);
    EXPECT_GT(w.tau, 0.0);
}

TEST(PropulsorWrench, SwapAntisymmetry) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1e-5);
    for (int i = 0; i < 100; ++i) {
        const double fl = u(rng), fr = u(rng);
        const Wrench a = propulsor_wrench(fl, fr, kDual);
        const Wrench b = propulsor_wrench(fr, fl, kDual);
        EXPECT_EQ(a.tau, -b.tau);
        EXPECT_EQ(a.f1, b.f1);
    }
}

TEST(PropulsorWrench, RejectsNegativeThrustAndSingleGeometry) {
    EXPECT_THROW(propulsor_wrench(-1e-9, 0.0, kDual), std::domain_error);
    EXPECT_THROW(propulsor_wrench(1e-9, 1e-9, kSingle), std::domain_error);
}

TEST(EnvelopeTorque, SymmetricEnvelopeGivesZero) {
    EXPECT_EQ(envelope_torque({0.0, 0.3}, 1e-6, 0.002), 0.0);
}

TEST(EnvelopeTorque, BiasSignSetsTurnDirection) {
    // left-biased envelope (positive mean angle) -> positive torque
    EXPECT_GT(envelope_torque({0.2, 0.3}, 1e-6, 0.002), 0.0);
    // right-biased envelope -> negative torque
    EXPECT_LT(envelope_torque({-0.2, 0.3}, 1e-6, 0.002), 0.0);
}

TEST(Step, EquilibriumLeavesStateUnchangedExceptTime) {
    RobotState state;
    state.position = {0.01, -0.02};
    state.yaw = 0.3;
    auto dist = quiet();
    const RobotState next = step(state, {}, kDual, kDragDual, dist, kDt);
    EXPECT_EQ(next.position.x, state.position.x);
    EXPECT_EQ(next.position.y, state.position.y);
    EXPECT_EQ(next.yaw, state.yaw);
    EXPECT_EQ(next.velocity.x, 0.0);
    EXPECT_EQ(next.velocity.y, 0.0);
    EXPECT_EQ(next.yaw_rate, 0.0);
    EXPECT_DOUBLE_EQ(next.t, kDt);
}

TEST(Step, RejectsNonFiniteInputsAndBadDt) {
    RobotState state;
    auto dist = quiet();
    EXPECT_THROW(step(state, {}, kDual, kDragDual, dist, 0.0), std::domain_error);
    state.velocity.x = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(step(state, {}, kDual, kDragDual, dist, kDt), std::domain_error);
    state.velocity.x = 0.0;
    EXPECT_THROW(step(state, {std::numeric_limits<double>::infinity(), 0.0, 0.0}, kDual,
                      kDragDual, dist, kDt),
                 std::domain_error);
}

TEST(Step, ConstantThrustConvergesMonotonicallyToClosedFormSpeed) {
    const double thrust = kDragSingle.c_long * 0.0151 * 0.0151;
    const double v_ss = steady_state_speed(thrust, kDragSingle);
    RobotState state;
    auto dist = quiet();
    double prev = 0.0;
    for (int i = 0; i < 250 * 60; ++i) {
        state = step(state, {thrust, 0.0, 0.0}, kSingle, kDragSingle, dist, kDt);
        EXPECT_GE(state.velocity.x, prev);
        EXPECT_LE(state.velocity.x, v_ss * (1.0 + 1e-12));
        prev = state.velocity.x;
    }
    // criterion: within 0.5% of sqrt(F/c) at dt = 1/250
    EXPECT_NEAR(state.velocity.x, v_ss, 0.005 * v_ss);
    EXPECT_NEAR(state.velocity.x, 0.0151, 0.005 * 0.0151);
}

TEST(Step, DeterministicGivenSeed) {
    const Disturbance params{3.2e-9, 4.0e-10, -0.023, 777};
    RobotState a, b;
    DisturbanceStream da(params), db(params);
    const Wrench thrust{5e-6, 0.0, 0.0};
    for (int i = 0; i < 2500; ++i) {
        a = step(a, thrust, kDual, kDragDual, da, kDt);
        b = step(b, thrust, kDual, kDragDual, db, kDt);
    }
    EXPECT_EQ(a.position.x, b.position.x);
    EXPECT_EQ(a.position.y, b.position.y);
    EXPECT_EQ(a.yaw, b.yaw);
    EXPECT_EQ(a.velocity.x, b.velocity.x);
    EXPECT_EQ(a.velocity.y, b.velocity.y);
    EXPECT_EQ(a.yaw_rate, b.yaw_rate);
}

TEST(Step, KineticEnergyDecaysWithoutThrust) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uv(-0.05, 0.05), uw(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        RobotState state;
        state.velocity = {uv(rng), uv(rng)};
        state.yaw_rate = uw(rng);
        auto dist = quiet();
        double energy = kinetic_energy(state, kDual);
        for (int i = 0; i < 1000; ++i) {
            state = step(state, {}, kDual, kDragDual, dist, kDt);
            const double next = kinetic_energy(state, kDual);
            EXPECT_LE(next, energy * (1.0 + 1e-15));
            energy = next;
        }
    }
}

TEST(Step, DualEqualDutyHoldsHeadingExactly) {
    // torque cancellation: equal thrusts, no disturbance
    RobotState state;
    auto dist = quiet();
    const double thrust = 5.0e-6;
    for (int i = 0; i < 250 * 20; ++i) {
        const Wrench w = propulsor_wrench(thrust, thrust, kDual);
        state = step(state, w, kDual, kDragDual, dist, kDt);
        ASSERT_LT(std::abs(state.yaw), 1e-9);
    }
    EXPECT_EQ(state.yaw, 0.0);
    EXPECT_EQ(state.position.y, 0.0);
}

TEST(Step, TimestepConvergenceOnTurningRun) {
    // constant thrust differential: a curved path; halving dt moves the 20 s
    // endpoint by well under 1%
    auto endpoint = [](double dt) {
        RobotState state;
        DisturbanceStream dist(Disturbance{});
        const Wrench w = propulsor_wrench(4.0e-6, 5.0e-6, kDual);
        const int steps = static_cast<int>(std::lround(20.0 / dt));
        for (int i = 0; i < steps; ++i) state = step(state, w, kDual, kDragDual, dist, dt);
        return state.position;
    };
    const Vec2 coarse = endpoint(kDt);
    const Vec2 fine = endpoint(kDt / 2.0);
    const double shift = (coarse - fine).norm();
    EXPECT_LT(shift, 0.01 * coarse.norm());
}

TEST(Step, MirroredRunsProduceMirrorImageTrajectories) {
    // mirror the thrust differential and the disturbance: the trajectory
    // reflects across the n1 axis
    const Disturbance dist_a{2.0e-9, 0.0, -0.023, 0};
    const Disturbance dist_b{-2.0e-9, 0.0, -0.023, 0};
    RobotState a, b;
    DisturbanceStream da(dist_a), db(dist_b);
    for (int i = 0; i < 250 * 10; ++i) {
        const Wrench wa = propulsor_wrench(4.0e-6, 5.0e-6, kDual);
        const Wrench wb = propulsor_wrench(5.0e-6, 4.0e-6, kDual);
        a = step(a, wa, kDual, kDragDual, da, kDt);
        b = step(b, wb, kDual, kDragDual, db, kDt);
        ASSERT_NEAR(a.position.x, b.position.x, 1e-12);
        ASSERT_NEAR(a.position.y, -b.position.y, 1e-12);
        ASSERT_NEAR(a.yaw, -b.yaw, 1e-12);
    }
}

TEST(Step, YawStaysWrapped) {
    RobotState state;
    auto dist = quiet();
    const Wrench w = propulsor_wrench(0.0, 6.8e-6, kDual);
    for (int i = 0; i < 250 * 60; ++i) {
        state = step(state, w, kDual, kDragDual, dist, kDt);
        ASSERT_LE(state.yaw, M_PI);
        ASSERT_GT(state.yaw, -M_PI);
    }
    // the robot has spun through the wrap at least once
    EXPECT_GT(std::abs(state.yaw_rate) * 60.0, 2.0 * M_PI);
}

TEST(DisturbanceStream, LeverArmTurnsLateralForceIntoTorque) {
    DisturbanceStream stream(Disturbance{3.2e-9, 0.0, -0.023, 0});
    const Wrench w = stream.sample(0.0);
    EXPECT_DOUBLE_EQ(w.f2, 3.2e-9);
    EXPECT_DOUBLE_EQ(w.tau, -0.023 * 3.2e-9);
    EXPECT_EQ(w.f1, 0.0);
}

}  // namespace
}  // namespace microswim
