#include "microswim/hydro.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace microswim {
namespace {

TEST(ReynoldsNumber, ZeroSpeedGivesZero) {
    EXPECT_EQ(reynolds_number(0.0458, 0.0, water_at_20c()), 0.0);
}

TEST(ReynoldsNumber, FastestParabolicRunIsModerate) {
    // l = 45.8 mm swimmer at 15.1 mm/s in 20 C water.
    const double re = reynolds_number(0.0458, 0.0151, water_at_20c());
    EXPECT_NEAR(re, 689.0, 0.5);
    EXPECT_GT(re, 1e-1);
    EXPECT_LT(re, 1e3);
}

TEST(ReynoldsNumber, SlowestRectangularRunIsModerate) {
    const double re = reynolds_number(0.0458, 0.00047, water_at_20c());
    EXPECT_NEAR(re, 21.0, 0.5);
    EXPECT_GT(re, 1e-1);
    EXPECT_LT(re, 1e3);
}

TEST(ReynoldsNumber, RejectsNonpositiveLength) {
    EXPECT_THROW(reynolds_number(0.0, 0.01, water_at_20c()), std::domain_error);
    EXPECT_THROW(reynolds_number(-0.01, 0.01, water_at_20c()), std::domain_error);
}

TEST(ReynoldsNumber, LinearInEachArgument) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    const FluidEnvironment env = water_at_20c();
    const double base = reynolds_number(0.04, 0.01, env);
    for (int i = 0; i < 50; ++i) {
        const double a = u(rng);
        EXPECT_NEAR(reynolds_number(0.04 * a, 0.01, env), a * base, 1e-9 * a * base);
        EXPECT_NEAR(reynolds_number(0.04, 0.01 * a, env), a * base, 1e-9 * a * base);
        FluidEnvironment scaled = env;
        scaled.density *= a;
        EXPECT_NEAR(reynolds_number(0.04, 0.01, scaled), a * base, 1e-9 * a * base);
        scaled = env;
        scaled.dynamic_viscosity *= a;
        EXPECT_NEAR(reynolds_number(0.04, 0.01, scaled), base / a, 1e-9 * base / a);
    }
}

TEST(ParabolicHeight, ReferenceTail) {
    // 26 mm tail at AR 0.41.
    EXPECT_NEAR(parabolic_height(0.026, 0.41), 7.1066666666666672e-3, 1e-15);
}

TEST(ParabolicHeight, SmallestSweptLength) {
    EXPECT_NEAR(parabolic_height(0.002, 0.41), 5.4666666666666666e-4, 1e-16);
}

TEST(ParabolicHeight, RejectsDegenerateGeometry) {
    EXPECT_THROW(parabolic_height(0.026, 0.0), std::domain_error);
    EXPECT_THROW(parabolic_height(0.0, 0.41), std::domain_error);
}

TEST(ParabolicHeight, AspectRatioIdentityHolds) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ul(0.001, 0.05), ua(0.05, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double l = ul(rng), ar = ua(rng);
        const double h = parabolic_height(l, ar);
        const double area = (2.0 / 3.0) * l * h;
        EXPECT_NEAR(h * h / area, ar, 1e-12 * ar);
    }
}

TEST(TailGeometry, ParabolicDerivedQuantities) {
    const TailGeometry tail = TailGeometry::parabolic(0.026, 0.41);
    EXPECT_NEAR(tail.height_m(), 7.1066666666666672e-3, 1e-15);
    EXPECT_NEAR(tail.area_m2(), (2.0 / 3.0) * 0.026 * 7.1066666666666672e-3, 1e-18);
    EXPECT_NEAR(tail.height_m() * tail.height_m() / tail.area_m2(), 0.41, 1e-12);
    // 25 um film at 2150 kg/m^3: the reference tail weighs about 6.6 mg.
    EXPECT_NEAR(tail.mass_kg(), 6.62e-6, 0.05e-6);
}

TEST(TailGeometry, RectangularDerivedQuantities) {
    const TailGeometry tail = TailGeometry::rectangular(0.020, 0.004);
    EXPECT_EQ(tail.height_m(), 0.004);
    EXPECT_NEAR(tail.area_m2(), 8.0e-5, 1e-18);
}

TEST(DragWrench, ExactlyZeroAtRest) {
    const DragModel model;
    const Wrench w = drag_wrench(0.0, 0.0, 0.0, model);
    EXPECT_EQ(w.f1, 0.0);
    EXPECT_EQ(w.f2, 0.0);
    EXPECT_EQ(w.tau, 0.0);
}

TEST(DragWrench, PureForwardMotionIsAntiparallelWithZeroTorque) {
    const DragModel model;
    const Wrench w = drag_wrench(0.015, 0.0, 0.0, model);
    EXPECT_LT(w.f1, 0.0);
    EXPECT_EQ(w.f2, 0.0);
    EXPECT_EQ(w.tau, 0.0);
}

TEST(DragWrench, QuadraticScaling) {
    const DragModel model;
    const Wrench w1 = drag_wrench(0.01, 0.005, 0.2, model);
    const Wrench w2 = drag_wrench(0.02, 0.010, 0.4, model);
    EXPECT_NEAR(w2.f1, 4.0 * w1.f1, 1e-18);
    EXPECT_NEAR(w2.f2, 4.0 * w1.f2, 1e-18);
    EXPECT_NEAR(w2.tau, 4.0 * w1.tau, 1e-18);
}

TEST(DragWrench, OddUnderVelocityNegation) {
    const DragModel model;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (int i = 0; i < 100; ++i) {
        const double v1 = u(rng), v2 = u(rng), om = u(rng) * 10.0;
        const Wrench a = drag_wrench(v1, v2, om, model);
        const Wrench b = drag_wrench(-v1, -v2, -om, model);
        EXPECT_EQ(a.f1, -b.f1);
        EXPECT_EQ(a.f2, -b.f2);
        EXPECT_EQ(a.tau, -b.tau);
    }
}

TEST(DragModel, LateralMustDominateLongitudinal) {
    DragModel model;
    model.c_lat = model.c_long / 2.0;
    EXPECT_THROW(model.validate(), std::domain_error);
}

TEST(SteadyStateSpeed, ClosedForm) {
    const DragModel model{0.02, 0.08, 1e-7};
    EXPECT_EQ(steady_state_speed(0.0, model), 0.0);
    // thrust fitted at the 15.1 mm/s calibration point
    const double thrust = 0.02 * 0.0151 * 0.0151;
    EXPECT_NEAR(steady_state_speed(thrust, model), 0.0151, 1e-15);
    const double thrust_rect = 0.02 * 0.0047 * 0.0047;
    EXPECT_NEAR(steady_state_speed(thrust_rect, model), 0.0047, 1e-15);
}

}  // namespace
}  // namespace microswim
