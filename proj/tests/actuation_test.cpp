#include "microswim/actuation.hpp"

#include <random>

#include "gtest/gtest.h"

namespace microswim {
namespace {

TEST(BiasAngle, ZeroDisplacementGivesZeroAngle) {
    EXPECT_EQ(bias_angle({1.0e-3, 0.0}), 0.0);
}

TEST(BiasAngle, InitialInstallationValue) {
    // delta = 1 mm, d_b = 0.3 mm -> 0.3 rad, the initial installation bias
    EXPECT_DOUBLE_EQ(bias_angle({1.0e-3, 0.3e-3}), 0.3);
}

TEST(BiasAngle, InverseProportionalToDelta) {
    const double base = bias_angle({1.0e-3, 0.25e-3});
    EXPECT_NEAR(bias_angle({2.0e-3, 0.25e-3}), base / 2.0, 1e-15);
}

TEST(BiasAngle, RejectsNonpositiveDelta) {
    EXPECT_THROW(bias_angle({0.0, 0.1e-3}), std::domain_error);
    EXPECT_THROW(bias_angle({-1e-3, 0.1e-3}), std::domain_error);
}

TEST(BiasAngle, RoundTripThroughDelta) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ud(1e-4, 5e-3), ub(-1e-3, 1e-3);
    for (int i = 0; i < 200; ++i) {
        TransmissionModel tr{ud(rng), ub(rng)};
        EXPECT_NEAR(bias_angle(tr) * tr.delta_m, tr.d_bias_m,
                    1e-12 * std::max(1e-6, std::abs(tr.d_bias_m)));
    }
}

TEST(AccumulatedBias, ZeroAtOrBelowThreshold) {
    const ActuatorBiasModel model{0.05, 1.0};
    EXPECT_EQ(accumulated_bias(model, {1.0, 0.10}), 0.0);
    EXPECT_EQ(accumulated_bias(model, {0.5, 0.10}), 0.0);
}

TEST(AccumulatedBias, LinearAboveThreshold) {
    const ActuatorBiasModel model{0.05, 1.0};
    EXPECT_DOUBLE_EQ(accumulated_bias(model, {5.0, 0.10}), 0.2);
}

TEST(AccumulatedBias, NonnegativeAndNondecreasingInFrequency) {
    const ActuatorBiasModel model{0.05, 1.0};
    double prev = -1.0;
    for (double f = 0.25; f <= 25.0; f += 0.25) {
        const double b = accumulated_bias(model, {f, 0.10});
        EXPECT_GE(b, 0.0);
        EXPECT_GE(b, prev);
        prev = b;
    }
}

TEST(StrokeEnvelope, TunedTransmissionIsSymmetric) {
    const ActuatorBiasModel bias{0.05, 1.0};
    const PwmSignal pwm{5.0, 0.10};
    const TransmissionModel tuned = tune_bias(pwm, bias, {1.0e-3, 0.0});
    EXPECT_EQ(stroke_envelope(pwm, tuned, bias).mean_angle_rad, 0.0);
}

TEST(StrokeEnvelope, UntunedLeftoverBiasIsPositive) {
    const ActuatorBiasModel bias{0.05, 1.0};
    const TransmissionModel untuned{1.0e-3, 0.0};
    EXPECT_GT(stroke_envelope({5.0, 0.10}, untuned, bias).mean_angle_rad, 0.0);
}

TEST(StrokeEnvelope, ZeroDutyGivesZeroAmplitude) {
    const ActuatorBiasModel bias{0.05, 1.0};
    EXPECT_EQ(stroke_envelope({5.0, 0.0}, {1e-3, 0.0}, bias).amplitude_rad, 0.0);
}

TEST(StrokeEnvelope, AmplitudeMonotoneInDutyWithSaturation) {
    const ActuatorBiasModel bias{0.05, 1.0};
    const StrokeAmplitudeModel amp{3.0, 0.6};
    double prev = -1.0;
    for (double duty = 0.0; duty <= 1.0; duty += 0.01) {
        const double a = stroke_envelope({5.0, duty}, {1e-3, 0.0}, bias, amp).amplitude_rad;
        EXPECT_GE(a, prev);
        EXPECT_LE(a, amp.saturation_rad);
        prev = a;
    }
    EXPECT_DOUBLE_EQ(stroke_envelope({5.0, 0.10}, {1e-3, 0.0}, bias, amp).amplitude_rad, 0.3);
    EXPECT_DOUBLE_EQ(stroke_envelope({5.0, 0.5}, {1e-3, 0.0}, bias, amp).amplitude_rad, 0.6);
}

TEST(TuneBias, NoBiasToCancelAtOrBelowThreshold) {
    const ActuatorBiasModel bias{0.05, 1.0};
    EXPECT_EQ(tune_bias({1.0, 0.10}, bias, {1e-3, 0.5e-3}).d_bias_m, 0.0);
}

TEST(TuneBias, CancelsBiasAtFiveHertz) {
    const ActuatorBiasModel bias{0.05, 1.0};
    const TransmissionModel tuned = tune_bias({5.0, 0.10}, bias, {1e-3, 0.0});
    EXPECT_DOUBLE_EQ(tuned.d_bias_m, 0.2e-3);
}

TEST(TuneBias, ExactCancellationAtTuningFrequencyOnly) {
    const ActuatorBiasModel bias{0.037, 1.0};
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ud(1e-4, 5e-3), uf(1.5, 20.0);
    for (int i = 0; i < 200; ++i) {
        const TransmissionModel base{ud(rng), 0.0};
        const double f_star = uf(rng);
        const TransmissionModel tuned = tune_bias({f_star, 0.10}, bias, base);
        EXPECT_EQ(stroke_envelope({f_star, 0.10}, tuned, bias).mean_angle_rad, 0.0);

        double f_other = uf(rng);
        if (std::abs(f_other - f_star) < 0.1) f_other = f_star + 1.0;
        EXPECT_NE(stroke_envelope({f_other, 0.10}, tuned, bias).mean_angle_rad, 0.0);
    }
}

TEST(TuneBias, RetuningNeededAcrossFrequencies) {
    // tune at 5 Hz, operate at 10 Hz: leftover bias appears
    const ActuatorBiasModel bias{0.05, 1.0};
    const TransmissionModel tuned = tune_bias({5.0, 0.10}, bias, {1e-3, 0.0});
    const double mean = stroke_envelope({10.0, 0.10}, tuned, bias).mean_angle_rad;
    EXPECT_NEAR(mean, 0.05 * 9.0 - 0.2, 1e-12);
    EXPECT_GT(mean, 0.0);
}

}  // namespace
}  // namespace microswim
