// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spikedeblur/spike_model.hpp"
#include "test_util.hpp"

namespace spikedeblur {
namespace {

// Straight-line accumulator loop for one pixel, returning spike times.
std::vector<int> oracle_spike_times(double a0, const std::vector<double> &inputs, double omega,
                                    double *final_a = nullptr) {
    std::vector<int> times;
    double a = a0;
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        a += inputs[t];
        if (a >= omega) {
            a -= omega;
            times.push_back(static_cast<int>(t));
        }
    }
    if (final_a) *final_a = a;
    return times;
}

LuminanceFrame frame_of(double value, std::int64_t t, std::size_t w = 1, std::size_t h = 1) {
    return {GrayImage(w, h, value), t};
}

AccumulatorState state_of(double a, double omega = 2.0) {
    auto s = AccumulatorState::zeros(1, 1, omega);
    s.residuals(0, 0) = a;
    return s;
}

TEST(AccumulateStep, FiresAndKeepsSurplus) {
    const auto [next, plane] = accumulate_step(state_of(1.5), frame_of(0.8, 0));
    EXPECT_TRUE(plane.at(0, 0));
    EXPECT_NEAR(next.residuals(0, 0), 0.3, 1e-15);
}

TEST(AccumulateStep, ZeroInputIsIdentity) {
    const auto [next, plane] = accumulate_step(state_of(0.7), frame_of(0.0, 0));
    EXPECT_FALSE(plane.at(0, 0));
    EXPECT_EQ(next.residuals(0, 0), 0.7);
}

TEST(AccumulateStep, ConstantHalfFiresEveryFourthSample) {
    const std::vector<double> inputs(12, 0.5);
    const auto expected = oracle_spike_times(0.0, inputs, 2.0);
    ASSERT_EQ(expected, (std::vector<int>{3, 7, 11}));

    auto state = AccumulatorState::zeros(1, 1);
    std::vector<int> fired;
    for (int t = 0; t < 12; ++t) {
        auto [next, plane] = accumulate_step(state, frame_of(0.5, t));
        if (plane.at(0, 0)) fired.push_back(t);
        state = next;
    }
    EXPECT_EQ(fired, expected);
}

TEST(AccumulateStep, RejectsBadInput) {
    const auto s = AccumulatorState::zeros(2, 2);
    EXPECT_THROW(accumulate_step(s, frame_of(0.5, 0, 3, 2)), std::invalid_argument);
    EXPECT_THROW(accumulate_step(s, frame_of(-0.1, 0, 2, 2)), std::invalid_argument);
    EXPECT_THROW(accumulate_step(s, frame_of(2.0001, 0, 2, 2)), std::invalid_argument);
    EXPECT_THROW(accumulate_step(s, frame_of(std::nan(""), 0, 2, 2)), std::invalid_argument);
    EXPECT_NO_THROW(accumulate_step(s, frame_of(2.0, 0, 2, 2)));
}

TEST(SimulateStream, AllZeroFramesGiveEmptyStream) {
    const LuminanceSequence frames(5, GrayImage(3, 2, 0.0));
    auto init = AccumulatorState::random(3, 2, 2.0, 11);
    const auto sim = simulate_stream(frames, 2.0, init);
    EXPECT_EQ(sim.stream.size(), 5u);
    for (const auto &p : sim.stream.planes()) EXPECT_EQ(p.count(), 0u);
    EXPECT_EQ(sim.final_state.residuals, init.residuals);
}

TEST(SimulateStream, ConstantHalfGivesThreeSpikesPerPixel) {
    const LuminanceSequence frames(12, GrayImage(4, 3, 0.5));
    const auto sim = simulate_stream(frames, 2.0);
    for (std::size_t y = 0; y < 3; ++y) {
        for (std::size_t x = 0; x < 4; ++x) EXPECT_EQ(sim.stream.pixel_count(x, y), 3u);
    }
}

TEST(SimulateStream, DefaultMetadata) {
    const auto sim = simulate_stream(LuminanceSequence(2, GrayImage(1, 1, 0.1)), 2.0);
    EXPECT_EQ(sim.stream.sample_rate_hz(), 40000.0);
    EXPECT_EQ(sim.stream.omega(), 2.0);
    EXPECT_DOUBLE_EQ(sim.stream.time_of(40000), 1.0);
    for (std::size_t i = 0; i < sim.stream.size(); ++i) {
        EXPECT_EQ(sim.stream.plane(i).timestamp_index(), static_cast<std::int64_t>(i));
    }
}

TEST(SimulateStream, RejectsBadArguments) {
    EXPECT_THROW(simulate_stream({}, 2.0), std::invalid_argument);
    EXPECT_THROW(simulate_stream(LuminanceSequence(1, GrayImage(1, 1)), 0.0),
                 std::invalid_argument);
    LuminanceSequence mixed{GrayImage(2, 2), GrayImage(2, 3)};
    EXPECT_THROW(simulate_stream(mixed, 2.0), std::invalid_argument);
    EXPECT_THROW(simulate_stream(LuminanceSequence(1, GrayImage(2, 2)), 2.0,
                                 AccumulatorState::zeros(3, 3)),
                 std::invalid_argument);
}

TEST(SpikeStream, EnforcesContiguousTimestamps) {
    SpikeStream s(2, 2);
    s.push_back(SpikePlane(2, 2, 0));
    EXPECT_THROW(s.push_back(SpikePlane(2, 2, 2)), std::invalid_argument);
    EXPECT_THROW(s.push_back(SpikePlane(3, 2, 1)), std::invalid_argument);
    EXPECT_THROW(SpikeStream(0, 2), std::invalid_argument);
    EXPECT_THROW(SpikeStream(2, 2, 2.0, 0.0), std::invalid_argument);
}

// Properties over random trajectories.

class SpikeProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SpikeProperties, FluxConservationAndResidualRange) {
    const std::uint64_t seed = GetParam();
    std::mt19937_64 rng(seed);
    const double omega = 0.5 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    std::uniform_real_distribution<double> dist(0.0, omega);
    const std::size_t w = 7, h = 5, steps = 150;
    LuminanceSequence frames;
    for (std::size_t t = 0; t < steps; ++t) {
        GrayImage f(w, h);
        for (double &v : f.values()) v = dist(rng);
        frames.push_back(f);
    }
    const auto init = AccumulatorState::random(w, h, omega, seed);
    auto state = init;
    for (std::size_t t = 0; t < steps; ++t) {
        state = accumulate_step(state, {frames[t], static_cast<std::int64_t>(t)}).first;
        for (double a : state.residuals.values()) {
            ASSERT_GE(a, 0.0);
            ASSERT_LT(a, omega);
        }
    }
    const auto sim = simulate_stream(frames, omega, init);
    EXPECT_EQ(sim.final_state.residuals, state.residuals);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double flux = 0.0;
            std::vector<double> inputs;
            for (const auto &f : frames) {
                flux += f(x, y);
                inputs.push_back(f(x, y));
            }
            const double balance = omega * static_cast<double>(sim.stream.pixel_count(x, y)) +
                                   sim.final_state.residuals(x, y) - init.residuals(x, y);
            EXPECT_NEAR(flux, balance, 1e-9 * steps);

            const auto times = oracle_spike_times(init.residuals(x, y), inputs, omega);
            std::vector<int> got;
            for (std::size_t t = 0; t < steps; ++t) {
                if (sim.stream.plane(t).at(x, y)) got.push_back(static_cast<int>(t));
            }
            EXPECT_EQ(got, times);
        }
    }
}

TEST_P(SpikeProperties, MoreFluxNeverFewerSpikes) {
    std::mt19937_64 rng(GetParam());
    std::uniform_real_distribution<double> dist(0.0, 1.5);
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    LuminanceSequence low, high;
    for (int t = 0; t < 100; ++t) {
        GrayImage a(6, 6), b(6, 6);
        for (std::size_t i = 0; i < a.values().size(); ++i) {
            a.values()[i] = dist(rng);
            b.values()[i] = a.values()[i] + bump(rng);
        }
        low.push_back(a);
        high.push_back(b);
    }
    const auto sl = simulate_stream(low, 2.0).stream;
    const auto sh = simulate_stream(high, 2.0).stream;
    for (std::size_t y = 0; y < 6; ++y) {
        for (std::size_t x = 0; x < 6; ++x) EXPECT_LE(sl.pixel_count(x, y), sh.pixel_count(x, y));
    }
}

TEST_P(SpikeProperties, Deterministic) {
    const auto frames = [&] {
        LuminanceSequence f;
        for (int t = 0; t < 20; ++t) {
            f.push_back(testing::random_image<1>(9, 4, GetParam() * 100 + t, 0.0, 2.0));
        }
        return f;
    }();
    const auto a = simulate_stream(frames, 2.0, AccumulatorState::random(9, 4, 2.0, GetParam()));
    const auto b = simulate_stream(frames, 2.0, AccumulatorState::random(9, 4, 2.0, GetParam()));
    EXPECT_EQ(a.stream, b.stream);
    EXPECT_EQ(a.final_state.residuals, b.final_state.residuals);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SpikeProperties, ::testing::Range<std::uint64_t>(1, 9));

TEST(AccumulatorState, RandomInitIsInRangeAndSeeded) {
    const auto a = AccumulatorState::random(20, 20, 2.0, 5);
    const auto b = AccumulatorState::random(20, 20, 2.0, 5);
    const auto c = AccumulatorState::random(20, 20, 2.0, 6);
    EXPECT_EQ(a.residuals, b.residuals);
    EXPECT_NE(a.residuals, c.residuals);
    for (double v : a.residuals.values()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 2.0);
    }
}

} // namespace
} // namespace spikedeblur
