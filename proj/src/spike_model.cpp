// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/spike_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace spikedeblur {

AccumulatorState AccumulatorState::zeros(std::size_t width, std::size_t height, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("accumulator: omega must be finite and > 0");
    }
    return AccumulatorState{GrayImage(width, height, 0.0), omega};
}

AccumulatorState AccumulatorState::random(std::size_t width, std::size_t height, double omega,
                                          std::uint64_t seed) {
    AccumulatorState state = zeros(width, height, omega);
    std::mt19937_64 rng(seed);
    for (double &r : state.residuals.values()) {
        // 53 random mantissa bits -> [0, 1); portable across standard libraries.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        r = std::min(u * omega, std::nextafter(omega, 0.0));
    }
    return state;
}

std::size_t SpikePlane::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

SpikeStream::SpikeStream(std::size_t width, std::size_t height, double omega,
                         double sample_rate_hz)
    : width_(width), height_(height), omega_(omega), sample_rate_hz_(sample_rate_hz) {
    if (width == 0 || height == 0) {
        throw std::invalid_argument("spike stream: width and height must be positive");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("spike stream: omega must be finite and > 0");
    }
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw std::invalid_argument("spike stream: sample rate must be finite and > 0");
    }
}

void SpikeStream::push_back(SpikePlane plane) {
    if (plane.width() != width_ || plane.height() != height_) {
        throw std::invalid_argument("spike stream: plane dimensions differ from stream");
    }
    if (plane.timestamp_index() != static_cast<std::int64_t>(planes_.size())) {
        throw std::invalid_argument("spike stream: timestamps must be contiguous from 0 (got " +
                                    std::to_string(plane.timestamp_index()) + ", expected " +
                                    std::to_string(planes_.size()) + ")");
    }
    planes_.push_back(std::move(plane));
}

std::size_t SpikeStream::pixel_count(std::size_t x, std::size_t y) const {
    std::size_t n = 0;
    for (const auto &p : planes_) n += p.at(x, y) ? 1 : 0;
    return n;
}

std::pair<AccumulatorState, SpikePlane> accumulate_step(const AccumulatorState &state,
                                                        const LuminanceFrame &frame) {
    require_same_shape(state.residuals, frame.values, "accumulate_step");
    const double omega = state.omega;
    const auto in = frame.values.values();
    for (double v : in) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("accumulate_step: non-finite intensity");
        }
        if (v < 0.0 || v > omega) {
            throw std::invalid_argument("accumulate_step: intensity " + std::to_string(v) +
                                        " outside [0, omega]");
        }
    }

    AccumulatorState next{GrayImage(state.residuals.width(), state.residuals.height()), omega};
    SpikePlane plane(state.residuals.width(), state.residuals.height(), frame.timestamp_index);
    const auto old_res = state.residuals.values();
    auto new_res = next.residuals.values();
    auto bits = plane.bits();
    const double below_omega = std::nextafter(omega, 0.0);
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double sum = old_res[i] + in[i];
        if (sum >= omega) {
            bits[i] = 1;
            // sum lies in [omega, 2 omega] so the subtraction is exact.
            new_res[i] = std::min(sum - omega, below_omega);
        } else {
            new_res[i] = sum;
        }
    }
    return {std::move(next), std::move(plane)};
}

SimulationResult simulate_stream(const LuminanceSequence &frames, double omega,
                                 const std::optional<AccumulatorState> &init,
                                 double sample_rate_hz) {
    if (frames.empty()) {
        throw std::invalid_argument("simulate_stream: empty frame sequence");
    }
    const std::size_t w = frames.front().width();
    const std::size_t h = frames.front().height();
    AccumulatorState state = init ? *init : AccumulatorState::zeros(w, h, omega);
    if (state.omega != omega) {
        throw std::invalid_argument("simulate_stream: initial state omega differs from omega");
    }
    SpikeStream stream(w, h, omega, sample_rate_hz);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        LuminanceFrame frame{frames[i], static_cast<std::int64_t>(i)};
        auto [next, plane] = accumulate_step(state, frame);
        state = std::move(next);
        stream.push_back(std::move(plane));
    }
    return {std::move(stream), std::move(state)};
}

} // namespace spikedeblur
