// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spikedeblur/image.hpp"

namespace spikedeblur {

inline constexpr double kDefaultOmega = 2.0;
inline constexpr double kDefaultSampleRateHz = 40000.0;

/*
 * Integrate-and-fire spike camera model.
 *
 * Every pixel owns an accumulator A in [0, omega). Each sample adds the
 * incoming intensity I; when A + I reaches omega the pixel fires a single
 * spike and keeps the surplus (A + I - omega). Because only one spike can
 * be emitted per sample, inputs are restricted to I in [0, omega] so that
 * A_old + I == spike * omega + A_new holds exactly per pixel.
 */

struct AccumulatorState {
    GrayImage residuals;
    double omega = kDefaultOmega;

    static AccumulatorState zeros(std::size_t width, std::size_t height,
                                  double omega = kDefaultOmega);
    /// Uniform residuals in [0, omega) for de-phasing pixels; reproducible per seed.
    static AccumulatorState random(std::size_t width, std::size_t height, double omega,
                                   std::uint64_t seed);
};

struct LuminanceFrame {
    GrayImage values;
    std::int64_t timestamp_index = 0;
};

using LuminanceSequence = std::vector<GrayImage>;

class SpikePlane {
public:
    SpikePlane() = default;
    SpikePlane(std::size_t width, std::size_t height, std::int64_t timestamp_index)
        : width_(width), height_(height), timestamp_index_(timestamp_index),
          bits_(width * height, 0) {}

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::int64_t timestamp_index() const { return timestamp_index_; }

    bool at(std::size_t x, std::size_t y) const { return bits_[y * width_ + x] != 0; }
    void set(std::size_t x, std::size_t y, bool spike) { bits_[y * width_ + x] = spike ? 1 : 0; }

    /// One byte per pixel, row-major, each 0 or 1.
    std::span<const std::uint8_t> bits() const { return bits_; }
    std::span<std::uint8_t> bits() { return bits_; }

    std::size_t count() const;

    friend bool operator==(const SpikePlane &, const SpikePlane &) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::int64_t timestamp_index_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Ordered spike planes with timestamps 0, 1, 2, ... and shared dimensions.
class SpikeStream {
public:
    SpikeStream(std::size_t width, std::size_t height, double omega = kDefaultOmega,
                double sample_rate_hz = kDefaultSampleRateHz);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    double omega() const { return omega_; }
    double sample_rate_hz() const { return sample_rate_hz_; }
    std::size_t size() const { return planes_.size(); }
    bool empty() const { return planes_.empty(); }

    const SpikePlane &plane(std::size_t index) const { return planes_.at(index); }
    std::span<const SpikePlane> planes() const { return planes_; }

    /// Seconds from the first sample to `index`.
    double time_of(std::int64_t index) const {
        return static_cast<double>(index) / sample_rate_hz_;
    }

    /// Appends a plane; its timestamp must equal the current size and its
    /// dimensions must match the stream.
    void push_back(SpikePlane plane);

    /// Number of spikes at pixel (x, y) over the whole stream.
    std::size_t pixel_count(std::size_t x, std::size_t y) const;

    friend bool operator==(const SpikeStream &, const SpikeStream &) = default;

private:
    std::size_t width_;
    std::size_t height_;
    double omega_;
    double sample_rate_hz_;
    std::vector<SpikePlane> planes_;
};

/// Advances every pixel accumulator by one sample and returns the new state
/// together with the fired spikes. Throws std::invalid_argument on a
/// dimension mismatch or any intensity that is non-finite or outside [0, omega].
std::pair<AccumulatorState, SpikePlane> accumulate_step(const AccumulatorState &state,
                                                        const LuminanceFrame &frame);

struct SimulationResult {
    SpikeStream stream;
    AccumulatorState final_state;
};

/// Runs accumulate_step over the whole sequence. A missing `init` means all
/// accumulators start at zero.
SimulationResult simulate_stream(const LuminanceSequence &frames, double omega,
                                 const std::optional<AccumulatorState> &init = std::nullopt,
                                 double sample_rate_hz = kDefaultSampleRateHz);

} // namespace spikedeblur
