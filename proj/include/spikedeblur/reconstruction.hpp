// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spikedeblur/image.hpp"
#include "spikedeblur/spike_model.hpp"

namespace spikedeblur {

inline constexpr int kDefaultTfpWindow = 6;

enum class TextureSource { kTfi, kTfp };

/// Grayscale texture in the same intensity units that drove the simulator.
struct TextureImage {
    GrayImage values;
    TextureSource source = TextureSource::kTfi;
    std::int64_t timestamp_index = 0;
};

struct TfsTargets {
    TextureImage tfi;
    TextureImage tfp;
    std::int64_t timestamp_index = 0;
};

/// Texture from interval: omega / ISI, where ISI is the gap between the two
/// most recent spikes at or before `t`. Pixels with fewer than two spikes so
/// far read 0.
TextureImage tfi(const SpikeStream &stream, std::int64_t t);

/// Texture from playback: (spikes in [t - window + 1, t]) / window * c.
/// `c` defaults to the stream's omega.
TextureImage tfp(const SpikeStream &stream, std::int64_t t, int window = kDefaultTfpWindow,
                 std::optional<double> c = std::nullopt);

TfsTargets tfs_targets(const SpikeStream &stream, std::int64_t t, int window = kDefaultTfpWindow,
                       std::optional<double> c = std::nullopt);

/// Streaming TFP over planes fed in timestamp order. Keeps a ring of the
/// last `window` planes and a running per-pixel count.
class TfpAccumulator {
public:
    TfpAccumulator(std::size_t width, std::size_t height, int window, double c);

    void push(const SpikePlane &plane);
    /// True once `window` planes have been pushed.
    bool ready() const { return pushed_ >= static_cast<std::size_t>(window_); }
    /// Texture for the most recently pushed timestamp.
    TextureImage current() const;

private:
    std::size_t width_;
    std::size_t height_;
    int window_;
    double c_;
    std::size_t pushed_ = 0;
    std::int64_t last_timestamp_ = -1;
    std::vector<std::vector<std::uint8_t>> ring_;
    std::vector<std::uint32_t> counts_;
};

} // namespace spikedeblur
