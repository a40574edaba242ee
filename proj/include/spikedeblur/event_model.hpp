// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "spikedeblur/spike_model.hpp"

namespace spikedeblur {

struct EventRecord {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::int64_t t = 0;
    int polarity = 1; // +1 or -1

    friend bool operator==(const EventRecord &, const EventRecord &) = default;
};

struct EventOptions {
    /// Threshold log(log_eps + I) instead of I.
    bool log_intensity = false;
    double log_eps = 1e-3;
};

/*
 * Contrast-threshold event camera. Each pixel keeps a reference brightness,
 * initialized from the first frame. Whenever |b - ref| >= theta an event with
 * polarity sign(b - ref) is emitted and ref is reset to b, so a pixel fires at
 * most once per frame. Events are ordered pixel-major (row-major pixels), then
 * by time.
 */
std::vector<EventRecord> simulate_events(const LuminanceSequence &frames, double theta,
                                         const EventOptions &options = {});

/// Events seen at full rate minus events seen when only every `stride`-th frame
/// is observed. Signed: coarse sampling can also shift reference levels.
std::int64_t missed_event_count(const LuminanceSequence &frames, double theta, int stride,
                                const EventOptions &options = {});

/// Dense MLP described by its layer widths n_0 .. n_L.
struct CostModel {
    std::vector<std::int64_t> layer_widths;

    void validate() const;
};

/// Multiplications of one forward pass: sum_i n_i * n_{i+1}.
std::int64_t mlp_inference_cost(const CostModel &model);

enum class SupervisionMode { kEvent, kSpike };

/// Event supervision renders every sampled timestamp (N * C); spike
/// supervision renders once and adds the converter layer (C + n_{L-1} * n_L).
std::int64_t supervision_cost(const CostModel &model, std::int64_t sampled_timestamps,
                              SupervisionMode mode);

} // namespace spikedeblur
