// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/event_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spikedeblur {

namespace {

double brightness(double intensity, const EventOptions &options) {
    return options.log_intensity ? std::log(options.log_eps + intensity) : intensity;
}

// Index list of observed frames; the event timestamp keeps the original index.
std::vector<EventRecord> run_events(const LuminanceSequence &frames, double theta,
                                    const std::vector<std::size_t> &observed,
                                    const EventOptions &options) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw std::invalid_argument("simulate_events: theta must be finite and > 0");
    }
    if (frames.empty()) throw std::invalid_argument("simulate_events: empty frame sequence");
    const GrayImage &first = frames.front();
    for (const auto &f : frames) require_same_shape(first, f, "simulate_events");

    const std::size_t w = first.width();
    const std::size_t h = first.height();
    std::vector<EventRecord> events;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double ref = brightness(frames[observed.front()](x, y), options);
            for (std::size_t k = 1; k < observed.size(); ++k) {
                const std::size_t t = observed[k];
                const double b = brightness(frames[t](x, y), options);
                const double diff = b - ref;
                if (std::abs(diff) >= theta) {
                    events.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                                      static_cast<std::int64_t>(t), diff > 0.0 ? 1 : -1});
                    ref = b;
                }
            }
        }
    }
    return events;
}

std::vector<std::size_t> strided_indices(std::size_t count, int stride) {
    std::vector<std::size_t> idx;
    for (std::size_t t = 0; t < count; t += static_cast<std::size_t>(stride)) idx.push_back(t);
    return idx;
}

} // namespace

std::vector<EventRecord> simulate_events(const LuminanceSequence &frames, double theta,
                                         const EventOptions &options) {
    return run_events(frames, theta, strided_indices(frames.size(), 1), options);
}

std::int64_t missed_event_count(const LuminanceSequence &frames, double theta, int stride,
                                const EventOptions &options) {
    if (stride < 1) throw std::invalid_argument("missed_event_count: stride must be >= 1");
    const auto fine = run_events(frames, theta, strided_indices(frames.size(), 1), options);
    if (stride == 1) return 0;
    const auto coarse = run_events(frames, theta, strided_indices(frames.size(), stride), options);
    return static_cast<std::int64_t>(fine.size()) - static_cast<std::int64_t>(coarse.size());
}

void CostModel::validate() const {
    if (layer_widths.size() < 2) {
        throw std::invalid_argument("CostModel: need at least two layer widths");
    }
    for (auto n : layer_widths) {
        if (n < 1) throw std::invalid_argument("CostModel: layer widths must be >= 1");
    }
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("cost model overflow");
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("cost model overflow");
    return out;
}

} // namespace

std::int64_t mlp_inference_cost(const CostModel &model) {
    model.validate();
    std::int64_t cost = 0;
    for (std::size_t i = 0; i + 1 < model.layer_widths.size(); ++i) {
        cost = checked_add(cost, checked_mul(model.layer_widths[i], model.layer_widths[i + 1]));
    }
    return cost;
}

std::int64_t supervision_cost(const CostModel &model, std::int64_t sampled_timestamps,
                              SupervisionMode mode) {
    if (sampled_timestamps < 1) {
        throw std::invalid_argument("supervision_cost: sampled timestamps must be >= 1");
    }
    const std::int64_t c = mlp_inference_cost(model);
    if (mode == SupervisionMode::kEvent) return checked_mul(sampled_timestamps, c);
    const auto &n = model.layer_widths;
    return checked_add(c, checked_mul(n[n.size() - 2], n.back()));
}

} // namespace spikedeblur
