// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/reconstruction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spikedeblur {

namespace {

void check_time(const SpikeStream &stream, std::int64_t t, const char *what) {
    if (t < 0 || t >= static_cast<std::int64_t>(stream.size())) {
        throw std::out_of_range(std::string(what) + ": t=" + std::to_string(t) +
                                " outside stream of length " + std::to_string(stream.size()));
    }
}

void check_window(int window, const char *what) {
    if (window < 1) {
        throw std::invalid_argument(std::string(what) + ": window must be >= 1");
    }
}

} // namespace

TextureImage tfi(const SpikeStream &stream, std::int64_t t) {
    check_time(stream, t, "tfi");
    const std::size_t w = stream.width();
    const std::size_t h = stream.height();
    const std::size_t n = w * h;
    TextureImage out{GrayImage(w, h, 0.0), TextureSource::kTfi, t};

    // Walk backwards once, recording the last and second-to-last spike per pixel.
    std::vector<std::int64_t> last(n, -1);
    std::vector<std::int64_t> prev(n, -1);
    std::size_t resolved = 0;
    for (std::int64_t k = t; k >= 0 && resolved < n; --k) {
        const auto bits = stream.plane(static_cast<std::size_t>(k)).bits();
        for (std::size_t i = 0; i < n; ++i) {
            if (!bits[i] || prev[i] >= 0) continue;
            if (last[i] < 0) {
                last[i] = k;
            } else {
                prev[i] = k;
                ++resolved;
            }
        }
    }

    auto values = out.values.values();
    for (std::size_t i = 0; i < n; ++i) {
        if (prev[i] >= 0) {
            values[i] = stream.omega() / static_cast<double>(last[i] - prev[i]);
        }
    }
    return out;
}

TextureImage tfp(const SpikeStream &stream, std::int64_t t, int window, std::optional<double> c) {
    check_window(window, "tfp");
    check_time(stream, t, "tfp");
    if (t < window - 1) {
        throw std::out_of_range("tfp: t=" + std::to_string(t) + " is smaller than window-1=" +
                                std::to_string(window - 1));
    }
    const double scale = c.value_or(stream.omega());
    const std::size_t n = stream.width() * stream.height();
    std::vector<std::uint32_t> counts(n, 0);
    for (std::int64_t k = t - window + 1; k <= t; ++k) {
        const auto bits = stream.plane(static_cast<std::size_t>(k)).bits();
        for (std::size_t i = 0; i < n; ++i) counts[i] += bits[i];
    }
    TextureImage out{GrayImage(stream.width(), stream.height()), TextureSource::kTfp, t};
    auto values = out.values.values();
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = static_cast<double>(counts[i]) / window * scale;
    }
    return out;
}

TfsTargets tfs_targets(const SpikeStream &stream, std::int64_t t, int window,
                       std::optional<double> c) {
    return TfsTargets{tfi(stream, t), tfp(stream, t, window, c), t};
}

TfpAccumulator::TfpAccumulator(std::size_t width, std::size_t height, int window, double c)
    : width_(width), height_(height), window_(window), c_(c) {
    check_window(window, "TfpAccumulator");
    ring_.assign(static_cast<std::size_t>(window), std::vector<std::uint8_t>(width * height, 0));
    counts_.assign(width * height, 0);
}

void TfpAccumulator::push(const SpikePlane &plane) {
    if (plane.width() != width_ || plane.height() != height_) {
        throw std::invalid_argument("TfpAccumulator: plane dimensions differ");
    }
    if (plane.timestamp_index() != last_timestamp_ + 1) {
        throw std::invalid_argument("TfpAccumulator: planes must arrive in timestamp order");
    }
    auto &slot = ring_[pushed_ % ring_.size()];
    const auto bits = plane.bits();
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] = counts_[i] - slot[i] + bits[i];
        slot[i] = bits[i];
    }
    ++pushed_;
    last_timestamp_ = plane.timestamp_index();
}

TextureImage TfpAccumulator::current() const {
    if (!ready()) {
        throw std::logic_error("TfpAccumulator: fewer than window planes pushed");
    }
    TextureImage out{GrayImage(width_, height_), TextureSource::kTfp, last_timestamp_};
    auto values = out.values.values();
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        values[i] = static_cast<double>(counts_[i]) / window_ * c_;
    }
    return out;
}

} // namespace spikedeblur
