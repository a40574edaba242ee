// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikedeblur {

/// Dense row-major image of doubles with interleaved channels.
template <std::size_t Channels>
class Image {
public:
    static constexpr std::size_t kChannels = Channels;

    Image() = default;
    Image(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), data_(width * height * Channels, fill) {}

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t pixel_count() const { return width_ * height_; }
    bool empty() const { return data_.empty(); }

    double &operator()(std::size_t x, std::size_t y, std::size_t c = 0) {
        return data_[(y * width_ + x) * Channels + c];
    }
    double operator()(std::size_t x, std::size_t y, std::size_t c = 0) const {
        return data_[(y * width_ + x) * Channels + c];
    }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    bool same_shape(const Image &other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const Image &, const Image &) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

using GrayImage = Image<1>;
using RgbFrame = Image<3>;

template <std::size_t C>
void require_same_shape(const Image<C> &a, const Image<C> &b, const char *what) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                    " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()) + ")");
    }
}

} // namespace spikedeblur
