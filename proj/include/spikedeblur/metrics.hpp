// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include "spikedeblur/image.hpp"

namespace spikedeblur {

/// PSNR of identical inputs.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

struct SsimOptions {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
};

struct MetricReport {
    double psnr_db = 0.0;
    double ssim = 0.0;
};

/// 10 log10(max^2 / MSE) over all samples; +inf when MSE is zero.
double psnr(std::span<const double> a, std::span<const double> b, double max_value = 1.0);

/// Mean SSIM of one channel (stride `channels`, offset `channel`) over all
/// fully contained Gaussian windows.
double ssim_channel(std::span<const double> a, std::span<const double> b, std::size_t width,
                    std::size_t height, std::size_t channels, std::size_t channel,
                    double max_value, const SsimOptions &options);

template <std::size_t C>
double psnr(const Image<C> &a, const Image<C> &b, double max_value = 1.0) {
    require_same_shape(a, b, "psnr");
    return psnr(a.values(), b.values(), max_value);
}

/// SSIM averaged over channels.
template <std::size_t C>
double ssim(const Image<C> &a, const Image<C> &b, double max_value = 1.0,
            const SsimOptions &options = {}) {
    require_same_shape(a, b, "ssim");
    double sum = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        sum += ssim_channel(a.values(), b.values(), a.width(), a.height(), C, c, max_value,
                            options);
    }
    return sum / static_cast<double>(C);
}

template <std::size_t C>
MetricReport compare(const Image<C> &a, const Image<C> &b, double max_value = 1.0) {
    return {psnr(a, b, max_value), ssim(a, b, max_value)};
}

} // namespace spikedeblur
