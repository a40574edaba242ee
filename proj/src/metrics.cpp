// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spikedeblur {

double psnr(std::span<const double> a, std::span<const double> b, double max_value) {
    if (a.size() != b.size()) throw std::invalid_argument("psnr: dimension mismatch");
    if (a.empty()) throw std::invalid_argument("psnr: empty images");
    if (!(max_value > 0.0)) throw std::invalid_argument("psnr: max_value must be > 0");
    double sse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sse += d * d;
    }
    if (sse == 0.0) return kPsnrIdentical;
    const double mse = sse / static_cast<double>(a.size());
    return 10.0 * std::log10(max_value * max_value / mse);
}

namespace {

std::vector<double> gaussian_taps(int window, double sigma) {
    std::vector<double> taps(static_cast<std::size_t>(window));
    const double center = (window - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < window; ++i) {
        const double d = i - center;
        taps[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += taps[static_cast<std::size_t>(i)];
    }
    for (double &t : taps) t /= sum;
    return taps;
}

// Separable "valid" filtering: output is (width-window+1) x (height-window+1).
std::vector<double> filter_valid(const std::vector<double> &img, std::size_t width,
                                 std::size_t height, const std::vector<double> &taps) {
    const std::size_t k = taps.size();
    const std::size_t ow = width - k + 1;
    const std::size_t oh = height - k + 1;
    std::vector<double> rows(ow * height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += taps[i] * img[y * width + x + i];
            rows[y * ow + x] = s;
        }
    }
    std::vector<double> out(ow * oh);
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += taps[i] * rows[(y + i) * ow + x];
            out[y * ow + x] = s;
        }
    }
    return out;
}

} // namespace

double ssim_channel(std::span<const double> a, std::span<const double> b, std::size_t width,
                    std::size_t height, std::size_t channels, std::size_t channel,
                    double max_value, const SsimOptions &options) {
    if (a.size() != b.size() || a.size() != width * height * channels || channel >= channels) {
        throw std::invalid_argument("ssim: dimension mismatch");
    }
    if (options.window < 1 || width < static_cast<std::size_t>(options.window) ||
        height < static_cast<std::size_t>(options.window)) {
        throw std::invalid_argument("ssim: image smaller than the window");
    }
    if (!(max_value > 0.0)) throw std::invalid_argument("ssim: max_value must be > 0");

    const std::size_t n = width * height;
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a[i * channels + channel];
        y[i] = b[i * channels + channel];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto taps = gaussian_taps(options.window, options.sigma);
    const auto mu_x = filter_valid(x, width, height, taps);
    const auto mu_y = filter_valid(y, width, height, taps);
    const auto e_xx = filter_valid(xx, width, height, taps);
    const auto e_yy = filter_valid(yy, width, height, taps);
    const auto e_xy = filter_valid(xy, width, height, taps);

    const double c1 = (options.k1 * max_value) * (options.k1 * max_value);
    const double c2 = (options.k2 * max_value) * (options.k2 * max_value);
    double sum = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double mx = mu_x[i];
        const double my = mu_y[i];
        const double vx = e_xx[i] - mx * mx;
        const double vy = e_yy[i] - my * my;
        const double cov = e_xy[i] - mx * my;
        sum += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    return std::clamp(sum / static_cast<double>(mu_x.size()), -1.0, 1.0);
}

} // namespace spikedeblur
