// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/color.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace spikedeblur {

bool ConverterWeights::finite() const {
    return std::isfinite(r) && std::isfinite(g) && std::isfinite(b);
}

double distance(const ConverterWeights &a, const ConverterWeights &b) {
    const double dr = a.r - b.r;
    const double dg = a.g - b.g;
    const double db = a.b - b.b;
    return std::sqrt(dr * dr + dg * dg + db * db);
}

void validate_rgb(const RgbFrame &frame, const char *what) {
    for (double v : frame.values()) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw std::invalid_argument(std::string(what) + ": RGB values must lie in [0, 1]");
        }
    }
}

RgbFrame synthesize_blur(std::span<const RgbFrame> burst) {
    if (burst.empty()) {
        throw std::invalid_argument("synthesize_blur: empty burst");
    }
    for (const auto &f : burst) {
        require_same_shape(burst.front(), f, "synthesize_blur");
        validate_rgb(f, "synthesize_blur");
    }

    RgbFrame out(burst.front().width(), burst.front().height(), 0.0);
    auto acc = out.values();
    for (const auto &f : burst) {
        const auto v = f.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    }
    const double n = static_cast<double>(burst.size());
    for (double &a : acc) a /= n;
    return out;
}

GrayImage rgb_to_gray_learned(const RgbFrame &frame, const ConverterWeights &weights) {
    if (!weights.finite()) {
        throw std::invalid_argument("rgb_to_gray_learned: non-finite converter weights");
    }
    GrayImage out(frame.width(), frame.height());
    const auto in = frame.values();
    auto gray = out.values();
    for (std::size_t i = 0; i < gray.size(); ++i) {
        gray[i] = weights.apply(in[3 * i], in[3 * i + 1], in[3 * i + 2]);
    }
    return out;
}

GrayImage rgb_to_gray_fixed(const RgbFrame &frame) {
    validate_rgb(frame, "rgb_to_gray_fixed");
    return rgb_to_gray_learned(frame, kStandardGrayWeights);
}

namespace {

// Euclidean projection onto the probability simplex (sort-based).
Eigen::Vector3d project_simplex(const Eigen::Vector3d &v) {
    std::array<double, 3> u{v[0], v[1], v[2]};
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (int i = 0; i < 3; ++i) {
        cumulative += u[i];
        const double t = (cumulative - 1.0) / (i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    return (v.array() - theta).cwiseMax(0.0);
}

} // namespace

ConverterFit fit_converter(std::span<const std::array<double, 3>> rgb_samples,
                           std::span<const double> gray_targets, FitOptions options) {
    if (rgb_samples.size() != gray_targets.size()) {
        throw std::invalid_argument("fit_converter: sample and target counts differ");
    }
    if (rgb_samples.empty()) {
        throw std::invalid_argument("fit_converter: no samples");
    }
    const auto n = static_cast<Eigen::Index>(rgb_samples.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto &s = rgb_samples[static_cast<std::size_t>(i)];
        design.row(i) << s[0], s[1], s[2];
        target[i] = gray_targets[static_cast<std::size_t>(i)];
    }
    if (!design.allFinite() || !target.allFinite()) {
        throw std::invalid_argument("fit_converter: non-finite samples");
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    cod.setThreshold(1e-12);
    Eigen::Vector3d w = cod.solve(target);
    if (options.project_to_simplex) w = project_simplex(w);

    ConverterFit fit;
    fit.weights = {w[0], w[1], w[2]};
    fit.residual_norm = (design * w - target).norm();
    fit.rank = static_cast<int>(cod.rank());
    fit.degenerate = fit.rank < 3;
    return fit;
}

} // namespace spikedeblur
