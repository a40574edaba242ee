// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "spikedeblur/image.hpp"

namespace spikedeblur {

inline constexpr std::size_t kDefaultBurstLength = 18;

/// Linear RGB -> gray weights. Inputs are treated as linear (no gamma).
struct ConverterWeights {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    double apply(double red, double green, double blue) const {
        return r * red + g * green + b * blue;
    }
    bool finite() const;

    friend bool operator==(const ConverterWeights &, const ConverterWeights &) = default;
};

inline constexpr ConverterWeights kStandardGrayWeights{0.2989, 0.5870, 0.1140};
inline constexpr ConverterWeights kUniformGrayWeights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

double distance(const ConverterWeights &a, const ConverterWeights &b);

/// Pixel-wise arithmetic mean of an equally sized burst.
RgbFrame synthesize_blur(std::span<const RgbFrame> burst);

GrayImage rgb_to_gray_fixed(const RgbFrame &frame);
GrayImage rgb_to_gray_learned(const RgbFrame &frame, const ConverterWeights &weights);

/// Checks that every value is finite and inside [0, 1].
void validate_rgb(const RgbFrame &frame, const char *what);

struct ConverterFit {
    ConverterWeights weights;
    /// Euclidean norm of (X w - y) at the returned weights.
    double residual_norm = 0.0;
    /// Rank of the N x 3 design matrix; the fit is unique only at rank 3.
    int rank = 0;
    bool degenerate = false;
};

struct FitOptions {
    /// Project the least-squares solution onto {w >= 0, sum w = 1}.
    bool project_to_simplex = false;
};

/// Least-squares weights minimizing sum (w . rgb_i - gray_i)^2. Rank-deficient
/// designs get the minimum-norm solution and `degenerate = true`.
ConverterFit fit_converter(std::span<const std::array<double, 3>> rgb_samples,
                           std::span<const double> gray_targets, FitOptions options = {});

} // namespace spikedeblur
