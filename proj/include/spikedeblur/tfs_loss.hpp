// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "spikedeblur/color.hpp"
#include "spikedeblur/image.hpp"
#include "spikedeblur/reconstruction.hpp"
#include "spikedeblur/spike_model.hpp"

namespace spikedeblur {

inline constexpr double kDefaultTfsWeight = 0.0001;

/// How the TFI and TFP squared errors of one target are merged.
enum class CombineMode { kSum, kMean };

struct TfsConfig {
    double weight_w = kDefaultTfsWeight;
    int tfp_window = kDefaultTfpWindow;
    double omega = kDefaultOmega;
    /// Spike reconstructions supervising one view; must equal the target count.
    int recon_per_view_n = 1;
    CombineMode combine_mode = CombineMode::kMean;

    void validate() const;
};

/// Sum over pixels of |coarse - gt|^2 + |fine - gt|^2. A single-model caller
/// passes the same frame twice; the result is then twice its squared error.
double color_loss(const RgbFrame &pred_coarse, const RgbFrame &pred_fine, const RgbFrame &gt);

struct TfsLossParts {
    double total = 0.0;
    double color = 0.0;
    /// Unweighted spike term; total = color + weight_w * spike.
    double spike = 0.0;
};

/*
 * Texture-from-spike objective.
 *
 * spike_preds[k] is the rendered RGB frame supervised by targets[k]: its
 * gray conversion under `converter` is compared against both the TFI and the
 * TFP image of that target. Per target the two squared errors are summed or
 * averaged (CombineMode), then summed over targets.
 */
TfsLossParts tfs_loss(const RgbFrame &pred_coarse, const RgbFrame &pred_fine, const RgbFrame &gt,
                      std::span<const RgbFrame> spike_preds, const ConverterWeights &converter,
                      std::span<const TfsTargets> targets, const TfsConfig &cfg);

struct TfsGradient {
    RgbFrame d_coarse;
    RgbFrame d_fine;
    std::vector<RgbFrame> d_spike_preds;
    ConverterWeights d_converter;
};

/// Analytic gradient of tfs_loss(...).total with respect to every prediction
/// pixel and the converter weights.
TfsGradient tfs_loss_gradient(const RgbFrame &pred_coarse, const RgbFrame &pred_fine,
                              const RgbFrame &gt, std::span<const RgbFrame> spike_preds,
                              const ConverterWeights &converter,
                              std::span<const TfsTargets> targets, const TfsConfig &cfg);

} // namespace spikedeblur
