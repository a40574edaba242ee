// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spikedeblur/color.hpp"
#include "spikedeblur/metrics.hpp"
#include "spikedeblur/reconstruction.hpp"
#include "spikedeblur/spike_model.hpp"
#include "spikedeblur/tfs_loss.hpp"

namespace spikedeblur {

/*
 * Desk-scale non-blind deblurring with spike supervision.
 *
 * A sharp latent image L (W x H) is observed through K integer shifts
 * (dx_k, dy_k) bounded by a margin m. Sub-exposure k is the interior crop
 *   S_k L (x, y) = L(x + m + dx_k, y + m + dy_k),  (W-2m) x (H-2m),
 * the blurry RGB observation is mean_k S_k L, and every sub-exposure drives
 * `samples_per_shift` samples of the spike simulator with its fixed-weight
 * gray image. The solver recovers L from the blurry frame alone (color arm)
 * or with the TFI/TFP textures at the end of every sub-exposure (TfS arm).
 */

inline constexpr int kDefaultShakeMargin = 4;
inline constexpr int kDefaultSamplesPerShift = 32;

struct PixelShift {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const PixelShift &, const PixelShift &) = default;
};

struct ShakeTrajectory {
    std::vector<PixelShift> shifts;
    int margin = kDefaultShakeMargin;

    void validate() const;
};

/// Seeded random-walk camera shake starting at (0, 0), clamped to the margin.
ShakeTrajectory make_shake_trajectory(std::size_t length = kDefaultBurstLength,
                                      int margin = kDefaultShakeMargin, std::uint64_t seed = 0);

/// All shifts (0, 0).
ShakeTrajectory zero_trajectory(std::size_t length = kDefaultBurstLength, int margin = 0);

struct DeblurProblem {
    RgbFrame blurry;
    SpikeStream stream;
    ShakeTrajectory trajectory;
    TfsConfig cfg;
    int samples_per_shift = kDefaultSamplesPerShift;
    std::size_t latent_width = 0;
    std::size_t latent_height = 0;

    /// Stream index supervising sub-exposure k: the last sample of that shift.
    std::int64_t target_timestamp(std::size_t k) const;
};

/// Interior crop of `latent` seen under `shift`.
RgbFrame shift_crop(const RgbFrame &latent, PixelShift shift, int margin);

/// The sub-exposure burst of a latent image.
std::vector<RgbFrame> sub_exposures(const RgbFrame &latent, const ShakeTrajectory &trajectory);

/// mean_k S_k latent. Values are not clamped, so this is linear in `latent`.
RgbFrame forward_blur(const RgbFrame &latent, const ShakeTrajectory &trajectory);

struct ForgeOptions {
    int samples_per_shift = kDefaultSamplesPerShift;
    /// Seeded uniform accumulator init; zero init when false.
    bool random_init = true;
    double sample_rate_hz = kDefaultSampleRateHz;
    TfsConfig cfg{};
};

/// Builds the blurry observation and the spike stream from a sharp image.
/// Returns the problem and the held-out sharp reference.
std::pair<DeblurProblem, RgbFrame> forge_problem(const RgbFrame &sharp,
                                                 const ShakeTrajectory &trajectory, double omega,
                                                 std::uint64_t seed,
                                                 const ForgeOptions &options = {});

struct SolveOptions {
    bool use_tfs = true;
    int iterations = 600;
    /// Initial step; halved whenever a step would raise the objective.
    double step = 0.1;
};

struct DeblurResult {
    /// Latent estimate clamped to [0, 1].
    RgbFrame estimate;
    ConverterWeights converter;
    /// Objective after each iteration (nonincreasing).
    std::vector<double> loss_trace;
    double final_step = 0.0;
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string &what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<double> &trace() const { return trace_; }

private:
    std::vector<double> trace_;
};

/// Objective of the solver at (latent, converter); exposed for tests.
TfsLossParts deblur_objective(const DeblurProblem &problem, const RgbFrame &latent,
                              const ConverterWeights &converter, bool use_tfs);

DeblurResult solve(const DeblurProblem &problem, const SolveOptions &options = {});

MetricReport evaluate(const RgbFrame &estimate, const RgbFrame &reference);

/// Seeded test scene: smooth colored background with rectangles and discs,
/// all values in [0.15, 0.95].
RgbFrame make_synthetic_scene(std::size_t width, std::size_t height, std::uint64_t seed);

} // namespace spikedeblur
