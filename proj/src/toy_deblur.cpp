// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/toy_deblur.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace spikedeblur {

void ShakeTrajectory::validate() const {
    if (shifts.size() < 2) throw std::invalid_argument("ShakeTrajectory: need at least 2 shifts");
    if (margin < 0) throw std::invalid_argument("ShakeTrajectory: margin must be >= 0");
    for (const auto &s : shifts) {
        if (std::abs(s.dx) > margin || std::abs(s.dy) > margin) {
            throw std::invalid_argument("ShakeTrajectory: shift (" + std::to_string(s.dx) + "," +
                                        std::to_string(s.dy) + ") exceeds margin " +
                                        std::to_string(margin));
        }
    }
}

ShakeTrajectory make_shake_trajectory(std::size_t length, int margin, std::uint64_t seed) {
    ShakeTrajectory traj;
    traj.margin = margin;
    std::mt19937_64 rng(seed);
    PixelShift pos{0, 0};
    for (std::size_t k = 0; k < length; ++k) {
        traj.shifts.push_back(pos);
        // Step in {-1, 0, 1} per axis, reflected at the margin.
        const int sx = static_cast<int>(rng() % 3) - 1;
        const int sy = static_cast<int>(rng() % 3) - 1;
        pos.dx = std::abs(pos.dx + sx) > margin ? pos.dx - sx : pos.dx + sx;
        pos.dy = std::abs(pos.dy + sy) > margin ? pos.dy - sy : pos.dy + sy;
    }
    traj.validate();
    return traj;
}

ShakeTrajectory zero_trajectory(std::size_t length, int margin) {
    ShakeTrajectory traj{std::vector<PixelShift>(length), margin};
    traj.validate();
    return traj;
}

std::int64_t DeblurProblem::target_timestamp(std::size_t k) const {
    return static_cast<std::int64_t>((k + 1) * static_cast<std::size_t>(samples_per_shift)) - 1;
}

RgbFrame shift_crop(const RgbFrame &latent, PixelShift shift, int margin) {
    const std::size_t m2 = 2 * static_cast<std::size_t>(margin);
    const std::size_t w = latent.width() - m2;
    const std::size_t h = latent.height() - m2;
    RgbFrame out(w, h);
    const std::size_t ox = static_cast<std::size_t>(margin + shift.dx);
    const std::size_t oy = static_cast<std::size_t>(margin + shift.dy);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t c = 0; c < 3; ++c) out(x, y, c) = latent(x + ox, y + oy, c);
        }
    }
    return out;
}

namespace {

void check_latent(const RgbFrame &latent, const ShakeTrajectory &trajectory) {
    trajectory.validate();
    const std::size_t m2 = 2 * static_cast<std::size_t>(trajectory.margin);
    if (latent.width() <= m2 || latent.height() <= m2) {
        throw std::invalid_argument("toy_deblur: image too small for shift margin " +
                                    std::to_string(trajectory.margin));
    }
}

// Adds S_k^T grad into the latent gradient.
void scatter_add(RgbFrame &latent_grad, const RgbFrame &crop_grad, PixelShift shift, int margin,
                 double scale) {
    const std::size_t ox = static_cast<std::size_t>(margin + shift.dx);
    const std::size_t oy = static_cast<std::size_t>(margin + shift.dy);
    for (std::size_t y = 0; y < crop_grad.height(); ++y) {
        for (std::size_t x = 0; x < crop_grad.width(); ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                latent_grad(x + ox, y + oy, c) += scale * crop_grad(x, y, c);
            }
        }
    }
}

RgbFrame mean_of(const std::vector<RgbFrame> &frames) {
    RgbFrame out(frames.front().width(), frames.front().height(), 0.0);
    auto acc = out.values();
    for (const auto &f : frames) {
        const auto v = f.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    }
    const double n = static_cast<double>(frames.size());
    for (double &a : acc) a /= n;
    return out;
}

} // namespace

std::vector<RgbFrame> sub_exposures(const RgbFrame &latent, const ShakeTrajectory &trajectory) {
    check_latent(latent, trajectory);
    std::vector<RgbFrame> burst;
    burst.reserve(trajectory.shifts.size());
    for (const auto &s : trajectory.shifts) burst.push_back(shift_crop(latent, s, trajectory.margin));
    return burst;
}

RgbFrame forward_blur(const RgbFrame &latent, const ShakeTrajectory &trajectory) {
    return mean_of(sub_exposures(latent, trajectory));
}

std::pair<DeblurProblem, RgbFrame> forge_problem(const RgbFrame &sharp,
                                                 const ShakeTrajectory &trajectory, double omega,
                                                 std::uint64_t seed, const ForgeOptions &options) {
    check_latent(sharp, trajectory);
    validate_rgb(sharp, "forge_problem");
    if (options.samples_per_shift < options.cfg.tfp_window) {
        throw std::invalid_argument("forge_problem: samples_per_shift must be >= the TFP window");
    }
    const auto burst = sub_exposures(sharp, trajectory);
    RgbFrame blurry = synthesize_blur(burst);

    LuminanceSequence luminance;
    luminance.reserve(burst.size() * static_cast<std::size_t>(options.samples_per_shift));
    for (const auto &frame : burst) {
        const GrayImage gray = rgb_to_gray_fixed(frame);
        for (int s = 0; s < options.samples_per_shift; ++s) luminance.push_back(gray);
    }
    const std::size_t w = blurry.width();
    const std::size_t h = blurry.height();
    auto init = options.random_init ? AccumulatorState::random(w, h, omega, seed)
                                    : AccumulatorState::zeros(w, h, omega);
    auto sim = simulate_stream(luminance, omega, init, options.sample_rate_hz);

    TfsConfig cfg = options.cfg;
    cfg.omega = omega;
    cfg.recon_per_view_n = static_cast<int>(trajectory.shifts.size());
    DeblurProblem problem{std::move(blurry),  std::move(sim.stream), trajectory,
                          cfg,                options.samples_per_shift,
                          sharp.width(),      sharp.height()};
    return {std::move(problem), sharp};
}

namespace {

std::vector<TfsTargets> build_targets(const DeblurProblem &problem) {
    std::vector<TfsTargets> targets;
    for (std::size_t k = 0; k < problem.trajectory.shifts.size(); ++k) {
        targets.push_back(tfs_targets(problem.stream, problem.target_timestamp(k),
                                      problem.cfg.tfp_window, problem.cfg.omega));
    }
    return targets;
}

struct Evaluation {
    double value = 0.0;
    RgbFrame d_latent;
    ConverterWeights d_converter;
};

class Objective {
public:
    Objective(const DeblurProblem &problem, bool use_tfs)
        : problem_(problem), use_tfs_(use_tfs) {
        if (use_tfs_) targets_ = build_targets(problem);
    }

    TfsLossParts parts(const RgbFrame &latent, const ConverterWeights &converter) const {
        const auto burst = sub_exposures(latent, problem_.trajectory);
        const RgbFrame pred = mean_of(burst);
        if (!use_tfs_) {
            const double color = color_loss(pred, pred, problem_.blurry);
            return {color, color, 0.0};
        }
        return tfs_loss(pred, pred, problem_.blurry, burst, converter, targets_, problem_.cfg);
    }

    double value(const RgbFrame &latent, const ConverterWeights &converter) const {
        return parts(latent, converter).total;
    }

    Evaluation evaluate(const RgbFrame &latent, const ConverterWeights &converter) const {
        const auto &traj = problem_.trajectory;
        const auto burst = sub_exposures(latent, traj);
        const RgbFrame pred = mean_of(burst);
        const double inv_k = 1.0 / static_cast<double>(burst.size());

        Evaluation out{0.0, RgbFrame(latent.width(), latent.height()), {}};
        if (!use_tfs_) {
            out.value = color_loss(pred, pred, problem_.blurry);
            // d/dpred of 2 |pred - blurry|^2
            RgbFrame d_pred(pred.width(), pred.height());
            const auto p = pred.values();
            const auto b = problem_.blurry.values();
            auto d = d_pred.values();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = 4.0 * (p[i] - b[i]);
            for (const auto &s : traj.shifts) scatter_add(out.d_latent, d_pred, s, traj.margin, inv_k);
            return out;
        }

        out.value = tfs_loss(pred, pred, problem_.blurry, burst, converter, targets_,
                             problem_.cfg)
                        .total;
        const auto grad = tfs_loss_gradient(pred, pred, problem_.blurry, burst, converter,
                                            targets_, problem_.cfg);
        RgbFrame d_pred = grad.d_coarse;
        {
            auto d = d_pred.values();
            const auto f = grad.d_fine.values();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] += f[i];
        }
        for (std::size_t k = 0; k < traj.shifts.size(); ++k) {
            scatter_add(out.d_latent, d_pred, traj.shifts[k], traj.margin, inv_k);
            scatter_add(out.d_latent, grad.d_spike_preds[k], traj.shifts[k], traj.margin, 1.0);
        }
        out.d_converter = grad.d_converter;
        return out;
    }

private:
    const DeblurProblem &problem_;
    bool use_tfs_;
    std::vector<TfsTargets> targets_;
};

RgbFrame initial_latent(const DeblurProblem &problem) {
    const auto m = static_cast<std::ptrdiff_t>(problem.trajectory.margin);
    const auto bw = static_cast<std::ptrdiff_t>(problem.blurry.width());
    const auto bh = static_cast<std::ptrdiff_t>(problem.blurry.height());
    RgbFrame latent(problem.latent_width, problem.latent_height);
    for (std::size_t y = 0; y < latent.height(); ++y) {
        for (std::size_t x = 0; x < latent.width(); ++x) {
            const auto sx = std::clamp(static_cast<std::ptrdiff_t>(x) - m, std::ptrdiff_t{0}, bw - 1);
            const auto sy = std::clamp(static_cast<std::ptrdiff_t>(y) - m, std::ptrdiff_t{0}, bh - 1);
            for (std::size_t c = 0; c < 3; ++c) {
                latent(x, y, c) = problem.blurry(static_cast<std::size_t>(sx),
                                                 static_cast<std::size_t>(sy), c);
            }
        }
    }
    return latent;
}

struct Point {
    RgbFrame latent;
    ConverterWeights converter;
};

Point axpy(const Point &base, double alpha, const Point &direction) {
    Point out = base;
    auto v = out.latent.values();
    const auto d = direction.latent.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += alpha * d[i];
    out.converter.r += alpha * direction.converter.r;
    out.converter.g += alpha * direction.converter.g;
    out.converter.b += alpha * direction.converter.b;
    return out;
}

} // namespace

TfsLossParts deblur_objective(const DeblurProblem &problem, const RgbFrame &latent,
                              const ConverterWeights &converter, bool use_tfs) {
    if (latent.width() != problem.latent_width || latent.height() != problem.latent_height) {
        throw std::invalid_argument("deblur_objective: latent dimension mismatch");
    }
    return Objective(problem, use_tfs).parts(latent, converter);
}

DeblurResult solve(const DeblurProblem &problem, const SolveOptions &options) {
    if (options.iterations < 1) throw std::invalid_argument("solve: iterations must be >= 1");
    if (!(options.step > 0.0) || !std::isfinite(options.step)) {
        throw std::invalid_argument("solve: step must be finite and > 0");
    }
    problem.trajectory.validate();
    const Objective objective(problem, options.use_tfs);

    Point x{initial_latent(problem), kUniformGrayWeights};
    double fx = objective.value(x.latent, x.converter);
    double step = options.step;
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(options.iterations));

    for (int it = 0; it < options.iterations; ++it) {
        auto eval = objective.evaluate(x.latent, x.converter);
        const Point grad{std::move(eval.d_latent), eval.d_converter};
        // Backtrack until the objective does not increase.
        for (;;) {
            Point candidate = axpy(x, -step, grad);
            const double f_candidate = objective.value(candidate.latent, candidate.converter);
            if (!std::isfinite(f_candidate)) {
                throw DivergenceError("solve: objective became non-finite at iteration " +
                                          std::to_string(it),
                                      trace);
            }
            if (f_candidate <= fx) {
                x = std::move(candidate);
                fx = f_candidate;
                break;
            }
            step *= 0.5;
            if (step < 1e-12) break;
        }
        trace.push_back(fx);
    }

    for (double &v : x.latent.values()) v = std::clamp(v, 0.0, 1.0);
    return {std::move(x.latent), x.converter, std::move(trace), step};
}

MetricReport evaluate(const RgbFrame &estimate, const RgbFrame &reference) {
    return compare(estimate, reference, 1.0);
}

RgbFrame make_synthetic_scene(std::size_t width, std::size_t height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto color = [&] {
        return std::array<double, 3>{0.15 + 0.8 * unit(rng), 0.15 + 0.8 * unit(rng),
                                     0.15 + 0.8 * unit(rng)};
    };
    RgbFrame img(width, height);
    const auto c0 = color();
    const auto c1 = color();
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const double s = 0.5 * (static_cast<double>(x) / static_cast<double>(width) +
                                    static_cast<double>(y) / static_cast<double>(height));
            for (std::size_t c = 0; c < 3; ++c) img(x, y, c) = (1.0 - s) * c0[c] + s * c1[c];
        }
    }
    const double wd = static_cast<double>(width);
    const double hd = static_cast<double>(height);
    for (int shape = 0; shape < 12; ++shape) {
        const auto col = color();
        const double cx = unit(rng) * wd;
        const double cy = unit(rng) * hd;
        const double rx = (0.05 + 0.2 * unit(rng)) * wd;
        const double ry = (0.05 + 0.2 * unit(rng)) * hd;
        const bool disc = (rng() & 1U) != 0;
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                const double u = (static_cast<double>(x) + 0.5 - cx) / rx;
                const double v = (static_cast<double>(y) + 0.5 - cy) / ry;
                const bool inside = disc ? (u * u + v * v <= 1.0)
                                         : (std::abs(u) <= 1.0 && std::abs(v) <= 1.0);
                if (inside) {
                    for (std::size_t c = 0; c < 3; ++c) img(x, y, c) = col[c];
                }
            }
        }
    }
    return img;
}

} // namespace spikedeblur
