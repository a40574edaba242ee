// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/tfs_loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spikedeblur {

void TfsConfig::validate() const {
    if (!std::isfinite(weight_w) || weight_w < 0.0) {
        throw std::invalid_argument("TfsConfig: weight_w must be finite and >= 0");
    }
    if (tfp_window < 1) throw std::invalid_argument("TfsConfig: tfp_window must be >= 1");
    if (!(omega > 0.0)) throw std::invalid_argument("TfsConfig: omega must be > 0");
    if (recon_per_view_n < 1) {
        throw std::invalid_argument("TfsConfig: recon_per_view_n must be >= 1");
    }
}

double color_loss(const RgbFrame &pred_coarse, const RgbFrame &pred_fine, const RgbFrame &gt) {
    require_same_shape(pred_coarse, gt, "color_loss");
    require_same_shape(pred_fine, gt, "color_loss");
    const auto c = pred_coarse.values();
    const auto f = pred_fine.values();
    const auto g = gt.values();
    double loss = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rc = c[i] - g[i];
        const double rf = f[i] - g[i];
        loss += rc * rc + rf * rf;
    }
    return loss;
}

namespace {

void check_inputs(const RgbFrame &pred_coarse, const RgbFrame &pred_fine, const RgbFrame &gt,
                  std::span<const RgbFrame> spike_preds, const ConverterWeights &converter,
                  std::span<const TfsTargets> targets, const TfsConfig &cfg) {
    cfg.validate();
    require_same_shape(pred_coarse, gt, "tfs_loss");
    require_same_shape(pred_fine, gt, "tfs_loss");
    if (targets.empty()) throw std::invalid_argument("tfs_loss: empty target list");
    if (spike_preds.size() != targets.size()) {
        throw std::invalid_argument("tfs_loss: need one spike prediction per target");
    }
    if (targets.size() != static_cast<std::size_t>(cfg.recon_per_view_n)) {
        throw std::invalid_argument("tfs_loss: target count " + std::to_string(targets.size()) +
                                    " differs from recon_per_view_n " +
                                    std::to_string(cfg.recon_per_view_n));
    }
    if (!converter.finite()) throw std::invalid_argument("tfs_loss: non-finite converter");
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto &pred = spike_preds[k];
        const auto &tfi_img = targets[k].tfi.values;
        const auto &tfp_img = targets[k].tfp.values;
        if (pred.width() != tfi_img.width() || pred.height() != tfi_img.height() ||
            !tfi_img.same_shape(tfp_img)) {
            throw std::invalid_argument("tfs_loss: target " + std::to_string(k) +
                                        " dimension mismatch");
        }
    }
}

double combine_factor(CombineMode mode) { return mode == CombineMode::kMean ? 0.5 : 1.0; }

} // namespace

TfsLossParts tfs_loss(const RgbFrame &pred_coarse, const RgbFrame &pred_fine, const RgbFrame &gt,
                      std::span<const RgbFrame> spike_preds, const ConverterWeights &converter,
                      std::span<const TfsTargets> targets, const TfsConfig &cfg) {
    check_inputs(pred_coarse, pred_fine, gt, spike_preds, converter, targets, cfg);
    TfsLossParts parts;
    parts.color = color_loss(pred_coarse, pred_fine, gt);

    const double factor = combine_factor(cfg.combine_mode);
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto rgb = spike_preds[k].values();
        const auto a = targets[k].tfi.values.values();
        const auto b = targets[k].tfp.values.values();
        double sq = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double gray = converter.apply(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
            const double ea = gray - a[i];
            const double eb = gray - b[i];
            sq += ea * ea + eb * eb;
        }
        parts.spike += factor * sq;
    }
    parts.total = parts.color + cfg.weight_w * parts.spike;
    return parts;
}

TfsGradient tfs_loss_gradient(const RgbFrame &pred_coarse, const RgbFrame &pred_fine,
                              const RgbFrame &gt, std::span<const RgbFrame> spike_preds,
                              const ConverterWeights &converter,
                              std::span<const TfsTargets> targets, const TfsConfig &cfg) {
    check_inputs(pred_coarse, pred_fine, gt, spike_preds, converter, targets, cfg);
    TfsGradient grad{RgbFrame(gt.width(), gt.height()), RgbFrame(gt.width(), gt.height()), {}, {}};

    {
        const auto c = pred_coarse.values();
        const auto f = pred_fine.values();
        const auto g = gt.values();
        auto dc = grad.d_coarse.values();
        auto df = grad.d_fine.values();
        for (std::size_t i = 0; i < g.size(); ++i) {
            dc[i] = 2.0 * (c[i] - g[i]);
            df[i] = 2.0 * (f[i] - g[i]);
        }
    }

    // d/dgray of factor * ((gray - a)^2 + (gray - b)^2), scaled by w.
    const double scale = cfg.weight_w * combine_factor(cfg.combine_mode) * 2.0;
    grad.d_spike_preds.reserve(targets.size());
    double dr = 0.0;
    double dg = 0.0;
    double db = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto &pred = spike_preds[k];
        RgbFrame d(pred.width(), pred.height());
        const auto rgb = pred.values();
        const auto a = targets[k].tfi.values.values();
        const auto b = targets[k].tfp.values.values();
        auto out = d.values();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double red = rgb[3 * i];
            const double green = rgb[3 * i + 1];
            const double blue = rgb[3 * i + 2];
            const double gray = converter.apply(red, green, blue);
            const double dgray = scale * ((gray - a[i]) + (gray - b[i]));
            out[3 * i] = dgray * converter.r;
            out[3 * i + 1] = dgray * converter.g;
            out[3 * i + 2] = dgray * converter.b;
            dr += dgray * red;
            dg += dgray * green;
            db += dgray * blue;
        }
        grad.d_spike_preds.push_back(std::move(d));
    }
    grad.d_converter = {dr, dg, db};
    return grad;
}

} // namespace spikedeblur
