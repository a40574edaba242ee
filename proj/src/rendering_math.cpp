// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "spikedeblur/rendering_math.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace spikedeblur {

void RaySamples::validate() const {
    if (colors.empty()) throw std::invalid_argument("RaySamples: need at least one sample");
    if (densities.size() != colors.size() || deltas.size() != colors.size()) {
        throw std::invalid_argument("RaySamples: colors, densities and deltas differ in length");
    }
    for (double s : densities) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("RaySamples: densities must be finite and >= 0");
        }
    }
    for (double d : deltas) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("RaySamples: deltas must be finite and > 0");
        }
    }
}

Eigen::Vector3d composite_ray(const RaySamples &samples) {
    samples.validate();
    Eigen::Vector3d color = Eigen::Vector3d::Zero();
    double optical_depth = 0.0;
    for (std::size_t i = 0; i < samples.colors.size(); ++i) {
        const double tau = samples.densities[i] * samples.deltas[i];
        const double transmittance = std::exp(-optical_depth);
        const double alpha = -std::expm1(-tau);
        color += transmittance * alpha * samples.colors[i];
        optical_depth += tau;
    }
    return color;
}

double residual_transmittance(const RaySamples &samples) {
    samples.validate();
    double optical_depth = 0.0;
    for (std::size_t i = 0; i < samples.colors.size(); ++i) {
        optical_depth += samples.densities[i] * samples.deltas[i];
    }
    return std::exp(-optical_depth);
}

double gaussian_eval(const Eigen::Vector3d &offset, const Eigen::Matrix3d &covariance) {
    if (!covariance.allFinite() || !offset.allFinite()) {
        throw std::invalid_argument("gaussian_eval: non-finite input");
    }
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("gaussian_eval: covariance is not symmetric");
    }
    const Eigen::LLT<Eigen::Matrix3d> llt(covariance);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("gaussian_eval: covariance is not positive definite");
    }
    // x^T Sigma^-1 x = |L^-1 x|^2
    const Eigen::Vector3d z = llt.matrixL().solve(offset);
    return std::exp(-0.5 * z.squaredNorm());
}

double gaussian_eval_at(const Eigen::Vector3d &point, const Gaussian3D &g) {
    return gaussian_eval(point - g.mean, g.covariance);
}

Eigen::MatrixXd project_covariance(const Eigen::Matrix3d &sigma, const Eigen::Matrix3d &view,
                                   const Eigen::MatrixXd &jacobian) {
    if (jacobian.cols() != 3 || (jacobian.rows() != 2 && jacobian.rows() != 3)) {
        throw std::invalid_argument("project_covariance: jacobian must be 2x3 or 3x3");
    }
    const Eigen::MatrixXd jw = jacobian * view;
    Eigen::MatrixXd projected = jw * sigma * jw.transpose();
    return 0.5 * (projected + projected.transpose());
}

} // namespace spikedeblur
