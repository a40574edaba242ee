// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <vector>

namespace spikedeblur {

/// Samples along one camera ray, front to back.
struct RaySamples {
    std::vector<Eigen::Vector3d> colors;
    std::vector<double> densities; // sigma_i >= 0
    std::vector<double> deltas;    // delta_i > 0, distance to the next sample

    void validate() const;
};

/// Alpha compositing: C = sum_i T_i (1 - exp(-sigma_i delta_i)) c_i with
/// T_i = exp(-sum_{j<i} sigma_j delta_j).
Eigen::Vector3d composite_ray(const RaySamples &samples);

/// Transmittance left after the last sample, T_{N+1}.
double residual_transmittance(const RaySamples &samples);

struct Gaussian3D {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Identity();
};

/// exp(-0.5 x^T Sigma^-1 x) for an offset x from the mean. Sigma must be
/// symmetric positive definite; it is factored with Cholesky.
double gaussian_eval(const Eigen::Vector3d &offset, const Eigen::Matrix3d &covariance);

/// Same kernel evaluated at an absolute position.
double gaussian_eval_at(const Eigen::Vector3d &point, const Gaussian3D &g);

/// Sigma' = J W Sigma W^T J^T with J of shape 2x3 or 3x3. The result is
/// symmetrized to remove round-off asymmetry.
Eigen::MatrixXd project_covariance(const Eigen::Matrix3d &sigma, const Eigen::Matrix3d &view,
                                   const Eigen::MatrixXd &jacobian);

} // namespace spikedeblur
