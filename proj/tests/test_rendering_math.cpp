// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "spikedeblur/rendering_math.hpp"

namespace spikedeblur {
namespace {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;

RaySamples random_ray(std::mt19937_64 &rng, std::size_t n, bool white = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> density(0.5);
    RaySamples r;
    for (std::size_t i = 0; i < n; ++i) {
        r.colors.push_back(white ? Vector3d(1, 1, 1) : Vector3d(u(rng), u(rng), u(rng)));
        r.densities.push_back(density(rng));
        r.deltas.push_back(0.01 + u(rng));
    }
    return r;
}

Matrix3d random_spd(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix3d a;
    for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = n(rng);
    return a * a.transpose() + 0.05 * Matrix3d::Identity();
}

Matrix3d random_rotation(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
}

// Naive product-of-exponentials compositing.
Vector3d oracle_composite(const RaySamples &r) {
    Vector3d c = Vector3d::Zero();
    for (std::size_t i = 0; i < r.colors.size(); ++i) {
        double t = 1.0;
        for (std::size_t j = 0; j < i; ++j) t *= std::exp(-r.densities[j] * r.deltas[j]);
        c += t * (1.0 - std::exp(-r.densities[i] * r.deltas[i])) * r.colors[i];
    }
    return c;
}

TEST(CompositeRay, ZeroDensityIsBlack) {
    std::mt19937_64 rng(1);
    auto r = random_ray(rng, 5);
    for (double &s : r.densities) s = 0.0;
    EXPECT_EQ(composite_ray(r), Vector3d::Zero());
    EXPECT_EQ(residual_transmittance(r), 1.0);
}

TEST(CompositeRay, OpaqueLimit) {
    const RaySamples r{{Vector3d(1, 0, 0)}, {1e6}, {1.0}};
    EXPECT_LE((composite_ray(r) - Vector3d(1, 0, 0)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CompositeRay, TwoHalfOpacitySamples) {
    const double ln2 = std::log(2.0);
    const RaySamples r{{Vector3d(1, 0, 0), Vector3d(0, 1, 0)}, {ln2, ln2}, {1.0, 1.0}};
    const Vector3d c = composite_ray(r);
    EXPECT_NEAR(c.x(), 0.5, 1e-12);
    EXPECT_NEAR(c.y(), 0.25, 1e-12);
    EXPECT_NEAR(c.z(), 0.0, 1e-12);
}

TEST(CompositeRay, Errors) {
    EXPECT_THROW(composite_ray({}), std::invalid_argument);
    EXPECT_THROW(composite_ray({{Vector3d::Zero()}, {-1.0}, {1.0}}), std::invalid_argument);
    EXPECT_THROW(composite_ray({{Vector3d::Zero()}, {1.0}, {0.0}}), std::invalid_argument);
    EXPECT_THROW(composite_ray({{Vector3d::Zero()}, {1.0, 1.0}, {1.0}}), std::invalid_argument);
    EXPECT_THROW(composite_ray({{Vector3d::Zero()}, {NAN}, {1.0}}), std::invalid_argument);
}

class RayProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RayProperties, TelescopingAndOracle) {
    std::mt19937_64 rng(GetParam());
    for (int trial = 0; trial < 50; ++trial) {
        const auto r = random_ray(rng, 1 + trial % 64);
        const Vector3d c = composite_ray(r);
        EXPECT_LE((c - oracle_composite(r)).cwiseAbs().maxCoeff(), 1e-12);
        for (int k = 0; k < 3; ++k) {
            EXPECT_GE(c[k], 0.0);
            EXPECT_LE(c[k], 1.0);
        }
        auto white = r;
        for (auto &col : white.colors) col = Vector3d(1, 1, 1);
        const Vector3d a = composite_ray(white);
        const double alpha = 1.0 - residual_transmittance(r);
        EXPECT_NEAR(a.x(), alpha, 1e-12);
        EXPECT_NEAR(a.y(), alpha, 1e-12);
        EXPECT_NEAR(1.0 - a.z(), residual_transmittance(r), 1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RayProperties, ::testing::Range<std::uint64_t>(0, 4));

TEST(GaussianEval, Examples) {
    EXPECT_EQ(gaussian_eval(Vector3d::Zero(), Matrix3d::Identity()), 1.0);
    EXPECT_NEAR(gaussian_eval(Vector3d(1, 1, 0), Matrix3d::Identity()), std::exp(-1.0), 1e-15);
    const Matrix3d aniso = Vector3d(4, 1, 1).asDiagonal();
    EXPECT_NEAR(gaussian_eval(Vector3d(2, 0, 0), aniso), std::exp(-0.5), 1e-15);
    const Gaussian3D g{Vector3d(1, 2, 3), aniso};
    EXPECT_NEAR(gaussian_eval_at(Vector3d(3, 2, 3), g), std::exp(-0.5), 1e-15);
}

TEST(GaussianEval, Errors) {
    Matrix3d singular = Matrix3d::Identity();
    singular(2, 2) = 0.0;
    EXPECT_THROW(gaussian_eval(Vector3d::Zero(), singular), std::invalid_argument);
    Matrix3d asym = Matrix3d::Identity();
    asym(0, 1) = 0.1;
    EXPECT_THROW(gaussian_eval(Vector3d::Zero(), asym), std::invalid_argument);
    EXPECT_THROW(gaussian_eval(Vector3d::Zero(), -Matrix3d::Identity()), std::invalid_argument);
}

class GaussianProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(GaussianProperties, RotationInvarianceAndRange) {
    std::mt19937_64 rng(GetParam());
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix3d sigma = random_spd(rng);
        const Vector3d x(n(rng), n(rng), n(rng));
        const Matrix3d r = random_rotation(rng);
        const double v = gaussian_eval(x, sigma);
        // Quadratic-form oracle through a full inverse.
        EXPECT_NEAR(v, std::exp(-0.5 * x.dot(sigma.inverse() * x)), 1e-9);
        Matrix3d rotated = r * sigma * r.transpose();
        rotated = 0.5 * (rotated + rotated.transpose()).eval();
        EXPECT_NEAR(gaussian_eval(r * x, rotated), v, 1e-9);
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, GaussianProperties, ::testing::Range<std::uint64_t>(0, 4));

TEST(ProjectCovariance, Examples) {
    std::mt19937_64 rng(7);
    const Matrix3d sigma = random_spd(rng);
    EXPECT_LE((project_covariance(sigma, Matrix3d::Identity(), Matrix3d::Identity()) - sigma)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-15);
    const Matrix3d w = random_rotation(rng);
    EXPECT_LE((project_covariance(Matrix3d::Identity(), w, Matrix3d::Identity()) -
               Matrix3d::Identity())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
    MatrixXd j = MatrixXd::Zero(2, 3);
    j(0, 0) = 1.0;
    j(1, 1) = 1.0;
    const MatrixXd p =
        project_covariance(Vector3d(1, 4, 9).asDiagonal(), Matrix3d::Identity(), j);
    ASSERT_EQ(p.rows(), 2);
    ASSERT_EQ(p.cols(), 2);
    EXPECT_EQ(p, (MatrixXd(2, 2) << 1, 0, 0, 4).finished());
}

TEST(ProjectCovariance, Errors) {
    EXPECT_THROW(project_covariance(Matrix3d::Identity(), Matrix3d::Identity(), MatrixXd::Ones(3, 2)),
                 std::invalid_argument);
    EXPECT_THROW(project_covariance(Matrix3d::Identity(), Matrix3d::Identity(), MatrixXd::Ones(4, 3)),
                 std::invalid_argument);
}

TEST(ProjectCovariance, SymmetricPsd) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix3d sigma = random_spd(rng);
        Matrix3d view;
        for (int i = 0; i < 9; ++i) view(i / 3, i % 3) = n(rng);
        MatrixXd j(trial % 2 ? 2 : 3, 3);
        for (Eigen::Index i = 0; i < j.size(); ++i) j.data()[i] = n(rng);
        const MatrixXd p = project_covariance(sigma, view, j);
        // Oracle triple product.
        const MatrixXd oracle = j * view * sigma * view.transpose() * j.transpose();
        EXPECT_LE((p - oracle).cwiseAbs().maxCoeff(), 1e-9 * (1.0 + oracle.cwiseAbs().maxCoeff()));
        EXPECT_LE((p - p.transpose()).norm(), 1e-12);
        const MatrixXd jittered = p + 1e-12 * MatrixXd::Identity(p.rows(), p.cols());
        EXPECT_EQ(jittered.llt().info(), Eigen::Success);
    }
}

} // namespace
} // namespace spikedeblur
