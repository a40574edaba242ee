// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "spikedeblur/metrics.hpp"
#include "test_util.hpp"

namespace spikedeblur {
namespace {

template <std::size_t C>
double oracle_psnr(const Image<C> &a, const Image<C> &b, double max_value) {
    double sum = 0.0;
    for (std::size_t y = 0; y < a.height(); ++y) {
        for (std::size_t x = 0; x < a.width(); ++x) {
            for (std::size_t c = 0; c < C; ++c) {
                const double d = a(x, y, c) - b(x, y, c);
                sum += d * d;
            }
        }
    }
    const double mse = sum / static_cast<double>(a.pixel_count() * C);
    return 10.0 * std::log10(max_value * max_value / mse);
}

// Direct 2-D windowed SSIM, one window placement at a time.
template <std::size_t C>
double oracle_ssim(const Image<C> &a, const Image<C> &b, double max_value) {
    const int win = 11;
    const double sigma = 1.5;
    std::vector<double> k(win * win);
    double ksum = 0.0;
    for (int j = 0; j < win; ++j) {
        for (int i = 0; i < win; ++i) {
            const double dx = i - win / 2, dy = j - win / 2;
            k[j * win + i] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
            ksum += k[j * win + i];
        }
    }
    for (double &v : k) v /= ksum;
    const double c1 = (0.01 * max_value) * (0.01 * max_value);
    const double c2 = (0.03 * max_value) * (0.03 * max_value);
    double total = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t y0 = 0; y0 + win <= a.height(); ++y0) {
            for (std::size_t x0 = 0; x0 + win <= a.width(); ++x0) {
                double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
                for (int j = 0; j < win; ++j) {
                    for (int i = 0; i < win; ++i) {
                        const double wk = k[j * win + i];
                        const double va = a(x0 + i, y0 + j, c), vb = b(x0 + i, y0 + j, c);
                        ma += wk * va;
                        mb += wk * vb;
                        saa += wk * va * va;
                        sbb += wk * vb * vb;
                        sab += wk * va * vb;
                    }
                }
                const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
                acc += ((2 * ma * mb + c1) * (2 * cov + c2)) /
                       ((ma * ma + mb * mb + c1) * (va + vb + c2));
                ++count;
            }
        }
        total += acc / static_cast<double>(count);
    }
    return total / C;
}

TEST(Psnr, IdenticalIsInfinite) {
    const auto a = testing::random_image<3>(8, 8, 1);
    EXPECT_EQ(psnr(a, a), kPsnrIdentical);
    EXPECT_TRUE(std::isinf(kPsnrIdentical));
}

TEST(Psnr, ConstantOffset) {
    const GrayImage a(10, 10, 0.25), b(10, 10, 0.25 + 1.0 / 255.0);
    EXPECT_NEAR(psnr(a, b), 20.0 * std::log10(255.0), 1e-9);
    EXPECT_NEAR(psnr(a, b), 48.13, 5e-3);
}

TEST(Psnr, ZeroVsOne) { EXPECT_EQ(psnr(GrayImage(4, 4, 0.0), GrayImage(4, 4, 1.0)), 0.0); }

TEST(Psnr, Errors) {
    EXPECT_THROW(psnr(GrayImage(2, 2), GrayImage(2, 3)), std::invalid_argument);
    EXPECT_THROW(psnr(GrayImage(2, 2), GrayImage(2, 2, 1.0), 0.0), std::invalid_argument);
}

TEST(Ssim, IdenticalIsOne) {
    const auto a = testing::random_image<3>(20, 16, 2);
    EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
}

TEST(Ssim, NegativeIsWorse) {
    auto a = testing::random_image<1>(16, 16, 3);
    GrayImage neg = a;
    for (double &v : neg.values()) v = 1.0 - v;
    EXPECT_LT(ssim(a, neg), 1.0);
}

TEST(Ssim, Errors) {
    EXPECT_THROW(ssim(GrayImage(10, 20), GrayImage(10, 20)), std::invalid_argument);
    EXPECT_THROW(ssim(GrayImage(12, 12), GrayImage(12, 13)), std::invalid_argument);
}

class MetricProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MetricProperties, MatchOraclesAndSymmetric) {
    const std::uint64_t s = GetParam();
    const auto a = testing::random_image<3>(13 + s, 11 + 2 * s, s);
    auto b = a;
    const auto noise = testing::random_image<3>(a.width(), a.height(), s + 100, -0.2, 0.2);
    for (std::size_t i = 0; i < b.values().size(); ++i) {
        b.values()[i] = std::clamp(b.values()[i] + noise.values()[i], 0.0, 1.0);
    }
    EXPECT_NEAR(psnr(a, b), oracle_psnr(a, b, 1.0), 1e-9);
    EXPECT_NEAR(psnr(a, b, 255.0), oracle_psnr(a, b, 255.0), 1e-9);
    EXPECT_NEAR(ssim(a, b), oracle_ssim(a, b, 1.0), 1e-6);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-15);
    const double v = ssim(a, b);
    EXPECT_LT(v, 1.0);
    EXPECT_GE(v, -1.0);

    const auto g1 = testing::random_image<1>(15, 12, s + 7);
    const auto g2 = testing::random_image<1>(15, 12, s + 8);
    EXPECT_NEAR(ssim(g1, g2), oracle_ssim(g1, g2, 1.0), 1e-6);
    const auto report = compare(g1, g2);
    EXPECT_EQ(report.psnr_db, psnr(g1, g2));
    EXPECT_EQ(report.ssim, ssim(g1, g2));
}

INSTANTIATE_TEST_SUITE_P(Seeds, MetricProperties, ::testing::Range<std::uint64_t>(0, 6));

} // namespace
} // namespace spikedeblur
