#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "uavcov/channel.hpp"

using namespace uavcov;

TEST(Channel, LosCurve)
{
    const double b = 0.136, c = 11.95;
    EXPECT_NEAR(los_prob_a2g(50.0, 50.0, b, c), 1.0 / (1.0 + c * std::exp(-b * (90.0 - c))), 1e-15);
    for (double u : {1.0, 10.0, 100.0, 1000.0})
        EXPECT_NEAR(los_prob_a2g_ground(u, 50.0, b, c), oracle::los_elevation(u, 50.0, b, c), 1e-14);
    EXPECT_NEAR(los_prob_a2g(std::hypot(30.0, 50.0), 50.0, b, c), oracle::los_elevation(30.0, 50.0, b, c), 1e-12);
    EXPECT_THROW(los_prob_a2g(40.0, 50.0, b, c), std::domain_error);
}

TEST(Channel, GroundBlockage)
{
    EXPECT_DOUBLE_EQ(los_prob_g2g(141.4, 1.0 / 141.4), std::exp(-1.0));
    EXPECT_DOUBLE_EQ(state_prob(0.3, LinkState::nlos), 0.7);
}

TEST(Channel, PathLoss)
{
    NetworkConfig cfg;
    EXPECT_NEAR(path_loss(10.0, uav_slot, LinkState::los, cfg), std::pow(10.0, 3.08) * std::pow(10.0, 2.09), 1e-6);
}

TEST(Channel, GainPmf)
{
    AntennaPattern a;
    const auto g = gain_pmf(a);
    double s = 0;
    for (const auto& l : g) s += l.prob;
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_NEAR(g[0].prob, 1.0 / 144.0, 1e-15);
    EXPECT_DOUBLE_EQ(g[0].gain, 100.0);
    EXPECT_NEAR(g[3].prob, 121.0 / 144.0, 1e-15);
    EXPECT_DOUBLE_EQ(a.main_link_gain(), 100.0);
}

TEST(Channel, NakagamiMgfAgainstQuadrature)
{
    for (int n : {1, 2, 3, 5})
        for (double x : {0.01, 0.7, 4.0}) {
            const double ref = oracle::simpson([&](double h) { return std::exp(-x * h) * oracle::gamma_pdf(n, h); },
                                               1e-12, 40.0, 200000);
            EXPECT_NEAR(nakagami_mgf(x, n), ref, 1e-8) << n << " " << x;
            EXPECT_NEAR(nakagami_mgf_complement(x, n), 1.0 - ref, 1e-8);
        }
}

TEST(Channel, NakagamiSamplesHaveUnitMean)
{
    std::mt19937_64 rng(3);
    for (int n : {1, 3}) {
        double s = 0, s2 = 0;
        const int k = 200000;
        for (int i = 0; i < k; ++i) {
            const double h = sample_nakagami(n, rng);
            s += h;
            s2 += h * h;
        }
        EXPECT_NEAR(s / k, 1.0, 0.01);
        EXPECT_NEAR(s2 / k - 1.0, 1.0 / n, 0.02);
    }
}

TEST(Channel, Constants)
{
    EXPECT_DOUBLE_EQ(alzer_constant(1), 1.0);
    EXPECT_NEAR(alzer_constant(2), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(binomial(10, 5), 252.0);
    EXPECT_EQ(binomial(5, 0), 1.0);
}

TEST(Channel, LosCurveLimits)
{
    const double b = 0.136, c = 11.95;
    EXPECT_NEAR(los_prob_a2g(50.0, 50.0, b, c), 0.99971, 5e-6);
    const double far = 1.0 / (1.0 + c * std::exp(b * c));
    EXPECT_NEAR(los_prob_a2g(1e9, 50.0, b, c), far, 1e-8);
    EXPECT_NEAR(far, 0.016208, 1e-6);
    EXPECT_NEAR(los_prob_a2g(100.0, 50.0, b, c), 1.0 / (1.0 + c * std::exp(-b * (30.0 - c))), 1e-12);
    double prev = 1.0;
    for (double r = 50.0; r < 5000.0; r *= 1.3) {
        const double p = los_prob_a2g(r, 50.0, b, c);
        EXPECT_LE(p, prev);
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, 1.0);
        EXPECT_DOUBLE_EQ(state_prob(p, LinkState::los) + state_prob(p, LinkState::nlos), 1.0);
        prev = p;
    }
    prev = 0.0;
    for (double h = 10.0; h <= 200.0; h += 10.0) {
        const double p = los_prob_a2g_ground(100.0, h, b, c);
        EXPECT_GE(p, prev);
        prev = p;
    }
    EXPECT_DOUBLE_EQ(los_prob_g2g(0.0, 1.0 / 141.4), 1.0);
}

TEST(Channel, PathLossValues)
{
    EXPECT_DOUBLE_EQ(path_loss(10.0, PathLoss{1.0, 2.0}), 100.0);
    const double l = path_loss(50.0, PathLoss{std::pow(10.0, 3.08), 2.09});
    EXPECT_NEAR(l / 4.2741e6, 1.0, 1e-4);
}

TEST(Channel, GainPmfBeamwidths)
{
    const double pi = std::numbers::pi;
    auto pattern = [](double tb, double tu) {
        AntennaPattern a;
        a.beam_bs = tb;
        a.beam_ue = tu;
        return gain_pmf(a);
    };
    const auto full = pattern(2 * pi, 2 * pi);
    EXPECT_DOUBLE_EQ(full[0].prob, 1.0);
    for (int i = 1; i < 4; ++i) EXPECT_DOUBLE_EQ(full[i].prob, 0.0);
    for (const auto& l : pattern(pi, pi)) EXPECT_NEAR(l.prob, 0.25, 1e-15);
    const auto mixed = pattern(pi / 6, pi / 3);
    EXPECT_NEAR(mixed[0].prob, 1.0 / 72.0, 1e-15);
    EXPECT_NEAR(mixed[3].prob, 55.0 / 72.0, 1e-15);
}

TEST(Channel, NakagamiSampleMoments)
{
    std::mt19937_64 rng(17);
    const int k = 1000000;
    double s3 = 0, s2 = 0, q2 = 0, e = 0;
    for (int i = 0; i < k; ++i) {
        s3 += sample_nakagami(3, rng);
        const double h = sample_nakagami(2, rng);
        s2 += h;
        q2 += h * h;
        e += sample_nakagami(1, rng) > 1.0;
    }
    EXPECT_NEAR(s3 / k, 1.0, 0.003);
    EXPECT_NEAR(q2 / k - (s2 / k) * (s2 / k), 0.5, 0.01);
    // Rayleigh power: P(h > 1) = e^{-1}
    EXPECT_NEAR(e / k, std::exp(-1.0), 0.002);
}
