#include <gtest/gtest.h>

#include "oracles.hpp"
#include "uavcov/association.hpp"

using namespace uavcov;

namespace {

// Void measure of a PPP layer inside the 3D ball of radius q, state b.
double void_measure(double lam, double height, bool aerial, LinkState b, double q, const NetworkConfig& c)
{
    if (q <= height) return 0.0;
    const double u = std::sqrt(q * q - height * height);
    auto p = [&](double t) {
        const double los = aerial ? oracle::los_elevation(t, height, c.env_b, c.env_c) : std::exp(-c.blockage_rate * t);
        return t * (b == LinkState::los ? los : 1.0 - los);
    };
    return 2 * std::numbers::pi * lam * oracle::simpson(p, 1e-12, u, 4000);
}

// Probability that the cluster UAV in state s is the strongest biased signal.
double cluster_association(const NetworkConfig& c, LinkState s)
{
    const double h = c.uav_height;
    const double hi = c.cluster.kind == ClusterKind::thomas ? 12 * c.cluster.sigma : c.cluster.radius;
    auto f = [&](double d) {
        const double r = std::hypot(d, h);
        const auto& p0 = c.path_loss[cluster_slot][s];
        const double own = c.uav_power * c.uav_bias / (p0.kappa * std::pow(r, p0.alpha));
        double m = 0;
        for (auto b : link_states) {
            const auto& pu = c.path_loss[uav_slot][b];
            m += void_measure(c.uav_density, h, true, b, std::pow(c.uav_power * c.uav_bias / (pu.kappa * own), 1 / pu.alpha), c);
            const auto& pg = c.path_loss[gbs_slot][b];
            m += void_measure(c.gbs_density, 0, false, b, std::pow(c.gbs_power * c.gbs_bias / (pg.kappa * own), 1 / pg.alpha), c);
        }
        const double los = oracle::los_elevation(d, h, c.env_b, c.env_c);
        const double pd = c.cluster.kind == ClusterKind::thomas ? oracle::thomas_pdf(d, c.cluster.sigma)
                                                                 : oracle::matern_pdf(d, c.cluster.radius);
        return (s == LinkState::los ? los : 1 - los) * pd * std::exp(-m);
    };
    return oracle::simpson(f, 1e-9, hi, 600);
}

}  // namespace

TEST(Association, ClusterTierAgainstDirectQuadrature)
{
    for (auto k : {ClusterKind::thomas, ClusterKind::matern}) {
        NetworkConfig c;
        c.cluster.kind = k;
        const auto a = association_probabilities(c);
        for (auto s : link_states) EXPECT_NEAR(a(0, s), cluster_association(c, s), 2e-6) << to_string(k) << to_string(s);
    }
}

TEST(Association, SumsToOne)
{
    for (auto k : {ClusterKind::thomas, ClusterKind::matern})
        for (double h : {10.0, 100.0}) {
            NetworkConfig c;
            c.cluster.kind = k;
            c.uav_height = h;
            EXPECT_NEAR(association_probabilities(c).sum(), 1.0, 1e-3);
        }
}

TEST(Association, BiasShiftsLoad)
{
    NetworkConfig c;
    const auto base = association_probabilities(c);
    c.gbs_bias = 10.0;
    const auto biased = association_probabilities(c);
    EXPECT_GT(biased.tier(2), base.tier(2));
    EXPECT_LT(biased.tier(0), base.tier(0));
}

TEST(Association, ExclusionInverse)
{
    NetworkModel m(NetworkConfig{});
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t j = 0; j < 3; ++j)
            for (auto b : link_states)
                for (auto s : link_states)
                    for (double r : {1.0, 55.0, 800.0}) {
                        const double q = m.exclusion_radius(k, b, j, s, r);
                        EXPECT_NEAR(m.exclusion_inverse(k, b, j, s, q) / r, 1.0, 1e-12);
                    }
}

TEST(Association, ServingDensitiesNormalise)
{
    for (auto k : {ClusterKind::thomas, ClusterKind::matern}) {
        NetworkConfig c;
        c.cluster.kind = k;
        NetworkModel m(c);
        for (std::size_t j = 0; j < m.tier_count(); ++j)
            for (auto s : link_states) {
                const auto sd = serving_distance_pdf(m, j, s);
                QuadOptions o{1e-10, 1e-15};
                o.scale = sd.scale;
                EXPECT_NEAR(integrate_value(sd.pdf, sd.points, o), 1.0, 1e-4) << j << to_string(s);
            }
    }
}

TEST(Association, ServingDensityUndefinedForEmptyTier)
{
    NetworkConfig c;
    c.gbs_density = 0.0;
    NetworkModel m(c);
    EXPECT_EQ(association_probabilities(m)(2, LinkState::los), 0.0);
    EXPECT_THROW(serving_distance_pdf(m, 2, LinkState::los), NumericalError);
}

TEST(Association, ExclusionRadiusValues)
{
    NetworkConfig c;
    c.gbs_power = c.uav_power;
    c.path_loss[uav_slot][LinkState::los] = {1.0, 2.0};
    c.path_loss[gbs_slot][LinkState::nlos] = {1.0, 4.0};
    EXPECT_DOUBLE_EQ(exclusion_radius(1, LinkState::los, 1, LinkState::los, 10.0, c), 10.0);
    EXPECT_NEAR(exclusion_radius(2, LinkState::nlos, 1, LinkState::los, 10.0, c), std::sqrt(10.0), 1e-12);
    const double q = exclusion_radius(2, LinkState::nlos, 1, LinkState::los, 37.0, c);
    c.gbs_bias *= 2;
    EXPECT_NEAR(exclusion_radius(2, LinkState::nlos, 1, LinkState::los, 37.0, c) / q, std::pow(2.0, 0.25), 1e-12);
}

TEST(Association, VanishingGroundBias)
{
    NetworkConfig c;
    c.gbs_bias = 1e-12;
    const auto a = association_probabilities(c);
    EXPECT_LT(a.tier(2), 1e-4);
    EXPECT_NEAR(a.sum(), 1.0, 1e-3);
}

TEST(Association, ClusterSpreadTrend)
{
    std::vector<AssociationMatrix> rows;
    for (double s : {5.0, 10.0, 20.0, 40.0}) {
        NetworkConfig c;
        c.cluster.sigma = s;
        rows.push_back(association_probabilities(c));
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].tier(0), rows[i - 1].tier(0));
        EXPECT_GT(rows[i].tier(1), rows[i - 1].tier(1));
        EXPECT_GT(rows[i].tier(2), rows[i - 1].tier(2));
    }
}

TEST(Association, UavServingDistanceStartsAtHeight)
{
    NetworkConfig c;
    c.uav_height = 35.0;
    NetworkModel m(c);
    for (std::size_t j : {0, 1})
        for (auto s : link_states) {
            const auto sd = serving_distance_pdf(m, j, s);
            EXPECT_DOUBLE_EQ(sd.points.front(), 35.0) << j << to_string(s);
            EXPECT_EQ(sd.pdf(34.9), 0.0);
        }
}
