#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "uavcov/association.hpp"
#include "uavcov/downlink.hpp"
#include "uavcov/extensions.hpp"
#include "uavcov/montecarlo.hpp"

using namespace uavcov;

namespace {

NetworkConfig lone_uav()
{
    NetworkConfig c;
    c.uav_density = 0.0;
    c.gbs_density = 0.0;
    return c;
}

// Exact single-link tail averaged over the Thomas offset and LOS state.
double single_link(const NetworkConfig& c, double tx_power, double threshold_noise)
{
    const double h = c.uav_height, s = c.cluster.sigma;
    auto f = [&](double d) {
        const double r = std::hypot(d, h);
        const double los = oracle::los_elevation(d, h, c.env_b, c.env_c);
        double v = 0;
        for (auto st : link_states) {
            const auto& pl = c.path_loss[cluster_slot][st];
            const double p = tx_power * c.antenna.main_link_gain() / (pl.kappa * std::pow(r, pl.alpha));
            v += (st == LinkState::los ? los : 1 - los) * oracle::gamma_tail(c.nakagami(st), threshold_noise / p);
        }
        return oracle::thomas_pdf(d, s) * v;
    };
    return oracle::simpson(f, 1e-9, 12 * s, 4000);
}

void expect_same(const TrialEstimate& a, const TrialEstimate& b)
{
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.half_width, b.half_width);
    EXPECT_EQ(a.n, b.n);
}

}  // namespace

TEST(MonteCarlo, Confidence)
{
    EXPECT_NEAR(confidence(0.5, 10000), 0.0098, 1e-12);
    EXPECT_EQ(confidence(0.0, 100), 0.0);
    EXPECT_EQ(confidence(1.0, 100), 0.0);
    EXPECT_NEAR(confidence(0.2, 400) / confidence(0.2, 1600), 2.0, 1e-12);
}

TEST(MonteCarlo, ScoreIntervalCoversDegenerateCounts)
{
    const auto e = proportion(1000, 1000);
    EXPECT_EQ(e.value, 1.0);
    EXPECT_EQ(e.half_width, 0.0);
    EXPECT_GT(e.score_half_width, 0.0);
    EXPECT_TRUE(e.agrees(0.999));
}

TEST(MonteCarlo, BitIdenticalAcrossRunsAndWorkers)
{
    NetworkConfig c;
    AnalysisSettings s1, s4;
    s1.threads = 1;
    s4.threads = 4;
    McDownlinkRequest req{1e-4, 1.0, 1.0, 0.5, {1e6}, {1e-7}, false, 3000};
    const auto a = simulate_downlink(c, s1, req), b = simulate_downlink(c, s1, req), d = simulate_downlink(c, s4, req);
    for (const auto* r : {&b, &d}) {
        expect_same(a.energy, r->energy);
        expect_same(a.sinr, r->sinr);
        expect_same(a.stp, r->stp);
        expect_same(a.mean_interference, r->mean_interference);
        expect_same(a.laplace[0], r->laplace[0]);
        expect_same(a.ccdf[0], r->ccdf[0]);
        for (std::size_t j = 0; j < 3; ++j)
            for (int s = 0; s < 2; ++s) expect_same(a.association[j][s], r->association[j][s]);
    }
    McUplinkRequest ur{0.01, 0.3, 0.5, 0.0, 3000};
    const auto u1 = simulate_uplink(c, s1, ur), u4 = simulate_uplink(c, s4, ur);
    expect_same(u1.coverage, u4.coverage);
    expect_same(u1.mean_interference, u4.mean_interference);
}

TEST(MonteCarlo, SeedChangesDraws)
{
    NetworkConfig c;
    AnalysisSettings s;
    McDownlinkRequest req{1e-4, 1.0, 1.0, 0.5, {}, {}, false, 2000};
    const auto a = simulate_downlink(c, s, req);
    s.mc_seed = 2;
    const auto b = simulate_downlink(c, s, req);
    EXPECT_NE(a.mean_interference.value, b.mean_interference.value);
}

TEST(MonteCarlo, AssociationFrequenciesSumToOne)
{
    AnalysisSettings s;
    const auto r = simulate_downlink(NetworkConfig{}, s, {1e-4, 1.0, 1.0, 0.5, {}, {}, false, 2000});
    double t = 0;
    for (const auto& tier : r.association)
        for (const auto& e : tier) t += e.value;
    EXPECT_NEAR(t, 1.0, 1e-12);
}

TEST(MonteCarlo, WindowDoublingIsNegligible)
{
    NetworkConfig c;
    AnalysisSettings s2, s4;
    s4.mc_window_rings = 4;
    McDownlinkRequest req{1e-4, 1.0, 1.0, 0.5, {}, {}, false, 4000};
    const auto a = simulate_downlink(c, s2, req), b = simulate_downlink(c, s4, req);
    EXPECT_NEAR(a.windows[1] * 2, b.windows[1], 1e-9);
    for (auto pr : {std::pair{&a.energy, &b.energy}, {&a.sinr, &b.sinr}, {&a.stp, &b.stp}})
        EXPECT_LE(std::abs(pr.first->value - pr.second->value), std::max(pr.first->half_width, 1.0 / 4000));
    for (std::size_t j = 0; j < 3; ++j)
        for (int s = 0; s < 2; ++s)
            EXPECT_LE(std::abs(a.association[j][s].value - b.association[j][s].value),
                      std::max(a.association[j][s].half_width, 1.0 / 4000));
}

TEST(MonteCarlo, SingleLinkMatchesNakagamiTail)
{
    const auto c = lone_uav();
    AnalysisSettings s;
    const double rho = 0.5, noise = c.conversion_noise / rho + c.thermal_noise;
    for (double gdb : {20.0, 25.0}) {
        const double g = db_to_linear(gdb);
        const auto r = simulate_downlink(c, s, {1e-4, g, 1.0, rho, {}, {}, false, 20000});
        EXPECT_NEAR(r.sinr.value, single_link(c, c.uav_power, g * noise), 0.01) << gdb;
        EXPECT_EQ(r.association[0][0].value + r.association[0][1].value, 1.0);
    }
}

TEST(MonteCarlo, SilentUplinkIsNoiseOnlyTail)
{
    NetworkConfig c;
    AnalysisSettings s;
    for (double gdb : {20.0, 35.0}) {
        const double g = db_to_linear(gdb);
        const auto r = simulate_uplink(c, s, {g, 0.0, 0.5, 0.0, 20000});
        EXPECT_EQ(r.mean_interference.value, 0.0);
        EXPECT_NEAR(r.coverage.value, single_link(c, c.ue_power, g * c.thermal_noise), 0.01) << gdb;
    }
}

TEST(MonteCarlo, AssociationAgreesWithAnalysis)
{
    NetworkConfig c;
    AnalysisSettings s;
    const auto r = simulate_downlink(c, s, {1e-4, 1.0, 1.0, 0.5, {}, {}, false, 20000});
    const auto a = association_probabilities(c);
    for (std::size_t j = 0; j < 3; ++j)
        for (auto st : link_states) {
            const auto& e = r.association[j][static_cast<int>(st)];
            EXPECT_NEAR(e.value, a(j, st), 0.015);
            EXPECT_TRUE(e.agrees(a(j, st), 3.0)) << j << to_string(st) << " " << e.value << " vs " << a(j, st);
        }
}

TEST(MonteCarlo, InterferenceProbesAgreeWithAnalysis)
{
    NetworkConfig c;
    AnalysisSettings s;
    NetworkModel m(c, windowed_settings(c, s));
    const auto a = association_probabilities(m);
    // Probe the CCDF at its analytic quartiles.
    std::vector<double> cx;
    for (double q : {0.75, 0.5, 0.25}) {
        double lo = 1e-10, hi = 1e-5;
        for (int i = 0; i < 40; ++i) {
            const double mid = std::sqrt(lo * hi);
            (interference_ccdf(m, a, mid).total > q ? lo : hi) = mid;
        }
        cx.push_back(std::sqrt(lo * hi));
    }
    const std::vector<double> lx{2.5e6, 8e6, 2.5e7};
    const auto r = simulate_downlink(c, s, {1e-4, 1.0, 1.0, 0.5, lx, cx, false, 20000});
    for (std::size_t i = 0; i < lx.size(); ++i)
        EXPECT_NEAR(r.laplace[i].value, interference_laplace_total(m, lx[i]), 0.01) << lx[i];
    for (std::size_t i = 0; i < cx.size(); ++i)
        EXPECT_NEAR(r.ccdf[i].value, interference_ccdf(m, a, cx[i]).total, 0.015) << cx[i];
}

TEST(MonteCarlo, ServingDistancesPassKs)
{
    NetworkConfig c;
    AnalysisSettings s;
    NetworkModel m(c, windowed_settings(c, s));
    McDownlinkRequest req{1e-4, 1.0, 1.0, 0.5, {}, {}, true, 20000};
    const auto r = simulate_downlink(c, s, req);
    for (std::size_t j = 0; j < 3; ++j)
        for (auto st : link_states) {
            std::vector<double> xs;
            for (const auto& e : r.serving)
                if (e.tier == j && e.state == st) xs.push_back(e.distance);
            if (xs.size() < 500) continue;
            std::sort(xs.begin(), xs.end());
            const auto sd = serving_distance_pdf(m, j, st);
            // CDF at each sorted sample, accumulated piece by piece across the density's kinks
            std::vector<double> cuts(sd.points.begin(), sd.points.end());
            double cdf = 0, prev = sd.points.front(), d = 0;
            const double n = xs.size();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (double k : cuts)
                    if (k > prev && k < xs[i]) {
                        cdf += gauss_legendre10(sd.pdf, prev, k);
                        prev = k;
                    }
                cdf += gauss_legendre10(sd.pdf, prev, xs[i]);
                prev = xs[i];
                d = std::max({d, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
            }
            EXPECT_LT(d, 1.628 / std::sqrt(n)) << j << to_string(st) << " n=" << xs.size();
        }
}

TEST(MonteCarlo, MultiTierAssociationAgreesWithAnalysis)
{
    NetworkConfig base;
    MultiTierSet three{{{3e-5, base.uav_power, 1.0, 50.0}, {3e-5, base.uav_power, 1.0, 60.0}, {3e-5, base.uav_power, 1.0, 70.0}}, 0};
    const auto a = multi_tier_association(base, three);
    const auto r = simulate_downlink(with_tiers(base, three), AnalysisSettings{}, {1e-4, 1.0, 1.0, 0.5, {}, {}, false, 20000});
    ASSERT_EQ(r.association.size(), a.tiers());
    for (std::size_t j = 0; j < a.tiers(); ++j)
        for (auto st : link_states) EXPECT_NEAR(r.association[j][static_cast<int>(st)].value, a(j, st), 0.015) << j << to_string(st);
}
