#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "model.hpp"
#include "parallel.hpp"

namespace uavcov {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Every (trial, purpose) pair gets its own generator so draws never shift when the
// number of workers or the simulation window changes.
inline std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose)
{
    const std::uint64_t s = splitmix64(splitmix64(splitmix64(seed) ^ trial) + purpose);
    return std::mt19937_64(s);
}

// 95% normal-approximation half-width of a proportion.
inline double confidence(double p_hat, std::uint64_t n)
{
    if (n == 0) return 0.0;
    return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

struct TrialEstimate {
    double value = 0.0;
    double half_width = 0.0;
    // Wilson score interval; unlike the normal one it keeps a width when no trial
    // (or every trial) succeeds. Means use the normal interval for both.
    double centre = 0.0;
    double score_half_width = 0.0;
    std::uint64_t n = 0;

    bool agrees(double x, double widths = 3.0) const { return std::abs(x - centre) <= widths * score_half_width; }
};

inline TrialEstimate proportion(std::uint64_t hits, std::uint64_t n)
{
    TrialEstimate e;
    e.n = n;
    if (n == 0) return e;
    const double z2 = 1.96 * 1.96, p = static_cast<double>(hits) / n;
    const double den = 1.0 + z2 / n;
    e.value = p;
    e.half_width = confidence(p, n);
    e.centre = (p + z2 / (2.0 * n)) / den;
    e.score_half_width = 1.96 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
    return e;
}

inline TrialEstimate sample_mean(double sum, double sum_sq, std::uint64_t n)
{
    TrialEstimate e;
    e.n = n;
    if (n == 0) return e;
    e.value = sum / n;
    e.centre = e.value;
    const double var = n > 1 ? std::max(0.0, (sum_sq - sum * e.value) / (n - 1)) : 0.0;
    e.half_width = 1.96 * std::sqrt(var / n);
    e.score_half_width = e.half_width;
    return e;
}

inline constexpr std::uint64_t mc_block = 1000;
inline constexpr std::uint64_t mc_default_trials = 100000;

inline double mc_ring_width(double density) { return 5.0 / std::sqrt(density); }

// Outer radius of the sampled window of PPP tier k (0 for the cluster tier or an empty tier).
inline double mc_window(const Scenario& sc, std::size_t k, int rings)
{
    if (k == 0 || !(sc[k].density > 0)) return 0.0;
    return rings * mc_ring_width(sc[k].density);
}

// Settings that make the analysis integrate interference over exactly the simulated windows.
inline AnalysisSettings windowed_settings(const NetworkConfig& cfg, AnalysisSettings st)
{
    const Scenario sc = make_scenario(cfg);
    st.tier_trunc_radius.assign(sc.size(), 0.0);
    for (std::size_t k = 1; k < sc.size(); ++k) st.tier_trunc_radius[k] = mc_window(sc, k, st.mc_window_rings);
    st.interference_tail = false;
    return st;
}

struct ServingSample {
    std::uint32_t tier;
    LinkState state;
    double distance;
};

struct McDownlinkRequest {
    double gamma_e = 0.0;
    double gamma_sinr = 0.0;
    double tau = 1.0;
    double rho = 0.5;
    std::vector<double> laplace_args;
    std::vector<double> ccdf_args;
    bool record_serving = false;
    std::uint64_t trials = 0;  // 0 takes settings.mc_trials, then the default
};

struct McDownlinkResult {
    std::uint64_t trials = 0;
    std::vector<std::array<TrialEstimate, 2>> association;
    TrialEstimate energy, sinr, stp;
    TrialEstimate mean_interference;  // W
    std::vector<TrialEstimate> laplace;
    std::vector<TrialEstimate> ccdf;
    std::vector<ServingSample> serving;
    std::vector<double> windows;
    std::uint64_t served_from_outer_ring = 0;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::uint64_t resolve_trials(std::uint64_t requested, const AnalysisSettings& st)
{
    if (requested) return requested;
    return st.mc_trials ? st.mc_trials : mc_default_trials;
}

inline int draw_gain(const std::array<GainLevel, 4>& pmf, double u)
{
    double c = 0.0;
    for (int i = 0; i < 3; ++i) {
        c += pmf[i].prob;
        if (u < c) return i;
    }
    return 3;
}

inline double state_los_prob(const TierParams& t, double u, const NetworkConfig& cfg)
{
    if (t.kind == TierKind::ground) return los_prob_g2g(u, cfg.blockage_rate);
    return los_prob_a2g_ground(u, t.height, cfg.env_b, cfg.env_c);
}

// Mean far-field power beyond radius w from a PPP tier, to flag windows that are too small.
inline double tail_power(const TierParams& t, double w, const NetworkConfig& cfg, const std::array<GainLevel, 4>& g)
{
    double out = 0.0;
    for (auto b : link_states) {
        const auto& pl = t.path_loss[b];
        const double p = state_prob(state_los_prob(t, w, cfg), b);
        if (p <= 0.0) continue;
        if (!(pl.alpha > 2.0)) return inf;
        out += two_pi * t.density * p * t.power * mean_gain(g) / pl.kappa * std::pow(w, 2.0 - pl.alpha) / (pl.alpha - 2.0);
    }
    return out;
}

struct DownlinkBlock {
    std::vector<std::array<std::uint64_t, 2>> assoc;
    std::uint64_t energy = 0, sinr = 0, stp = 0, outer = 0;
    double i_sum = 0.0, i_sq = 0.0;
    std::vector<double> lap_sum, lap_sq;
    std::vector<std::uint64_t> ccdf;
    std::vector<ServingSample> serving;
};

// One transmitter seen from the typical UE.
struct Candidate {
    double metric = -1.0;    // biased mean received power used for association
    double as_interferer = 0.0;
    double as_server = 0.0;  // received power with main-lobe gain
    std::uint32_t tier = 0;
    LinkState state = LinkState::los;
    double distance = 0.0;
    bool outer = false;
};

}  // namespace detail

inline McDownlinkResult simulate_downlink(const NetworkConfig& cfg, const AnalysisSettings& st,
                                          const McDownlinkRequest& req)
{
    validate(cfg, st);
    const Scenario sc = make_scenario(cfg);
    const auto gains = gain_pmf(cfg.antenna);
    const double g0 = cfg.antenna.main_link_gain();
    const ClusterOffset offset(cfg.cluster);
    const std::uint64_t trials = detail::resolve_trials(req.trials, st);
    const int rings = st.mc_window_rings;
    const bool with_interference = st.interference;
    const std::size_t nt = sc.size();
    const std::size_t nl = req.laplace_args.size(), nc = req.ccdf_args.size();
    const double harvest = req.tau * (1.0 - req.rho);
    const double noise = req.rho > 0 ? cfg.conversion_noise / req.rho + cfg.thermal_noise : inf;

    auto make = [&](std::size_t j, LinkState s, double u, double fade, int level, bool outer) {
        const auto& t = sc[j];
        const auto& pl = t.path_loss[s];
        detail::Candidate c;
        c.distance = std::hypot(u, t.height);
        const double loss = path_loss(c.distance, pl);
        c.metric = t.power * t.bias / loss;
        c.as_interferer = t.power * gains[level].gain * fade / loss;
        c.as_server = t.power * g0 * fade / loss;
        c.tier = static_cast<std::uint32_t>(j);
        c.state = s;
        c.outer = outer;
        return c;
    };

    auto run_block = [&](std::size_t b) {
        detail::DownlinkBlock out;
        out.assoc.assign(nt, {0, 0});
        out.lap_sum.assign(nl, 0.0);
        out.lap_sq.assign(nl, 0.0);
        out.ccdf.assign(nc, 0);
        const std::uint64_t first = b * mc_block, last = std::min(trials, first + mc_block);
        for (std::uint64_t trial = first; trial < last; ++trial) {
            detail::Candidate best;
            double interference = 0.0;
            auto offer = [&](const detail::Candidate& c) {
                if (c.metric > best.metric) {
                    if (best.metric >= 0.0) interference += best.as_interferer;
                    best = c;
                } else {
                    interference += c.as_interferer;
                }
            };
            {
                auto rng = trial_stream(st.mc_seed, trial, 0);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                const auto d = offset.sample(rng);
                const double u = std::hypot(d[0], d[1]);
                const LinkState s = unif(rng) < detail::state_los_prob(sc[0], u, cfg) ? LinkState::los : LinkState::nlos;
                const int level = detail::draw_gain(gains, unif(rng));
                std::gamma_distribution<double> fade(cfg.nakagami(s), 1.0 / cfg.nakagami(s));
                offer(make(0, s, u, fade(rng), level, false));
            }
            for (std::size_t k = 1; k < nt; ++k) {
                const double lam = sc[k].density;
                if (!(lam > 0)) continue;
                const double w = mc_ring_width(lam);
                for (int i = 0; i < rings; ++i) {
                    auto rng = trial_stream(st.mc_seed, trial, 1 + 1024 * k + i);
                    std::uniform_real_distribution<double> unif(0.0, 1.0);
                    std::gamma_distribution<double> fade_l(cfg.nakagami_los, 1.0 / cfg.nakagami_los);
                    std::gamma_distribution<double> fade_n(cfg.nakagami_nlos, 1.0 / cfg.nakagami_nlos);
                    const double r_in = i * w, r_out = (i + 1) * w;
                    std::poisson_distribution<long> count(lam * std::numbers::pi * (r_out * r_out - r_in * r_in));
                    const long n = count(rng);
                    for (long p = 0; p < n; ++p) {
                        const double u = std::sqrt(r_in * r_in + unif(rng) * (r_out * r_out - r_in * r_in));
                        unif(rng);  // azimuth: unused by an isotropic model, drawn to keep the stream layout fixed
                        const LinkState s =
                            unif(rng) < detail::state_los_prob(sc[k], u, cfg) ? LinkState::los : LinkState::nlos;
                        const int level = detail::draw_gain(gains, unif(rng));
                        const double h = s == LinkState::los ? fade_l(rng) : fade_n(rng);
                        if (std::hypot(u, sc[k].height) <= 0.0) continue;
                        offer(make(k, s, u, h, level, i == rings - 1));
                    }
                }
            }
            if (!with_interference) interference = 0.0;
            const double sig = best.as_server;
            out.assoc[best.tier][static_cast<int>(best.state)]++;
            if (best.outer) out.outer++;
            const bool e_ok = req.gamma_e <= 0.0 || harvest * (sig + interference) >= req.gamma_e;
            const bool s_ok = req.gamma_sinr <= 0.0 || (req.rho > 0 && sig / (noise + interference) >= req.gamma_sinr);
            out.energy += e_ok;
            out.sinr += s_ok;
            out.stp += e_ok && s_ok;
            out.i_sum += interference;
            out.i_sq += interference * interference;
            for (std::size_t q = 0; q < nl; ++q) {
                const double v = std::exp(-req.laplace_args[q] * interference);
                out.lap_sum[q] += v;
                out.lap_sq[q] += v * v;
            }
            for (std::size_t q = 0; q < nc; ++q) out.ccdf[q] += interference > req.ccdf_args[q];
            if (req.record_serving) out.serving.push_back({best.tier, best.state, best.distance});
        }
        return out;
    };

    const std::size_t blocks = static_cast<std::size_t>((trials + mc_block - 1) / mc_block);
    const auto parts = parallel_map<detail::DownlinkBlock>(blocks, st.threads, run_block);

    // Reduce in block order so sums do not depend on scheduling.
    McDownlinkResult res;
    res.trials = trials;
    std::vector<std::array<std::uint64_t, 2>> assoc(nt, {0, 0});
    std::uint64_t e = 0, s = 0, p = 0;
    double i_sum = 0.0, i_sq = 0.0;
    std::vector<double> ls(nl, 0.0), lq(nl, 0.0);
    std::vector<std::uint64_t> cc(nc, 0);
    for (const auto& part : parts) {
        for (std::size_t j = 0; j < nt; ++j)
            for (int k = 0; k < 2; ++k) assoc[j][k] += part.assoc[j][k];
        e += part.energy;
        s += part.sinr;
        p += part.stp;
        res.served_from_outer_ring += part.outer;
        i_sum += part.i_sum;
        i_sq += part.i_sq;
        for (std::size_t q = 0; q < nl; ++q) {
            ls[q] += part.lap_sum[q];
            lq[q] += part.lap_sq[q];
        }
        for (std::size_t q = 0; q < nc; ++q) cc[q] += part.ccdf[q];
        res.serving.insert(res.serving.end(), part.serving.begin(), part.serving.end());
    }
    res.association.resize(nt);
    for (std::size_t j = 0; j < nt; ++j)
        for (int k = 0; k < 2; ++k) res.association[j][k] = proportion(assoc[j][k], trials);
    res.energy = proportion(e, trials);
    res.sinr = proportion(s, trials);
    res.stp = proportion(p, trials);
    res.mean_interference = sample_mean(i_sum, i_sq, trials);
    for (std::size_t q = 0; q < nl; ++q) res.laplace.push_back(sample_mean(ls[q], lq[q], trials));
    for (std::size_t q = 0; q < nc; ++q) res.ccdf.push_back(proportion(cc[q], trials));

    res.windows.assign(nt, 0.0);
    double tail = 0.0;
    for (std::size_t k = 1; k < nt; ++k) {
        res.windows[k] = mc_window(sc, k, rings);
        if (sc[k].density > 0) tail += detail::tail_power(sc[k], res.windows[k], cfg, gains);
    }
    if (res.served_from_outer_ring > 0)
        res.warnings.push_back(std::to_string(res.served_from_outer_ring) +
                               " trials were served from the outermost ring; enlarge mc_window_rings");
    if (with_interference && tail > 1e-3 * res.mean_interference.value) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "mean interference beyond the window is about %.3g W against %.3g W inside",
                      tail, res.mean_interference.value);
        res.warnings.push_back(buf);
    }
    return res;
}

// P(a UE stores enough energy in tau to transmit for the rest of the frame), by simulation.
inline TrialEstimate simulate_active_probability(const NetworkConfig& cfg, const AnalysisSettings& st, double tau,
                                                 double rho, std::uint64_t trials = 0)
{
    McDownlinkRequest req;
    req.gamma_e = (cfg.frame - tau) * cfg.ue_power;
    req.tau = tau;
    req.rho = rho;
    req.trials = trials;
    return simulate_downlink(cfg, st, req).energy;
}

struct McUplinkRequest {
    double gamma_ul = 0.0;
    // Negative: estimate it first from downlink energy trials at (tau, rho).
    double p_active = -1.0;
    double tau = 0.5;
    double rho = 0.0;
    std::uint64_t trials = 0;
};

struct McUplinkResult {
    std::uint64_t trials = 0;
    TrialEstimate p_active;  // zero width when supplied
    TrialEstimate coverage;
    TrialEstimate mean_interference;
    double window = 0.0;
    std::vector<std::string> warnings;
};

// Uplink from the typical UE to its cluster-centre UAV, with one UE of every other
// cluster of the same layer transmitting with probability p_active.
inline McUplinkResult simulate_uplink(const NetworkConfig& cfg, const AnalysisSettings& st, const McUplinkRequest& req)
{
    validate(cfg, st);
    const Scenario sc = make_scenario(cfg);
    const auto gains = gain_pmf(cfg.antenna);
    const double g0 = cfg.antenna.main_link_gain();
    const ClusterOffset offset(cfg.cluster);
    const std::uint64_t trials = detail::resolve_trials(req.trials, st);
    const int rings = st.mc_window_rings;
    const TierParams& host = sc[0];
    const TierParams& layer = sc[1 + sc.parent];
    const double lam = layer.density;
    const double h = host.height;
    const double ptx = cfg.ue_power;
    TrialEstimate pa;
    if (req.p_active < 0) {
        pa = simulate_active_probability(cfg, st, req.tau, req.rho, trials);
    } else {
        pa.value = pa.centre = req.p_active;
        pa.n = trials;
    }
    const double p_active = std::clamp(pa.value, 0.0, 1.0);

    struct Block {
        std::uint64_t hits = 0;
        double i_sum = 0.0, i_sq = 0.0;
    };
    auto los = [&](double u) { return los_prob_a2g_ground(u, h, cfg.env_b, cfg.env_c); };

    auto run_block = [&](std::size_t b) {
        Block out;
        const std::uint64_t first = b * mc_block, last = std::min(trials, first + mc_block);
        for (std::uint64_t trial = first; trial < last; ++trial) {
            double sig;
            {
                auto rng = trial_stream(st.mc_seed, trial, 1ULL << 40);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                const auto d = offset.sample(rng);
                const double u = std::hypot(d[0], d[1]);
                const LinkState s = unif(rng) < los(u) ? LinkState::los : LinkState::nlos;
                std::gamma_distribution<double> fade(cfg.nakagami(s), 1.0 / cfg.nakagami(s));
                sig = ptx * g0 * fade(rng) / path_loss(std::hypot(u, h), host.path_loss[s]);
            }
            double interference = 0.0;
            if (lam > 0 && p_active > 0) {
                const double w = mc_ring_width(lam);
                for (int i = 0; i < rings; ++i) {
                    auto rng = trial_stream(st.mc_seed, trial, (1ULL << 40) + 1 + i);
                    std::uniform_real_distribution<double> unif(0.0, 1.0);
                    std::gamma_distribution<double> fade_l(cfg.nakagami_los, 1.0 / cfg.nakagami_los);
                    std::gamma_distribution<double> fade_n(cfg.nakagami_nlos, 1.0 / cfg.nakagami_nlos);
                    const double r_in = i * w, r_out = (i + 1) * w;
                    std::poisson_distribution<long> count(lam * std::numbers::pi * (r_out * r_out - r_in * r_in));
                    const long n = count(rng);
                    for (long p = 0; p < n; ++p) {
                        const double rc = std::sqrt(r_in * r_in + unif(rng) * (r_out * r_out - r_in * r_in));
                        const double ac = two_pi * unif(rng);
                        const bool active = unif(rng) < p_active;
                        const auto d = offset.sample(rng);
                        const double x = rc * std::cos(ac) + d[0], y = rc * std::sin(ac) + d[1];
                        const double u = std::hypot(x, y);
                        const LinkState s = unif(rng) < los(u) ? LinkState::los : LinkState::nlos;
                        const int level = detail::draw_gain(gains, unif(rng));
                        const double fade = s == LinkState::los ? fade_l(rng) : fade_n(rng);
                        if (!active) continue;
                        interference += ptx * gains[level].gain * fade / path_loss(std::hypot(u, h), layer.path_loss[s]);
                    }
                }
            }
            if (!st.interference) interference = 0.0;
            out.hits += req.gamma_ul <= 0.0 || sig / (cfg.thermal_noise + interference) >= req.gamma_ul;
            out.i_sum += interference;
            out.i_sq += interference * interference;
        }
        return out;
    };

    const std::size_t blocks = static_cast<std::size_t>((trials + mc_block - 1) / mc_block);
    const auto parts = parallel_map<Block>(blocks, st.threads, run_block);
    std::uint64_t hits = 0;
    double i_sum = 0.0, i_sq = 0.0;
    for (const auto& p : parts) {
        hits += p.hits;
        i_sum += p.i_sum;
        i_sq += p.i_sq;
    }
    McUplinkResult res;
    res.trials = trials;
    res.p_active = pa;
    res.coverage = proportion(hits, trials);
    res.mean_interference = sample_mean(i_sum, i_sq, trials);
    res.window = lam > 0 ? rings * mc_ring_width(lam) : 0.0;
    return res;
}

}  // namespace uavcov
