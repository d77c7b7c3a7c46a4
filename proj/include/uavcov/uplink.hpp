#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "downlink.hpp"

namespace uavcov {

struct UplinkContext {
    double p_active = 0.0;
    double gamma_ul = 0.0;
    double tx_power = 0.0;
    // Active interferer densities per state, split at the reference distance below.
    double los_density = 0.0;
    double nlos_density = 0.0;
    double reference_distance = 0.0;
};

// Probability that a UE harvests enough in tau to transmit for the rest of the frame.
inline double active_probability(const NetworkModel& m, const AssociationMatrix& a, double tau, double rho)
{
    const auto& cfg = m.config();
    const double need = (cfg.frame - tau) * cfg.ue_power;
    if (need <= 0.0) return 1.0;  // nothing to harvest for
    return energy_coverage(m, a, need, tau, rho).total;
}

inline double active_probability(double tau, double rho, const NetworkConfig& cfg, const AnalysisSettings& st = {})
{
    NetworkModel m(cfg, st);
    return active_probability(m, association_probabilities(m), tau, rho);
}

namespace detail {

inline const TierParams& parent_layer(const NetworkModel& m) { return m.tier(1 + m.scenario().parent); }

// Horizontal distance at which the constant thinning weight is evaluated: the mean
// nearest-neighbour distance 1/(2 sqrt(lambda)) between cluster centres.
inline double thinning_reference(const NetworkModel& m)
{
    const double lam = parent_layer(m).density;
    return lam > 0 ? 0.5 / std::sqrt(lam) : 0.0;
}

inline RadialKernel uplink_kernel(const NetworkModel& m, LinkState b, double tx_power)
{
    const auto& cfg = m.config();
    const double h = m.tier(0).height;
    RadialKernel k;
    k.power = tx_power;
    k.path_loss = cfg.path_loss[uav_slot][b];
    k.order = m.order(b);
    k.height = h;
    k.gains = &m.gains();
    k.trunc = m.trunc_radius(1 + m.scenario().parent);
    if (m.settings().uplink_thinning == UplinkThinning::constant) {
        const double p = state_prob(los_prob_a2g_ground(thinning_reference(m), h, cfg.env_b, cfg.env_c), b);
        k.state_prob = [p](double) { return p; };
    } else {
        const double eb = cfg.env_b, ec = cfg.env_c;
        k.state_prob = [h, eb, ec, b](double u) { return state_prob(los_prob_a2g_ground(u, h, eb, ec), b); };
    }
    return k;
}

}  // namespace detail

inline UplinkContext make_uplink_context(const NetworkModel& m, double p_active, double gamma_ul)
{
    const auto& cfg = m.config();
    UplinkContext ctx;
    ctx.p_active = p_active;
    ctx.gamma_ul = gamma_ul;
    ctx.tx_power = cfg.ue_power;
    ctx.reference_distance = detail::thinning_reference(m);
    const double lam = detail::parent_layer(m).density * p_active;
    const double p = los_prob_a2g_ground(ctx.reference_distance, m.tier(0).height, cfg.env_b, cfg.env_c);
    ctx.los_density = lam * p;
    ctx.nlos_density = lam * (1.0 - p);
    return ctx;
}

// Exponent integral of the uplink interference Laplace transform, per unit active density,
// written as the outer integral over cluster-centre distance w of the inner integral over
// the interferer's horizontal distance v.
inline double uplink_exponent_double(const NetworkModel& m, double x, LinkState b, const UplinkContext& ctx)
{
    const auto k = detail::uplink_kernel(m, b, ctx.tx_power);
    const ClusterOffset& off = m.cluster_law().offset();
    const double sc = off.scale();
    const double W = std::min(m.settings().trunc_radius, std::max(2000.0, 200.0 * sc));
    QuadOptions inner{m.settings().quad_rel_tol, 1e-16};
    QuadOptions outer{std::max(m.settings().quad_rel_tol, 1e-9), 1e-14};
    auto slice = [&](double w) {
        auto pts = off.relative_support(w);
        return integrate_value([&](double v) { return k.integrand(x, v) / std::max(v, 1e-300) * off.relative_pdf(v, w); },
                               pts, inner);
    };
    CompensatedSum total;
    const double knee = 4.0 * sc;
    total += integrate_value([&](double w) { return slice(w) * w; }, 0.0, knee, outer);
    total += integrate_value(
        [&](double y) {
            const double w = std::exp(y);
            return slice(w) * w * w;
        },
        std::log(knee), std::log(W), outer);
    // Beyond W the cluster spread is negligible against the distance.
    total += m.radial_integral(k, x, W, 1e-16);
    return total.value();
}

// Same exponent after integrating out the cluster-centre position.
inline double uplink_exponent_single(const NetworkModel& m, double x, LinkState b, const UplinkContext& ctx)
{
    const auto k = detail::uplink_kernel(m, b, ctx.tx_power);
    return m.radial_integral(k, x, 0.0, 1e-16);
}

inline double uplink_laplace(const NetworkModel& m, double x, LinkState b, const UplinkContext& ctx)
{
    const double lam = detail::parent_layer(m).density * ctx.p_active;
    if (x <= 0.0 || lam <= 0.0 || !m.settings().interference) return 1.0;
    const double e = m.settings().uplink_form == UplinkLaplaceForm::double_integral
                         ? uplink_exponent_double(m, x, b, ctx)
                         : uplink_exponent_single(m, x, b, ctx);
    return std::exp(-two_pi * lam * e);
}

// Uplink SINR coverage at the typical UE's cluster-centre UAV, averaged over both
// states of that link.
inline double uplink_sinr_coverage(const NetworkModel& m, const UplinkContext& ctx)
{
    const double gamma = ctx.gamma_ul;
    if (gamma <= 0.0) return 1.0;
    const auto& cfg = m.config();
    const ClusterDistanceLaw& law = m.cluster_law();
    const ClusterOffset& off = law.offset();
    const double h = law.height();
    QuadOptions opt{m.settings().outer_rel_tol, 1e-14};
    opt.scale = off.scale();
    CompensatedSum total;
    for (auto s : link_states) {
        const int ns = m.order(s);
        const double eta = alzer_constant(ns);
        const auto& pl = m.path_loss(0, s);
        auto f = [&](double d) {
            const double w = state_prob(los_prob_a2g_ground(d, h, cfg.env_b, cfg.env_c), s) * off.pdf(d);
            if (w <= 0.0) return 0.0;
            const double r0 = std::hypot(d, h);
            const double signal = ctx.tx_power * m.main_gain() / path_loss(r0, pl);
            CompensatedSum sum;
            for (int n = 1; n <= ns; ++n) {
                const double mu = n * eta * gamma / signal;
                double l = std::exp(-mu * cfg.thermal_noise);
                for (auto b : link_states) l *= uplink_laplace(m, mu, b, ctx);
                sum += ((n % 2 == 1) ? 1.0 : -1.0) * binomial(ns, n) * l;
            }
            return w * sum.value();
        };
        total += integrate_value(f, std::vector<double>{0.0, off.hi()}, opt);
    }
    return std::clamp(total.value(), 0.0, 1.0);
}

struct ThroughputResult {
    double tau = 0.0;
    double rate_ul = 0.0;   // bit/s
    double rate_dl = 0.0;   // bit/s
    double r_min = 0.0;
    bool feasible = false;
    double p_active = 0.0;
    double uplink_coverage = 0.0;
};

// sinr_total is the downlink SINR coverage, which does not depend on tau.
inline ThroughputResult average_uplink_throughput(const NetworkModel& m, const AssociationMatrix& a, double tau,
                                                  double rho, double gamma_ul, double sinr_total, double r_min = 0.0)
{
    const auto& cfg = m.config();
    ThroughputResult r;
    r.tau = tau;
    r.r_min = r_min;
    const double se = cfg.bandwidth * std::log2(1.0 + gamma_ul);
    r.rate_dl = tau * se * sinr_total;
    r.feasible = r.rate_dl >= r_min;
    if (tau >= cfg.frame) {
        r.p_active = 1.0;
        r.uplink_coverage = uplink_sinr_coverage(m, make_uplink_context(m, 1.0, gamma_ul));
        return r;
    }
    r.p_active = active_probability(m, a, tau, rho);
    r.uplink_coverage = uplink_sinr_coverage(m, make_uplink_context(m, r.p_active, gamma_ul));
    r.rate_ul = (cfg.frame - tau) * se * r.uplink_coverage * r.p_active;
    return r;
}

struct TauOptimum {
    bool feasible = false;
    double tau_min = 0.0;
    double sinr_total = 0.0;
    ThroughputResult best;
    std::vector<ThroughputResult> trace;
    std::string binding;  // names the violated constraint when infeasible
};

// Maximises the uplink rate over tau subject to the downlink rate floor: coarse grid, then
// golden-section refinement around the best grid point.
inline TauOptimum optimize_tau(const NetworkModel& m, const AssociationMatrix& a, double rho, double gamma_ul,
                               double gamma_sinr, double r_min, int grid = 64)
{
    const auto& cfg = m.config();
    TauOptimum out;
    out.sinr_total = sinr_coverage(m, a, gamma_sinr, rho).total;
    const double cap = cfg.bandwidth * std::log2(1.0 + gamma_ul) * out.sinr_total;
    out.tau_min = r_min > 0 ? (cap > 0 ? r_min / cap : inf) : 0.0;
    if (out.tau_min > cfg.frame) {
        out.binding = "downlink rate floor: tau_min " + std::to_string(out.tau_min) + " exceeds frame " +
                      std::to_string(cfg.frame);
        return out;
    }
    out.feasible = true;
    const double lo = out.tau_min, hi = cfg.frame;
    auto eval = [&](double t) { return average_uplink_throughput(m, a, t, rho, gamma_ul, out.sinr_total, r_min); };
    std::size_t best = 0;
    for (int i = 0; i < grid; ++i) {
        const double t = grid == 1 ? lo : lo + (hi - lo) * i / (grid - 1);
        out.trace.push_back(eval(t));
        if (out.trace.back().rate_ul > out.trace[best].rate_ul) best = out.trace.size() - 1;
    }
    out.best = out.trace[best];
    if (grid < 3) return out;
    double x0 = out.trace[best == 0 ? 0 : best - 1].tau;
    double x3 = out.trace[std::min<std::size_t>(best + 1, out.trace.size() - 1)].tau;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = x3 - g * (x3 - x0), x2 = x0 + g * (x3 - x0);
    ThroughputResult f1 = eval(x1), f2 = eval(x2);
    const double tol = 1e-5 * (hi - lo) + 1e-12;
    while (x3 - x0 > tol) {
        if (f1.rate_ul >= f2.rate_ul) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - g * (x3 - x0);
            f1 = eval(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + g * (x3 - x0);
            f2 = eval(x2);
        }
    }
    const ThroughputResult& cand = f1.rate_ul >= f2.rate_ul ? f1 : f2;
    if (cand.rate_ul > out.best.rate_ul) out.best = cand;
    return out;
}

}  // namespace uavcov
