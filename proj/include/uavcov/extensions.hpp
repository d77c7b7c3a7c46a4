#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "uplink.hpp"

namespace uavcov {

struct MultiTierSet {
    std::vector<UavTier> uav_tiers;
    std::size_t parent = 0;
};

inline NetworkConfig with_tiers(NetworkConfig cfg, const MultiTierSet& set)
{
    if (set.uav_tiers.empty()) throw std::invalid_argument("multi-tier model needs at least one UAV tier");
    cfg.uav_tiers = set.uav_tiers;
    cfg.parent_tier = set.parent;
    return cfg;
}

inline AssociationMatrix multi_tier_association(const NetworkConfig& cfg, const MultiTierSet& set,
                                                const AnalysisSettings& st = {})
{
    NetworkModel m(with_tiers(cfg, set), st);
    return association_probabilities(m);
}

inline CoverageReport multi_tier_stp(const NetworkConfig& cfg, const MultiTierSet& set, double gamma_e,
                                     double gamma_sinr, double tau, double rho, const AnalysisSettings& st = {})
{
    NetworkModel m(with_tiers(cfg, set), st);
    return successful_transmission(m, gamma_e, gamma_sinr, tau, rho);
}

enum class NoiseLimitedRegime { sinr_limited, energy_limited, interior_optimum };

inline const char* to_string(NoiseLimitedRegime r)
{
    switch (r) {
    case NoiseLimitedRegime::sinr_limited: return "sinr-limited";
    case NoiseLimitedRegime::energy_limited: return "energy-limited";
    default: return "interior-optimum";
    }
}

// Without interference the joint event reduces to whichever constraint binds; the sign of
// this balance (increasing in rho) says which.
inline double power_split_balance(double rho, double tau, double gamma_e, double gamma_sinr, const NetworkConfig& cfg)
{
    return gamma_e / (tau * (1.0 - rho)) - gamma_sinr * (cfg.conversion_noise / rho + cfg.thermal_noise);
}

struct NoiseLimitedCase {
    double balance = 0.0;
    NoiseLimitedRegime regime = NoiseLimitedRegime::interior_optimum;
};

inline NoiseLimitedCase noise_limited_case(double rho, double tau, double gamma_e, double gamma_sinr,
                                           const NetworkConfig& cfg, double rho_lo = 0.01, double rho_hi = 0.99)
{
    NoiseLimitedCase c;
    c.balance = power_split_balance(rho, tau, gamma_e, gamma_sinr, cfg);
    if (power_split_balance(rho_hi, tau, gamma_e, gamma_sinr, cfg) < 0)
        c.regime = NoiseLimitedRegime::sinr_limited;
    else if (power_split_balance(rho_lo, tau, gamma_e, gamma_sinr, cfg) > 0)
        c.regime = NoiseLimitedRegime::energy_limited;
    return c;
}

struct NoiseLimitedResult {
    TierStateValues stp;
    TierStateValues energy;
    TierStateValues sinr;
    NoiseLimitedCase regime;
};

inline AnalysisSettings without_interference(AnalysisSettings st)
{
    st.interference = false;
    return st;
}

inline NoiseLimitedResult noise_limited_stp(const NetworkModel& m, const AssociationMatrix& a, double rho, double tau,
                                            double gamma_e, double gamma_sinr)
{
    if (m.settings().interference)
        throw std::invalid_argument("noise_limited_stp expects a model built with interference disabled");
    NoiseLimitedResult r;
    r.regime = noise_limited_case(rho, tau, gamma_e, gamma_sinr, m.config());
    r.energy = energy_coverage(m, a, gamma_e, tau, rho);
    r.sinr = sinr_coverage(m, a, gamma_sinr, rho);
    const bool energy_binds = r.regime.balance >= 0;
    r.stp = energy_binds ? r.energy : r.sinr;
    return r;
}

inline NoiseLimitedResult noise_limited_stp(double rho, double tau, double gamma_e, double gamma_sinr,
                                            const NetworkConfig& cfg, const AnalysisSettings& st = {})
{
    NetworkModel m(cfg, without_interference(st));
    return noise_limited_stp(m, association_probabilities(m), rho, tau, gamma_e, gamma_sinr);
}

class NoInteriorOptimum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double bisect_balance(double tau, double gamma_e, double gamma_sinr, const NetworkConfig& cfg)
{
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (power_split_balance(mid, tau, gamma_e, gamma_sinr, cfg) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Root in (0,1) of the balance, i.e. of
//   tau g sn^2 rho^2 + (gE + tau g sc^2 - tau g sn^2) rho - tau g sc^2 = 0.
inline double optimal_rho(double tau, double gamma_e, double gamma_sinr, const NetworkConfig& cfg)
{
    if (!(tau > 0) || !(gamma_e > 0) || !(gamma_sinr > 0))
        throw NoInteriorOptimum("optimal_rho: thresholds and tau must be positive");
    const double sn = cfg.thermal_noise, sc = cfg.conversion_noise;
    const double tg = tau * gamma_sinr;
    // The balance tends to -inf at 0+ only with conversion noise, and to +inf at 1-.
    if (!(sc > 0) && power_split_balance(1e-300, tau, gamma_e, gamma_sinr, cfg) >= 0)
        throw NoInteriorOptimum("optimal_rho: energy constraint binds for every split");
    const double qa = tg * sn, qb = gamma_e + tg * sc - tg * sn, qc = tg * sc;
    double rho;
    const double disc = qb * qb + 4.0 * qa * qc;
    if (qa == 0.0)
        rho = qc / qb;
    else if (qb >= 0)
        rho = 2.0 * qc / (qb + std::sqrt(disc));
    else
        rho = (-qb + std::sqrt(disc)) / (2.0 * qa);
    const double scale = gamma_e / tau + gamma_sinr * (sc + sn);
    if (!(rho > 0 && rho < 1) ||
        std::abs(power_split_balance(rho, tau, gamma_e, gamma_sinr, cfg)) > 1e-9 * scale / std::max(1.0 - rho, 1e-300))
        rho = bisect_balance(tau, gamma_e, gamma_sinr, cfg);
    if (!(rho > 0 && rho < 1)) throw NoInteriorOptimum("optimal_rho: no root inside (0,1)");
    return rho;
}

// Noise-limited uplink coverage for a LOS, square-law, Rayleigh serving link:
// E[exp(-C R0^2)] with C = gamma sn^2 kappa / (P G0).
inline double uplink_closed_form_constant(double gamma_ul, const NetworkConfig& cfg)
{
    const double kappa = cfg.path_loss[cluster_slot].los.kappa;
    return gamma_ul * cfg.thermal_noise * kappa / (cfg.ue_power * cfg.antenna.main_link_gain());
}

inline double uplink_closed_form_at(double c, const NetworkConfig& cfg)
{
    const double h = cfg.uav_tiers.empty() ? cfg.uav_height : cfg.uav_tiers.at(cfg.parent_tier).height;
    const double head = std::exp(-c * h * h);
    if (cfg.cluster.kind == ClusterKind::thomas) {
        const double s = cfg.cluster.sigma;
        return head / (1.0 + 2.0 * c * s * s);
    }
    const double z = c * cfg.cluster.radius * cfg.cluster.radius;
    return z > 0 ? head * (-std::expm1(-z)) / z : head;
}

inline double uplink_closed_form(double gamma_ul, const NetworkConfig& cfg)
{
    return uplink_closed_form_at(uplink_closed_form_constant(gamma_ul, cfg), cfg);
}

}  // namespace uavcov
