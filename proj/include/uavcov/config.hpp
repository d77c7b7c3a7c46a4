#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "units.hpp"

namespace uavcov {

enum class LinkState : int { los = 0, nlos = 1 };
inline constexpr std::array<LinkState, 2> link_states{LinkState::los, LinkState::nlos};

inline const char* to_string(LinkState s) { return s == LinkState::los ? "los" : "nlos"; }

enum class ClusterKind { thomas, matern };

inline const char* to_string(ClusterKind k) { return k == ClusterKind::thomas ? "thomas" : "matern"; }

struct ClusterSpec {
    ClusterKind kind = ClusterKind::thomas;
    double sigma = 10.0;   // Gaussian spread per axis
    double radius = 20.0;  // disc radius
};

// Sectored pattern: main-lobe gain inside the beamwidth, side-lobe gain elsewhere.
struct AntennaPattern {
    double main_bs = 10.0;
    double side_bs = 0.1;
    double main_ue = 10.0;
    double side_ue = 0.1;
    double beam_bs = std::numbers::pi / 6.0;
    double beam_ue = std::numbers::pi / 6.0;

    double main_link_gain() const { return main_bs * main_ue; }
};

struct PathLoss {
    double kappa = 1.0;
    double alpha = 2.0;
};

struct TierPathLoss {
    PathLoss los{std::pow(10.0, 3.08), 2.09};
    PathLoss nlos{std::pow(10.0, 0.27), 3.75};

    const PathLoss& operator[](LinkState s) const { return s == LinkState::los ? los : nlos; }
    PathLoss& operator[](LinkState s) { return s == LinkState::los ? los : nlos; }
};

// Extra UAV layer for the multi-height model.
struct UavTier {
    double density = 0.0;
    double power = 0.0;
    double bias = 1.0;
    double height = 0.0;
};

// Index into path_loss.
enum TierSlot : std::size_t { cluster_slot = 0, uav_slot = 1, gbs_slot = 2 };

struct NetworkConfig {
    double uav_density = 1e-4;
    double gbs_density = 1e-5;
    double uav_power = dbm_to_watts(24.0);
    double gbs_power = dbm_to_watts(34.0);
    double uav_bias = 1.0;
    double gbs_bias = 1.0;
    double uav_height = 50.0;
    ClusterSpec cluster;

    // Air-to-ground LOS curve constants and the ground blockage rate.
    double env_b = 0.136;
    double env_c = 11.95;
    double blockage_rate = 1.0 / 141.4;

    std::array<TierPathLoss, 3> path_loss{};
    AntennaPattern antenna;
    int nakagami_los = 2;
    int nakagami_nlos = 3;

    double thermal_noise = thermal_noise_power(100e6, 10.0);
    double conversion_noise = 1e-8;

    double frame = 1.0;
    double tau = 1.0;
    double rho = 0.5;
    double ue_power = dbm_to_watts(1.0);
    double bandwidth = 100e6;

    // When non-empty these replace the single UAV layer; the typical UE's
    // cluster belongs to uav_tiers[parent_tier].
    std::vector<UavTier> uav_tiers;
    std::size_t parent_tier = 0;

    int nakagami(LinkState s) const { return s == LinkState::los ? nakagami_los : nakagami_nlos; }
};

enum class UplinkThinning { distance_dependent, constant };
enum class UplinkLaplaceForm { double_integral, single_integral };

struct AnalysisSettings {
    int gamma_order = 5;
    double quad_rel_tol = 1e-8;
    double quad_abs_tol = 1e-12;
    double outer_rel_tol = 1e-6;
    double trunc_radius = 1e5;
    // Optional override per tier index (0 or missing keeps trunc_radius).
    std::vector<double> tier_trunc_radius;
    // Adds the far-field power-law remainder beyond trunc_radius to interference integrals.
    bool interference_tail = true;
    // false evaluates every formula with all interference removed.
    bool interference = true;
    UplinkThinning uplink_thinning = UplinkThinning::distance_dependent;
    UplinkLaplaceForm uplink_form = UplinkLaplaceForm::single_integral;
    std::uint64_t mc_trials = 0;
    std::uint64_t mc_seed = 1;
    int mc_window_rings = 2;
    unsigned threads = 0;
};

struct ConfigIssue {
    std::string field;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues))
    {
    }
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<ConfigIssue>& issues)
    {
        std::string s;
        for (const auto& i : issues) {
            if (!s.empty()) s += "; ";
            s += i.field + ": " + i.message;
        }
        return s;
    }
    std::vector<ConfigIssue> issues_;
};

inline std::vector<ConfigIssue> check_config(const NetworkConfig& c)
{
    std::vector<ConfigIssue> out;
    auto need = [&](bool ok, const char* field, const char* msg) {
        if (!ok) out.push_back({field, msg});
    };
    auto finite = [](double x) { return std::isfinite(x); };

    need(finite(c.uav_density) && c.uav_density >= 0, "uav_density", "must be >= 0");
    need(finite(c.gbs_density) && c.gbs_density >= 0, "gbs_density", "must be >= 0");
    need(finite(c.uav_power) && c.uav_power > 0, "uav_power", "must be > 0");
    need(finite(c.gbs_power) && c.gbs_power > 0, "gbs_power", "must be > 0");
    need(finite(c.uav_bias) && c.uav_bias > 0, "uav_bias", "must be > 0");
    need(finite(c.gbs_bias) && c.gbs_bias > 0, "gbs_bias", "must be > 0");
    need(finite(c.uav_height) && c.uav_height >= 0, "uav_height", "must be >= 0");
    if (c.cluster.kind == ClusterKind::thomas)
        need(finite(c.cluster.sigma) && c.cluster.sigma > 0, "cluster.sigma", "must be > 0 for a Thomas cluster");
    else
        need(finite(c.cluster.radius) && c.cluster.radius > 0, "cluster.radius", "must be > 0 for a Matern cluster");
    need(finite(c.env_b) && c.env_b > 0, "env_b", "must be > 0");
    need(finite(c.env_c) && c.env_c > 0, "env_c", "must be > 0");
    need(finite(c.blockage_rate) && c.blockage_rate > 0, "blockage_rate", "must be > 0");
    static const char* pl_names[3][4] = {
        {"kappa_los_tier0", "alpha_los_tier0", "kappa_nlos_tier0", "alpha_nlos_tier0"},
        {"kappa_los_tier1", "alpha_los_tier1", "kappa_nlos_tier1", "alpha_nlos_tier1"},
        {"kappa_los_tier2", "alpha_los_tier2", "kappa_nlos_tier2", "alpha_nlos_tier2"}};
    for (std::size_t t = 0; t < 3; ++t) {
        const auto& pl = c.path_loss[t];
        need(finite(pl.los.kappa) && pl.los.kappa > 0, pl_names[t][0], "must be > 0");
        need(finite(pl.los.alpha) && pl.los.alpha > 0, pl_names[t][1], "must be > 0");
        need(finite(pl.nlos.kappa) && pl.nlos.kappa > 0, pl_names[t][2], "must be > 0");
        need(finite(pl.nlos.alpha) && pl.nlos.alpha > 0, pl_names[t][3], "must be > 0");
    }
    const auto& a = c.antenna;
    need(a.side_bs > 0 && a.main_bs >= a.side_bs, "antenna.bs", "need main >= side > 0");
    need(a.side_ue > 0 && a.main_ue >= a.side_ue, "antenna.ue", "need main >= side > 0");
    const double two_pi = 2.0 * std::numbers::pi;
    need(a.beam_bs > 0 && a.beam_bs <= two_pi + 1e-12, "antenna.beam_bs", "beamwidth must be in (0, 2pi]");
    need(a.beam_ue > 0 && a.beam_ue <= two_pi + 1e-12, "antenna.beam_ue", "beamwidth must be in (0, 2pi]");
    need(c.nakagami_los >= 1, "nakagami_los", "must be an integer >= 1");
    need(c.nakagami_nlos >= 1, "nakagami_nlos", "must be an integer >= 1");
    need(finite(c.thermal_noise) && c.thermal_noise >= 0, "thermal_noise", "must be >= 0");
    need(finite(c.conversion_noise) && c.conversion_noise >= 0, "conversion_noise", "must be >= 0");
    need(finite(c.frame) && c.frame > 0, "frame", "must be > 0");
    need(finite(c.tau) && c.tau >= 0 && c.tau <= c.frame, "tau", "tau out of [0,frame]");
    need(finite(c.rho) && c.rho >= 0 && c.rho <= 1, "rho", "rho out of [0,1]");
    need(finite(c.ue_power) && c.ue_power > 0, "ue_power", "must be > 0");
    need(finite(c.bandwidth) && c.bandwidth > 0, "bandwidth", "must be > 0");
    for (const auto& t : c.uav_tiers) {
        need(finite(t.density) && t.density >= 0, "uav_tiers.density", "must be >= 0");
        need(finite(t.power) && t.power > 0, "uav_tiers.power", "must be > 0");
        need(finite(t.bias) && t.bias > 0, "uav_tiers.bias", "must be > 0");
        need(finite(t.height) && t.height >= 0, "uav_tiers.height", "must be >= 0");
    }
    if (!c.uav_tiers.empty())
        need(c.parent_tier < c.uav_tiers.size(), "parent_tier", "must index one of uav_tiers");
    return out;
}

inline std::vector<ConfigIssue> check_settings(const AnalysisSettings& s, const NetworkConfig& c)
{
    std::vector<ConfigIssue> out;
    if (s.gamma_order < 1 || s.gamma_order > 10)
        out.push_back({"gamma_order", "must be in [1,10]"});
    if (!(s.quad_rel_tol > 0) || !(s.quad_abs_tol > 0) || !(s.outer_rel_tol > 0))
        out.push_back({"quad_tol", "tolerances must be > 0"});
    double support = c.uav_height;
    for (const auto& t : c.uav_tiers) support = std::max(support, t.height);
    support = std::max(support, c.cluster.kind == ClusterKind::thomas ? 10.0 * c.cluster.sigma : c.cluster.radius);
    if (!(s.trunc_radius > support))
        out.push_back({"trunc_radius", "must exceed heights and cluster extent"});
    for (double t : s.tier_trunc_radius)
        if (!(t >= 0) || !std::isfinite(t)) out.push_back({"tier_trunc_radius", "entries must be finite and >= 0"});
    if (s.mc_window_rings < 1) out.push_back({"mc_window_rings", "must be >= 1"});
    return out;
}

inline NetworkConfig validate_config(NetworkConfig c)
{
    auto issues = check_config(c);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

inline void validate(const NetworkConfig& c, const AnalysisSettings& s)
{
    auto issues = check_config(c);
    auto more = check_settings(s, c);
    issues.insert(issues.end(), more.begin(), more.end());
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace uavcov
