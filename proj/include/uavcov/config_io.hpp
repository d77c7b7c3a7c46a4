#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <string>

#include <json.hpp>

#include "config.hpp"

namespace uavcov {

// Flat key set. Powers are in dBm, densities in 1/m^2, lengths in m, angles in rad.
// Scenario files may also carry the analysis keys (gamma_order, tolerances, mc_*).
namespace detail {

inline const char* pl_key(std::size_t tier, LinkState s, bool kappa)
{
    static const char* names[3][2][2] = {{{"alpha_los_tier0", "kappa_los_tier0"}, {"alpha_nlos_tier0", "kappa_nlos_tier0"}},
                                         {{"alpha_los_tier1", "kappa_los_tier1"}, {"alpha_nlos_tier1", "kappa_nlos_tier1"}},
                                         {{"alpha_los_tier2", "kappa_los_tier2"}, {"alpha_nlos_tier2", "kappa_nlos_tier2"}}};
    return names[tier][static_cast<int>(s)][kappa ? 1 : 0];
}

}  // namespace detail

inline nlohmann::json to_json(const NetworkConfig& c)
{
    nlohmann::json j;
    j["uav_density"] = c.uav_density;
    j["gbs_density"] = c.gbs_density;
    j["uav_power_dbm"] = watts_to_dbm(c.uav_power);
    j["gbs_power_dbm"] = watts_to_dbm(c.gbs_power);
    j["uav_bias"] = c.uav_bias;
    j["gbs_bias"] = c.gbs_bias;
    j["uav_height"] = c.uav_height;
    j["cluster_kind"] = to_string(c.cluster.kind);
    j["cluster_sigma"] = c.cluster.sigma;
    j["cluster_radius"] = c.cluster.radius;
    j["env_b"] = c.env_b;
    j["env_c"] = c.env_c;
    j["blockage_rate"] = c.blockage_rate;
    for (std::size_t t = 0; t < 3; ++t)
        for (auto s : link_states) {
            j[detail::pl_key(t, s, true)] = c.path_loss[t][s].kappa;
            j[detail::pl_key(t, s, false)] = c.path_loss[t][s].alpha;
        }
    j["antenna_main_bs"] = c.antenna.main_bs;
    j["antenna_side_bs"] = c.antenna.side_bs;
    j["antenna_main_ue"] = c.antenna.main_ue;
    j["antenna_side_ue"] = c.antenna.side_ue;
    j["antenna_beam_bs"] = c.antenna.beam_bs;
    j["antenna_beam_ue"] = c.antenna.beam_ue;
    j["nakagami_los"] = c.nakagami_los;
    j["nakagami_nlos"] = c.nakagami_nlos;
    j["thermal_noise_dbm"] = watts_to_dbm(c.thermal_noise);
    j["conversion_noise_dbm"] = watts_to_dbm(c.conversion_noise);
    j["frame"] = c.frame;
    j["tau"] = c.tau;
    j["rho"] = c.rho;
    j["ue_power_dbm"] = watts_to_dbm(c.ue_power);
    j["bandwidth"] = c.bandwidth;
    j["uav_tiers"] = nlohmann::json::array();
    for (const auto& t : c.uav_tiers)
        j["uav_tiers"].push_back(
            {{"density", t.density}, {"power_dbm", watts_to_dbm(t.power)}, {"bias", t.bias}, {"height", t.height}});
    j["parent_tier"] = c.parent_tier;
    return j;
}

inline nlohmann::json to_json(const AnalysisSettings& s)
{
    return {{"gamma_order", s.gamma_order},   {"quad_rel_tol", s.quad_rel_tol},
            {"quad_abs_tol", s.quad_abs_tol}, {"outer_rel_tol", s.outer_rel_tol},
            {"trunc_radius", s.trunc_radius}, {"mc_trials", s.mc_trials},
            {"mc_seed", s.mc_seed},           {"mc_window_rings", s.mc_window_rings},
            {"threads", s.threads}};
}

struct ScenarioFile {
    NetworkConfig config;
    AnalysisSettings settings;
};

// Unknown keys and wrongly typed values are reported together; missing keys keep defaults.
inline ScenarioFile from_json(const nlohmann::json& j, const ScenarioFile& base = {})
{
    if (!j.is_object()) throw ConfigError(std::vector<ConfigIssue>{{"<root>", "expected a JSON object"}});
    ScenarioFile out = base;
    NetworkConfig& c = out.config;
    AnalysisSettings& st = out.settings;
    std::vector<ConfigIssue> issues;

    std::map<std::string, std::function<void(const nlohmann::json&)>> set;
    auto num = [&](const char* key, double& dst) {
        set[key] = [&dst](const nlohmann::json& v) { dst = v.get<double>(); };
    };
    auto dbm = [&](const char* key, double& dst) {
        set[key] = [&dst](const nlohmann::json& v) { dst = dbm_to_watts(v.get<double>()); };
    };
    num("uav_density", c.uav_density);
    num("gbs_density", c.gbs_density);
    dbm("uav_power_dbm", c.uav_power);
    dbm("gbs_power_dbm", c.gbs_power);
    num("uav_bias", c.uav_bias);
    num("gbs_bias", c.gbs_bias);
    num("uav_height", c.uav_height);
    set["cluster_kind"] = [&c](const nlohmann::json& v) {
        const auto s = v.get<std::string>();
        if (s == "thomas")
            c.cluster.kind = ClusterKind::thomas;
        else if (s == "matern")
            c.cluster.kind = ClusterKind::matern;
        else
            throw std::invalid_argument("must be \"thomas\" or \"matern\"");
    };
    num("cluster_sigma", c.cluster.sigma);
    num("cluster_radius", c.cluster.radius);
    num("env_b", c.env_b);
    num("env_c", c.env_c);
    num("blockage_rate", c.blockage_rate);
    for (std::size_t t = 0; t < 3; ++t)
        for (auto s : link_states) {
            num(detail::pl_key(t, s, true), c.path_loss[t][s].kappa);
            num(detail::pl_key(t, s, false), c.path_loss[t][s].alpha);
        }
    num("antenna_main_bs", c.antenna.main_bs);
    num("antenna_side_bs", c.antenna.side_bs);
    num("antenna_main_ue", c.antenna.main_ue);
    num("antenna_side_ue", c.antenna.side_ue);
    num("antenna_beam_bs", c.antenna.beam_bs);
    num("antenna_beam_ue", c.antenna.beam_ue);
    set["nakagami_los"] = [&c](const nlohmann::json& v) { c.nakagami_los = v.get<int>(); };
    set["nakagami_nlos"] = [&c](const nlohmann::json& v) { c.nakagami_nlos = v.get<int>(); };
    dbm("thermal_noise_dbm", c.thermal_noise);
    dbm("conversion_noise_dbm", c.conversion_noise);
    num("frame", c.frame);
    num("tau", c.tau);
    num("rho", c.rho);
    dbm("ue_power_dbm", c.ue_power);
    num("bandwidth", c.bandwidth);
    set["uav_tiers"] = [&c](const nlohmann::json& v) {
        c.uav_tiers.clear();
        for (const auto& t : v) {
            UavTier u;
            for (auto it = t.begin(); it != t.end(); ++it) {
                if (it.key() == "density") u.density = it->get<double>();
                else if (it.key() == "power_dbm") u.power = dbm_to_watts(it->get<double>());
                else if (it.key() == "bias") u.bias = it->get<double>();
                else if (it.key() == "height") u.height = it->get<double>();
                else throw std::invalid_argument("unknown tier key '" + it.key() + "'");
            }
            c.uav_tiers.push_back(u);
        }
    };
    set["parent_tier"] = [&c](const nlohmann::json& v) { c.parent_tier = v.get<std::size_t>(); };

    set["gamma_order"] = [&st](const nlohmann::json& v) { st.gamma_order = v.get<int>(); };
    num("quad_rel_tol", st.quad_rel_tol);
    num("quad_abs_tol", st.quad_abs_tol);
    num("outer_rel_tol", st.outer_rel_tol);
    num("trunc_radius", st.trunc_radius);
    set["mc_trials"] = [&st](const nlohmann::json& v) { st.mc_trials = v.get<std::uint64_t>(); };
    set["mc_seed"] = [&st](const nlohmann::json& v) { st.mc_seed = v.get<std::uint64_t>(); };
    set["mc_window_rings"] = [&st](const nlohmann::json& v) { st.mc_window_rings = v.get<int>(); };
    set["threads"] = [&st](const nlohmann::json& v) { st.threads = v.get<unsigned>(); };

    for (auto it = j.begin(); it != j.end(); ++it) {
        auto f = set.find(it.key());
        if (f == set.end()) {
            issues.push_back({it.key(), "unknown key"});
            continue;
        }
        try {
            f->second(*it);
        } catch (const std::exception& e) {
            issues.push_back({it.key(), e.what()});
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    validate(c, st);
    return out;
}

inline ScenarioFile load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(std::vector<ConfigIssue>{{"config", "cannot open '" + path + "'"}});
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::vector<ConfigIssue>{{"config", std::string("parse error: ") + e.what()}});
    }
    return from_json(j);
}

inline std::string dump_scenario(const NetworkConfig& c, const AnalysisSettings& s)
{
    nlohmann::json j = to_json(c);
    j.update(to_json(s));
    return j.dump(2);
}

}  // namespace uavcov
