#pragma once

#include <array>
#include <functional>
#include <vector>

#include "model.hpp"

namespace uavcov {

struct AssociationMatrix {
    std::vector<std::array<double, 2>> a;  // a[j][s]

    double operator()(std::size_t j, LinkState s) const { return a.at(j)[static_cast<int>(s)]; }
    double tier(std::size_t j) const { return a.at(j)[0] + a.at(j)[1]; }
    double sum() const
    {
        CompensatedSum t;
        for (const auto& row : a) t += row[0] + row[1];
        return t.value();
    }
    std::size_t tiers() const { return a.size(); }
};

inline double exclusion_radius(std::size_t k, LinkState b, std::size_t j, LinkState s, double r,
                               const NetworkConfig& cfg)
{
    if (k == j && b == s) return r;
    const Scenario sc = make_scenario(cfg);
    const auto &tk = sc[k], &tj = sc[j];
    const auto &pk = tk.path_loss[b], &pj = tj.path_loss[s];
    return std::pow(tk.power * tk.bias * pj.kappa / (tj.power * tj.bias * pk.kappa) * std::pow(r, pj.alpha),
                    1.0 / pk.alpha);
}

inline AssociationMatrix association_probabilities(const NetworkModel& m)
{
    AssociationMatrix out;
    out.a.resize(m.tier_count());
    for (std::size_t j = 0; j < m.tier_count(); ++j)
        for (auto s : link_states) out.a[j][static_cast<int>(s)] = m.integrate_serving(j, s, [](double) { return 1.0; });
    return out;
}

inline AssociationMatrix association_probabilities(const NetworkConfig& cfg, const AnalysisSettings& st = {})
{
    NetworkModel m(cfg, st);
    return association_probabilities(m);
}

// Serving-distance density conditioned on association with (j,s).
struct ServingDistance {
    std::size_t tier = 0;
    LinkState state = LinkState::los;
    double probability = 0.0;  // A_{j,s}
    std::vector<double> points;  // support with interior kinks
    double scale = 1.0;
    std::function<double(double)> pdf;
};

inline ServingDistance serving_distance_pdf(const NetworkModel& m, std::size_t j, LinkState s)
{
    ServingDistance out;
    out.tier = j;
    out.state = s;
    out.probability = m.integrate_serving(j, s, [](double) { return 1.0; });
    if (!(out.probability > 0.0))
        throw NumericalError("serving distance undefined: association probability of tier " + std::to_string(j) +
                             " (" + to_string(s) + ") is zero");
    out.points = m.serving_points(j, s);
    out.scale = m.serving_scale(j);
    const double a = out.probability;
    out.pdf = [&m, j, s, a](double r) { return m.serving_weight(j, s, r) / a; };
    return out;
}

}  // namespace uavcov
