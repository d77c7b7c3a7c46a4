#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"

namespace uavcov {

enum class TierKind { cluster, aerial, ground };

struct TierParams {
    TierKind kind = TierKind::aerial;
    double density = 0.0;
    double power = 1.0;
    double bias = 1.0;
    double height = 0.0;
    TierPathLoss path_loss;
};

// Tier list seen from the typical UE: index 0 is its own cluster-centre UAV,
// then every UAV layer, then the ground stations.
struct Scenario {
    std::vector<TierParams> tiers;
    std::size_t parent = 0;  // UAV layer hosting the typical cluster (0-based among UAV layers)

    std::size_t size() const { return tiers.size(); }
    const TierParams& operator[](std::size_t j) const { return tiers.at(j); }
};

inline Scenario make_scenario(const NetworkConfig& cfg)
{
    std::vector<UavTier> layers = cfg.uav_tiers;
    std::size_t parent = cfg.parent_tier;
    if (layers.empty()) {
        layers.push_back({cfg.uav_density, cfg.uav_power, cfg.uav_bias, cfg.uav_height});
        parent = 0;
    }
    Scenario sc;
    sc.parent = parent;
    const auto& host = layers.at(parent);
    sc.tiers.push_back({TierKind::cluster, 0.0, host.power, host.bias, host.height, cfg.path_loss[cluster_slot]});
    for (const auto& l : layers)
        sc.tiers.push_back({TierKind::aerial, l.density, l.power, l.bias, l.height, cfg.path_loss[uav_slot]});
    sc.tiers.push_back(
        {TierKind::ground, cfg.gbs_density, cfg.gbs_power, cfg.gbs_bias, 0.0, cfg.path_loss[gbs_slot]});
    return sc;
}

// Graded grid on [0, end]: geometric growth from `first`, steps capped at max_step.
inline std::vector<double> graded_nodes(double first, double ratio, double max_step, double end)
{
    std::vector<double> v{0.0};
    double x = first;
    while (x < end) {
        v.push_back(x);
        x += std::min(x * (ratio - 1.0), max_step);
    }
    v.push_back(end);
    return v;
}

// T(x) = integral of h over [x, inf), from per-segment Gauss rules plus a
// closed-form remainder beyond the last node.
class TailTable {
public:
    TailTable() = default;
    TailTable(std::function<double(double)> h, std::vector<double> nodes, std::function<double(double)> beyond)
        : h_(std::move(h)), nodes_(std::move(nodes)), beyond_(std::move(beyond))
    {
        tail_.assign(nodes_.size(), 0.0);
        tail_.back() = beyond_ ? beyond_(nodes_.back()) : 0.0;
        for (std::size_t i = nodes_.size() - 1; i-- > 0;)
            tail_[i] = tail_[i + 1] + gauss_legendre10(h_, nodes_[i], nodes_[i + 1]);
    }

    double operator()(double x) const
    {
        if (x <= nodes_.front()) return tail_.front();
        if (x >= nodes_.back()) return beyond_ ? beyond_(x) : 0.0;
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
        return tail_[i] + gauss_legendre10(h_, x, nodes_[i]);
    }

private:
    std::function<double(double)> h_;
    std::vector<double> nodes_;
    std::vector<double> tail_;
    std::function<double(double)> beyond_;
};

// Transmitters of one state seen through Nakagami fading and random beam alignment:
// evaluates the PGFL exponent integral of (1 - E[e^{-x P G h / L}]) over horizontal distance.
struct RadialKernel {
    double power = 1.0;
    PathLoss path_loss;
    int order = 1;
    double height = 0.0;
    std::function<double(double)> state_prob;  // of horizontal distance
    const std::array<GainLevel, 4>* gains = nullptr;
    double trunc = 0.0;  // outer radius of the explicit integral; 0 uses the model default

    double complement(double x, double r) const
    {
        const double c = x * power / (path_loss.kappa * std::pow(r, path_loss.alpha));
        double s = 0.0;
        for (const auto& g : *gains) s += g.prob * nakagami_mgf_complement(c * g.gain, order);
        return s;
    }
    double integrand(double x, double u) const
    {
        const double p = state_prob(u);
        if (p <= 0.0) return 0.0;
        return p * u * complement(x, std::hypot(u, height));
    }
    // First-order remainder beyond horizontal distance u.
    double remainder(double x, double u) const
    {
        const double a = path_loss.alpha;
        if (!(a > 2.0)) throw NumericalError("interference from an unbounded plane diverges for path-loss exponent <= 2");
        return state_prob(u) * x * power * mean_gain(*gains) / path_loss.kappa * std::pow(u, 2.0 - a) / (a - 2.0);
    }
};

struct TierState {
    std::size_t tier;
    LinkState state;
};

class NetworkModel {
public:
    NetworkModel(const NetworkConfig& cfg, const AnalysisSettings& st = {})
        : cfg_(cfg), settings_(st), scenario_(make_scenario(cfg)), gains_(gain_pmf(cfg.antenna))
    {
        validate(cfg_, settings_);
        const auto& t0 = scenario_[0];
        cluster_ = std::make_unique<ClusterDistanceLaw>(cfg_.cluster, t0.height, cfg_.env_b, cfg_.env_c);
        for (std::size_t j = 1; j < scenario_.size(); ++j) {
            const auto& t = scenario_[j];
            ppp_.push_back(std::make_unique<PppDistanceLaw>(t.density, t.height, t.kind == TierKind::aerial,
                                                            cfg_.env_b, cfg_.env_c, cfg_.blockage_rate,
                                                            trunc_radius(j)));
        }
        build_cluster_survival();
    }

    NetworkModel(const NetworkModel&) = delete;
    NetworkModel& operator=(const NetworkModel&) = delete;

    const NetworkConfig& config() const { return cfg_; }
    const AnalysisSettings& settings() const { return settings_; }
    const Scenario& scenario() const { return scenario_; }
    std::size_t tier_count() const { return scenario_.size(); }
    const TierParams& tier(std::size_t j) const { return scenario_[j]; }
    const std::array<GainLevel, 4>& gains() const { return gains_; }
    double main_gain() const { return cfg_.antenna.main_link_gain(); }
    const PathLoss& path_loss(std::size_t j, LinkState s) const { return scenario_[j].path_loss[s]; }
    int order(LinkState s) const { return cfg_.nakagami(s); }
    double trunc_radius(std::size_t k) const
    {
        const auto& v = settings_.tier_trunc_radius;
        return k < v.size() && v[k] > 0 ? v[k] : settings_.trunc_radius;
    }

    const ClusterDistanceLaw& cluster_law() const { return *cluster_; }
    const PppDistanceLaw& ppp_law(std::size_t j) const { return *ppp_.at(j - 1); }

    double tier_lo(std::size_t j) const { return j == 0 ? cluster_->lo() : ppp_law(j).lo(); }
    double tier_hi(std::size_t j) const { return j == 0 ? cluster_->hi() : inf; }

    // Distance in tier k / state b inside which no transmitter can exist when the UE is
    // served by tier j / state s at distance r.
    double exclusion_radius(std::size_t k, LinkState b, std::size_t j, LinkState s, double r) const
    {
        if (k == j && b == s) return r;
        if (r <= 0.0) return 0.0;
        const auto &tk = scenario_[k], &tj = scenario_[j];
        const auto &pk = tk.path_loss[b], &pj = tj.path_loss[s];
        const double lg = std::log(tk.power * tk.bias * pj.kappa) - std::log(tj.power * tj.bias * pk.kappa) +
                          pj.alpha * std::log(r);
        return std::exp(lg / pk.alpha);
    }
    // Serving distance at which exclusion_radius(k,b,j,s,.) equals q.
    double exclusion_inverse(std::size_t k, LinkState b, std::size_t j, LinkState s, double q) const
    {
        if (k == j && b == s) return q;
        if (q <= 0.0) return 0.0;
        const auto &tk = scenario_[k], &tj = scenario_[j];
        const auto &pk = tk.path_loss[b], &pj = tj.path_loss[s];
        const double lg = pk.alpha * std::log(q) + std::log(tj.power * tj.bias * pk.kappa) -
                          std::log(tk.power * tk.bias * pj.kappa);
        return std::exp(lg / pj.alpha);
    }

    // P(cluster UAV in state b and farther than x).
    double cluster_survival(LinkState b, double x) const
    {
        return cluster_survival_[static_cast<int>(b)](ground0(x));
    }

    // Joint density of {served by tier j in state s at distance r}: A_{j,s} times the
    // conditional serving-distance density.
    double serving_weight(std::size_t j, LinkState s, double r) const
    {
        double g = 0.0;
        if (j == 0) {
            if (r < cluster_->lo() || r > cluster_->hi()) return 0.0;
            g = cluster_->joint_pdf(s, r);
        } else {
            const auto& law = ppp_law(j);
            if (law.density() <= 0.0 || r < law.lo()) return 0.0;
            g = law.intensity(s, r);
        }
        if (g <= 0.0) return 0.0;
        if (j != 0) {
            double z = 0.0;
            for (auto b : link_states) z += cluster_survival(b, exclusion_radius(0, b, j, s, r));
            g *= z;
            if (g <= 0.0) return 0.0;
        }
        double m = 0.0;
        for (std::size_t k = 1; k < tier_count(); ++k)
            for (auto b : link_states) m += ppp_law(k).measure(b, exclusion_radius(k, b, j, s, r));
        return g * std::exp(-m);
    }

    // Integration grid for the serving distance of (j,s): support ends plus the kinks where
    // an exclusion radius crosses another tier's height or support edge.
    std::vector<double> serving_points(std::size_t j, LinkState s) const
    {
        const double lo = tier_lo(j), hi = tier_hi(j);
        std::vector<double> pts{lo};
        auto add = [&](double r) {
            if (r > lo && r < hi && std::isfinite(r)) pts.push_back(r);
        };
        for (std::size_t k = 1; k < tier_count(); ++k)
            for (auto b : link_states)
                if (!(k == j && b == s) && ppp_law(k).lo() > 0) add(exclusion_inverse(k, b, j, s, ppp_law(k).lo()));
        if (j != 0) {
            for (auto b : link_states) {
                add(exclusion_inverse(0, b, j, s, cluster_->lo()));
                if (std::isfinite(cluster_->hi())) add(exclusion_inverse(0, b, j, s, cluster_->hi()));
            }
        }
        std::sort(pts.begin() + 1, pts.end());
        pts.push_back(hi);
        return pts;
    }

    double serving_scale(std::size_t j) const
    {
        if (j == 0) return cluster_->offset().scale();
        double lam = 0.0;
        for (std::size_t k = 1; k < tier_count(); ++k) lam += scenario_[k].density;
        return lam > 0 ? 0.5 / std::sqrt(lam) : 100.0;
    }

    bool tier_active(std::size_t j) const { return j == 0 || scenario_[j].density > 0.0; }

    // Integral over the serving distance of serving_weight(j,s,r) * g(r).
    template <class G>
    double integrate_serving(std::size_t j, LinkState s, const G& g, double abs_tol = 1e-14) const
    {
        if (!tier_active(j)) return 0.0;
        QuadOptions opt{settings_.outer_rel_tol, abs_tol};
        opt.scale = serving_scale(j);
        auto f = [&](double r) {
            const double w = serving_weight(j, s, r);
            return w > 0.0 ? w * g(r) : 0.0;
        };
        return integrate_value(f, serving_points(j, s), opt);
    }

    RadialKernel ppp_kernel(std::size_t k, LinkState b) const
    {
        const auto& t = scenario_[k];
        const PppDistanceLaw* law = &ppp_law(k);
        return {t.power, t.path_loss[b], order(b), t.height,
                [law, b](double u) { return state_prob(law->los_prob_ground(u), b); }, &gains_, trunc_radius(k)};
    }

    // Horizontal-distance integral of the interference kernel from u_lo, computed adaptively.
    double radial_integral(const RadialKernel& kr, double x, double u_lo, double abs_tol) const
    {
        if (x <= 0.0) return 0.0;
        const double U = kr.trunc > 0 ? kr.trunc : settings_.trunc_radius;
        CompensatedSum total;
        QuadOptions opt{settings_.quad_rel_tol, abs_tol};
        const double knee = std::max(1.0, kr.height);
        if (u_lo < std::min(knee, U))
            total += integrate_value([&](double u) { return kr.integrand(x, u); }, u_lo, std::min(knee, U), opt);
        const double a = std::max(u_lo, knee);
        if (a < U) {
            auto f = [&](double y) {
                const double u = std::exp(y);
                return kr.integrand(x, u) * u;
            };
            total += integrate_value(f, std::log(a), std::log(U), opt);
        }
        if (settings_.interference_tail) total += kr.remainder(x, std::max(U, u_lo));
        return total.value();
    }

    TailTable radial_table(const RadialKernel& kr, double x) const
    {
        const double U = kr.trunc > 0 ? kr.trunc : settings_.trunc_radius;
        auto h = [kr, x](double u) { return kr.integrand(x, u); };
        std::function<double(double)> beyond;
        if (settings_.interference_tail) beyond = [kr, x](double u) { return kr.remainder(x, u); };
        return TailTable(h, graded_nodes(0.5, 1.12, inf, U), beyond);
    }

    // Cluster-UAV interference kernel over the UE offset d from its cluster centre.
    double cluster_integrand(LinkState b, double x, double d) const
    {
        const auto& off = cluster_->offset();
        const double p = state_prob(los_prob_a2g_ground(d, cluster_->height(), cfg_.env_b, cfg_.env_c), b);
        const double f = off.pdf(d);
        if (p * f <= 0.0) return 0.0;
        const auto& t = scenario_[0];
        const auto& pl = t.path_loss[b];
        const double r = std::hypot(d, cluster_->height());
        const double c = x * t.power / (pl.kappa * std::pow(r, pl.alpha));
        double s = 0.0;
        for (const auto& g : gains_) s += g.prob * nakagami_mgf_complement(c * g.gain, order(b));
        return p * f * s;
    }
    std::vector<double> cluster_nodes() const
    {
        const auto& off = cluster_->offset();
        const double sc = off.scale();
        const double end = std::isinf(off.hi()) ? 12.0 * sc : off.hi();
        return graded_nodes(0.01 * sc, 1.2, sc / 6.0, end);
    }
    TailTable cluster_table(LinkState b, double x) const
    {
        return TailTable([this, b, x](double d) { return cluster_integrand(b, x, d); }, cluster_nodes(), nullptr);
    }
    double cluster_integral(LinkState b, double x, double d_lo) const
    {
        const auto& off = cluster_->offset();
        const double hi = off.hi();
        if (d_lo >= hi) return 0.0;
        QuadOptions opt{settings_.quad_rel_tol, 1e-15};
        opt.scale = off.scale();
        return integrate_value([&](double d) { return cluster_integrand(b, x, d); }, std::vector<double>{d_lo, hi},
                               opt);
    }

    double ground0(double x) const
    {
        const double h = cluster_->height();
        const double u2 = x * x - h * h;
        return u2 > 0 ? std::sqrt(u2) : 0.0;
    }

private:
    void build_cluster_survival()
    {
        for (auto b : link_states) {
            const ClusterDistanceLaw* law = cluster_.get();
            const double h = law->height();
            const auto& cfg = cfg_;
            auto f = [law, b, h, &cfg](double d) {
                return state_prob(los_prob_a2g_ground(d, h, cfg.env_b, cfg.env_c), b) * law->offset().pdf(d);
            };
            cluster_survival_[static_cast<int>(b)] = TailTable(f, cluster_nodes(), nullptr);
        }
    }

    NetworkConfig cfg_;
    AnalysisSettings settings_;
    Scenario scenario_;
    std::array<GainLevel, 4> gains_;
    std::unique_ptr<ClusterDistanceLaw> cluster_;
    std::vector<std::unique_ptr<PppDistanceLaw>> ppp_;
    std::array<TailTable, 2> cluster_survival_;
};

// Laplace transform of the aggregate interference, conditioned on the serving link.
// Evaluated either from per-argument tables (fixed Laplace argument reused across
// serving distances) or directly.
class InterferenceLaplace {
public:
    // Direct evaluation for any argument.
    explicit InterferenceLaplace(const NetworkModel& m) : m_(m) {}

    // Tables for one fixed argument x.
    InterferenceLaplace(const NetworkModel& m, double x) : m_(m), x_(x), tabulated_(true)
    {
        if (!m.settings().interference || x <= 0.0) return;
        for (std::size_t k = 1; k < m.tier_count(); ++k) {
            std::array<TailTable, 2> t;
            if (m.tier(k).density > 0.0)
                for (auto b : link_states) t[static_cast<int>(b)] = m.radial_table(m.ppp_kernel(k, b), x);
            ppp_.push_back(std::move(t));
        }
        for (auto b : link_states) cluster_[static_cast<int>(b)] = m.cluster_table(b, x);
    }

    double argument() const { return x_; }

    // Cluster-UAV term (1 when the UE is served by its own cluster UAV).
    double cluster_term(double x, std::size_t j, LinkState s, double r) const
    {
        if (j == 0 || !m_.settings().interference || x <= 0.0) return 1.0;
        double surv = 0.0, loss = 0.0;
        for (auto b : link_states) {
            const double q = m_.exclusion_radius(0, b, j, s, r);
            const double d_lo = m_.ground0(q);
            surv += m_.cluster_survival(b, q);
            loss += use_table(x) ? cluster_[static_cast<int>(b)](d_lo) : m_.cluster_integral(b, x, d_lo);
        }
        if (surv <= 0.0) return 1.0;
        return std::clamp(1.0 - loss / surv, 0.0, 1.0);
    }

    // PGFL term of PPP tier k.
    double ppp_term(double x, std::size_t k, std::size_t j, LinkState s, double r) const
    {
        const auto& t = m_.tier(k);
        if (!m_.settings().interference || x <= 0.0 || t.density <= 0.0) return 1.0;
        return std::exp(-ppp_exponent(x, k, j, s, r));
    }

    double operator()(double x, std::size_t j, LinkState s, double r) const
    {
        if (!m_.settings().interference || x <= 0.0) return 1.0;
        double e = 0.0;
        for (std::size_t k = 1; k < m_.tier_count(); ++k)
            if (m_.tier(k).density > 0.0) e += ppp_exponent(x, k, j, s, r);
        return cluster_term(x, j, s, r) * std::exp(-e);
    }
    double operator()(std::size_t j, LinkState s, double r) const { return (*this)(x_, j, s, r); }

private:
    bool use_table(double x) const { return tabulated_ && x == x_; }

    double ppp_exponent(double x, std::size_t k, std::size_t j, LinkState s, double r) const
    {
        const auto& law = m_.ppp_law(k);
        const double lam = law.density();
        double e = 0.0;
        for (auto b : link_states) {
            const double q = std::max(law.lo(), m_.exclusion_radius(k, b, j, s, r));
            const double u_lo = law.ground_of(q);
            const double integral = use_table(x) ? ppp_[k - 1][static_cast<int>(b)](u_lo)
                                                 : m_.radial_integral(m_.ppp_kernel(k, b), x, u_lo,
                                                                      m_.settings().quad_abs_tol / (two_pi * lam));
            e += two_pi * lam * integral;
        }
        return e;
    }

    const NetworkModel& m_;
    double x_ = 0.0;
    bool tabulated_ = false;
    std::vector<std::array<TailTable, 2>> ppp_;
    std::array<TailTable, 2> cluster_;
};

}  // namespace uavcov
