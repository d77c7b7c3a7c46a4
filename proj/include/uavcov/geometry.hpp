#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "quadrature.hpp"

namespace uavcov {

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Horizontal offset of a UE from its cluster centre.
class ClusterOffset {
public:
    explicit ClusterOffset(const ClusterSpec& c) : spec_(c) {}

    const ClusterSpec& spec() const { return spec_; }
    double hi() const { return spec_.kind == ClusterKind::thomas ? inf : spec_.radius; }
    // Length scale used to map semi-infinite integrals.
    double scale() const { return spec_.kind == ClusterKind::thomas ? spec_.sigma : spec_.radius; }

    double pdf(double d) const
    {
        if (d < 0) return 0.0;
        if (spec_.kind == ClusterKind::thomas) {
            const double s2 = spec_.sigma * spec_.sigma;
            return d / s2 * std::exp(-d * d / (2.0 * s2));
        }
        return d <= spec_.radius ? 2.0 * d / (spec_.radius * spec_.radius) : 0.0;
    }
    double ccdf(double d) const
    {
        if (d <= 0) return 1.0;
        if (spec_.kind == ClusterKind::thomas) return std::exp(-d * d / (2.0 * spec_.sigma * spec_.sigma));
        return d >= spec_.radius ? 0.0 : 1.0 - d * d / (spec_.radius * spec_.radius);
    }

    // Density of the horizontal distance v from the origin to a UE whose cluster centre
    // lies at horizontal distance w.
    double relative_pdf(double v, double w) const
    {
        if (v < 0) return 0.0;
        if (spec_.kind == ClusterKind::thomas) {
            const double s2 = spec_.sigma * spec_.sigma;
            const double dv = v - w;
            return v / s2 * std::exp(-dv * dv / (2.0 * s2)) * bessel_i0e(v * w / s2);
        }
        const double rc = spec_.radius, rc2 = rc * rc;
        if (w <= 0.0) return v <= rc ? 2.0 * v / rc2 : 0.0;
        if (w < rc && v < rc - w) return 2.0 * v / rc2;
        if (v < std::abs(rc - w) || v > rc + w) return 0.0;
        const double c = std::clamp((v * v + w * w - rc2) / (2.0 * v * w), -1.0, 1.0);
        return 2.0 * v / (std::numbers::pi * rc2) * std::acos(c);
    }
    // Support of relative_pdf(., w) and its interior kink.
    std::vector<double> relative_support(double w) const
    {
        if (spec_.kind == ClusterKind::thomas) {
            const double s = spec_.sigma;
            return {std::max(0.0, w - 9.0 * s), w + 9.0 * s};
        }
        const double rc = spec_.radius;
        if (w == 0.0) return {0.0, rc};
        if (w < rc) return {0.0, rc - w, rc + w};
        return {w - rc, w + rc};
    }

    template <class Rng>
    std::array<double, 2> sample(Rng& rng) const
    {
        if (spec_.kind == ClusterKind::thomas) {
            std::normal_distribution<double> n(0.0, spec_.sigma);
            const double x = n(rng);
            const double y = n(rng);
            return {x, y};
        }
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = spec_.radius * std::sqrt(u(rng));
        const double a = two_pi * u(rng);
        return {r * std::cos(a), r * std::sin(a)};
    }

private:
    ClusterSpec spec_;
};

// 3D distance from a UE to another cluster's UAV at height H, given ground separation w.
inline double ruu_pdf(const ClusterOffset& offset, double height, double x, double w)
{
    if (x <= height) return 0.0;
    const double v = std::sqrt(x * x - height * height);
    return x / v * offset.relative_pdf(v, w);
}

// Air-to-ground LOS curve for one UAV height.
struct AerialLos {
    double height, env_b, env_c;
    double ground(double u) const { return los_prob_a2g_ground(u, height, env_b, env_c); }
    double at(double r) const
    {
        const double u2 = r * r - height * height;
        return ground(u2 > 0 ? std::sqrt(u2) : 0.0);
    }
};

// Distance R0 from the typical UE to its own cluster-centre UAV, split by link state.
class ClusterDistanceLaw {
public:
    ClusterDistanceLaw(const ClusterSpec& c, double height, double env_b, double env_c, QuadOptions opt = {1e-11, 1e-15})
        : offset_(c), los_{height, env_b, env_c}, opt_(opt)
    {
        opt_.scale = offset_.scale();
        const double los = joint_ground(LinkState::los, 0.0);
        occur_ = {los, 1.0 - los};
    }

    const ClusterOffset& offset() const { return offset_; }
    double height() const { return los_.height; }
    double los_prob(double r) const { return los_.at(r); }
    double lo() const { return los_.height; }
    double hi() const
    {
        const double h = offset_.hi();
        return std::isinf(h) ? inf : std::sqrt(los_.height * los_.height + h * h);
    }

    double ccdf(double x) const { return offset_.ccdf(ground_of(x)); }
    double pdf(double x) const
    {
        if (x < lo()) return 0.0;
        const double u = ground_of(x);
        if (u <= 0.0) {
            // limit of x / u * f_D(u) as u -> 0
            return offset_.spec().kind == ClusterKind::thomas
                       ? x / (offset_.spec().sigma * offset_.spec().sigma)
                       : 2.0 * x / (offset_.spec().radius * offset_.spec().radius);
        }
        return x / u * offset_.pdf(u);
    }

    // Probability that the cluster UAV is seen in state s.
    double occurrence(LinkState s) const { return occur_[static_cast<int>(s)]; }
    // P(state s and R0 > x).
    double joint_survival(LinkState s, double x) const { return joint_ground(s, ground_of(x)); }
    // p^s(x) f_R0(x): density of R0 on the event of state s.
    double joint_pdf(LinkState s, double x) const { return state_prob(los_.at(x), s) * pdf(x); }

    double state_ccdf(LinkState s, double x) const
    {
        const double d = occurrence(s);
        return d > 0 ? std::clamp(joint_survival(s, x) / d, 0.0, 1.0) : (x < lo() ? 1.0 : 0.0);
    }
    double state_pdf(LinkState s, double x) const
    {
        const double d = occurrence(s);
        return d > 0 ? joint_pdf(s, x) / d : 0.0;
    }

private:
    double ground_of(double x) const
    {
        const double u2 = x * x - los_.height * los_.height;
        return u2 > 0 ? std::sqrt(u2) : 0.0;
    }
    double joint_ground(LinkState s, double d_lo) const
    {
        const double d_hi = offset_.hi();
        if (d_lo >= d_hi) return 0.0;
        auto f = [&](double d) { return state_prob(los_.ground(d), s) * offset_.pdf(d); };
        return integrate_value(f, std::vector<double>{d_lo, d_hi}, opt_);
    }

    ClusterOffset offset_;
    AerialLos los_;
    QuadOptions opt_;
    std::array<double, 2> occur_{};
};

// Nearest point of a homogeneous PPP tier seen in a given link state.
// The tier sits at a fixed height (0 for ground stations, with exponential blockage).
class PppDistanceLaw {
public:
    PppDistanceLaw(double density, double height, bool aerial, double env_b, double env_c, double blockage,
                   double trunc_radius)
        : density_(density), height_(height), aerial_(aerial), los_{height, env_b, env_c}, blockage_(blockage),
          trunc_(trunc_radius)
    {
        if (aerial_) build_table();
    }

    double density() const { return density_; }
    double height() const { return height_; }
    bool aerial() const { return aerial_; }
    double lo() const { return height_; }
    double hi() const { return std::sqrt(trunc_ * trunc_ + height_ * height_); }

    double los_prob_ground(double u) const
    {
        return aerial_ ? los_.ground(u) : los_prob_g2g(u, blockage_);
    }
    double los_prob(double r) const { return los_prob_ground(ground_of(r)); }
    double ground_of(double r) const
    {
        const double u2 = r * r - height_ * height_;
        return u2 > 0 ? std::sqrt(u2) : 0.0;
    }

    // Mean number of state-s points within 3D distance x.
    double measure(LinkState s, double x) const { return two_pi * density_ * radial_moment(s, ground_of(x)); }
    double void_prob(LinkState s, double x) const { return std::exp(-measure(s, x)); }
    // Radial intensity d/dx of measure.
    double intensity(LinkState s, double x) const
    {
        if (x < height_) return 0.0;
        return two_pi * density_ * x * state_prob(los_prob(x), s);
    }
    double occurrence(LinkState s) const { return -std::expm1(-measure(s, hi())); }

    double ccdf(LinkState s, double x) const
    {
        if (x <= lo()) return 1.0;
        if (x >= hi()) return 0.0;
        const double d = occurrence(s);
        if (d <= 0) return 0.0;
        const double far = std::exp(-measure(s, hi()));
        return std::clamp((void_prob(s, x) - far) / d, 0.0, 1.0);
    }
    double pdf(LinkState s, double x) const
    {
        if (x < lo() || x > hi()) return 0.0;
        const double d = occurrence(s);
        return d > 0 ? intensity(s, x) * void_prob(s, x) / d : 0.0;
    }

    // Integral of u p^s(u) du over horizontal distance [0, u].
    double radial_moment(LinkState s, double u) const
    {
        if (u <= 0.0) return 0.0;
        const double los = aerial_ ? los_moment(u) : ground_los_moment(u);
        return s == LinkState::los ? los : nlos_moment(u, los);
    }

private:
    double ground_los_moment(double u) const
    {
        const double e = blockage_, z = e * u;
        if (z < 0.1) {
            // series of 1 - e^{-z}(1+z)
            double term = z * z / 2.0, sum = 0.0;
            for (int k = 2; k < 30; ++k) {
                sum += term;
                term *= -z * k / ((k - 1.0) * (k + 1.0));
                if (std::abs(term) < 1e-18 * sum) break;
            }
            return sum / (e * e);
        }
        return (1.0 - std::exp(-z) * (1.0 + z)) / (e * e);
    }
    double nlos_moment(double u, double los) const
    {
        if (aerial_) return table_value(nlos_cum_, u, LinkState::nlos);
        return 0.5 * u * u - los;
    }
    double los_moment(double u) const { return table_value(los_cum_, u, LinkState::los); }

    void build_table()
    {
        const double first = 0.05 * std::max(height_, 1.0);
        nodes_.push_back(0.0);
        for (double u = first; u < 1.02 * trunc_; u *= 1.1) nodes_.push_back(u);
        nodes_.push_back(1.02 * trunc_ * 1.1);
        los_cum_.assign(nodes_.size(), 0.0);
        nlos_cum_.assign(nodes_.size(), 0.0);
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            los_cum_[i] = los_cum_[i - 1] + segment(LinkState::los, nodes_[i - 1], nodes_[i]);
            nlos_cum_[i] = nlos_cum_[i - 1] + segment(LinkState::nlos, nodes_[i - 1], nodes_[i]);
        }
    }
    double segment(LinkState s, double a, double b) const
    {
        return gauss_legendre10([&](double v) { return v * state_prob(los_.ground(v), s); }, a, b);
    }
    double table_value(const std::vector<double>& cum, double u, LinkState s) const
    {
        const double last = nodes_.back();
        if (u >= last) {
            const double p = state_prob(los_.ground(last), s);
            return cum.back() + 0.5 * p * (u * u - last * last);
        }
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
        const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
        return cum[i] + segment(s, nodes_[i], u);
    }

    double density_, height_;
    bool aerial_;
    AerialLos los_;
    double blockage_, trunc_;
    std::vector<double> nodes_, los_cum_, nlos_cum_;
};

// CCDF/PDF pair over 3D link distance.
struct DistanceLaw {
    std::size_t tier = 0;
    LinkState state = LinkState::los;
    double lo = 0.0, hi = inf;
    double occur_prob = 0.0;
    std::function<double(double)> ccdf;
    std::function<double(double)> pdf;
};

struct ClusterLaws {
    std::array<DistanceLaw, 2> by_state;
    DistanceLaw combined;
};

inline ClusterLaws law_R0(const NetworkConfig& cfg)
{
    const double h = cfg.uav_tiers.empty() ? cfg.uav_height : cfg.uav_tiers.at(cfg.parent_tier).height;
    auto law = std::make_shared<ClusterDistanceLaw>(cfg.cluster, h, cfg.env_b, cfg.env_c);
    ClusterLaws out;
    for (auto s : link_states) {
        auto& d = out.by_state[static_cast<int>(s)];
        d.tier = 0;
        d.state = s;
        d.lo = law->lo();
        d.hi = law->hi();
        d.occur_prob = law->occurrence(s);
        d.ccdf = [law, s](double x) { return law->state_ccdf(s, x); };
        d.pdf = [law, s](double x) { return law->state_pdf(s, x); };
    }
    out.combined.lo = law->lo();
    out.combined.hi = law->hi();
    out.combined.occur_prob = 1.0;
    out.combined.ccdf = [law](double x) { return law->ccdf(x); };
    out.combined.pdf = [law](double x) { return law->pdf(x); };
    return out;
}

inline std::array<DistanceLaw, 2> make_ppp_laws(std::shared_ptr<const PppDistanceLaw> law, std::size_t tier)
{
    std::array<DistanceLaw, 2> out;
    for (auto s : link_states) {
        auto& d = out[static_cast<int>(s)];
        d.tier = tier;
        d.state = s;
        d.lo = law->lo();
        d.hi = law->hi();
        d.occur_prob = law->occurrence(s);
        d.ccdf = [law, s](double x) { return law->ccdf(s, x); };
        d.pdf = [law, s](double x) { return law->pdf(s, x); };
    }
    return out;
}

inline std::array<DistanceLaw, 2> law_RU(const NetworkConfig& cfg, double trunc_radius = 1e5)
{
    auto law = std::make_shared<const PppDistanceLaw>(cfg.uav_density, cfg.uav_height, true, cfg.env_b, cfg.env_c,
                                                      cfg.blockage_rate, trunc_radius);
    return make_ppp_laws(law, 1);
}

inline std::array<DistanceLaw, 2> law_RG(const NetworkConfig& cfg, double trunc_radius = 1e5)
{
    auto law = std::make_shared<const PppDistanceLaw>(cfg.gbs_density, 0.0, false, cfg.env_b, cfg.env_c,
                                                      cfg.blockage_rate, trunc_radius);
    return make_ppp_laws(law, 2);
}

inline double law_RUU(double x, double w, const NetworkConfig& cfg)
{
    return ruu_pdf(ClusterOffset(cfg.cluster), cfg.uav_height, x, w);
}

struct Point2 {
    double x, y;
    double norm() const { return std::hypot(x, y); }
};

// Homogeneous PPP on the annulus r_in <= |p| < r_out.
template <class Rng>
std::vector<Point2> sample_ppp_annulus(double density, double r_in, double r_out, Rng& rng)
{
    std::vector<Point2> pts;
    const double area = std::numbers::pi * (r_out * r_out - r_in * r_in);
    if (density <= 0 || area <= 0) return pts;
    std::poisson_distribution<long> count(density * area);
    const long n = count(rng);
    pts.reserve(static_cast<std::size_t>(n));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (long i = 0; i < n; ++i) {
        const double r = std::sqrt(r_in * r_in + u(rng) * (r_out * r_out - r_in * r_in));
        const double a = two_pi * u(rng);
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return pts;
}

template <class Rng>
std::vector<Point2> sample_ppp_disk(double density, double radius, Rng& rng)
{
    return sample_ppp_annulus(density, 0.0, radius, rng);
}

template <class Rng>
Point2 sample_cluster_offset(const ClusterSpec& c, Rng& rng)
{
    const auto p = ClusterOffset(c).sample(rng);
    return {p[0], p[1]};
}

}  // namespace uavcov
