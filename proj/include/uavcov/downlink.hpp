#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "association.hpp"
#include "model.hpp"

namespace uavcov {

// Per (tier, state) values of a coverage metric.
struct TierStateValues {
    std::vector<std::array<double, 2>> conditional;  // given association with (j,s); NaN if A_{j,s} = 0
    std::vector<std::array<double, 2>> joint;        // conditional * A_{j,s}
    double total = 0.0;

    double operator()(std::size_t j, LinkState s) const { return conditional.at(j)[static_cast<int>(s)]; }
    double tier(std::size_t j) const { return joint.at(j)[0] + joint.at(j)[1]; }

    void resize(std::size_t n)
    {
        conditional.assign(n, {0.0, 0.0});
        joint.assign(n, {0.0, 0.0});
    }
    // Fill conditional values and the total from joint contributions.
    void finish(const AssociationMatrix& a)
    {
        CompensatedSum t;
        for (std::size_t j = 0; j < joint.size(); ++j) {
            for (int s = 0; s < 2; ++s) {
                const double p = a.a[j][s];
                conditional[j][s] = p > 0 ? std::clamp(joint[j][s] / p, 0.0, 1.0) : std::numeric_limits<double>::quiet_NaN();
                t += joint[j][s];
            }
        }
        total = std::clamp(t.value(), 0.0, 1.0);
    }
};

inline double harvested_energy_sample(double p_main, double interference, double tau, double rho)
{
    return tau * (1.0 - rho) * (p_main + interference);
}

inline double sinr_sample(double p_main, double interference, double rho, const NetworkConfig& cfg)
{
    if (!(rho > 0.0)) throw std::domain_error("sinr_sample: power split must be > 0");
    return p_main / (cfg.conversion_noise / rho + cfg.thermal_noise + interference);
}

namespace detail {

// Rounding in an alternating binomial sum of order N is amplified up to 2^N times.
inline double alternating_abs_tol(int order) { return 1e-14 * std::ldexp(1.0, order); }

inline void check_cancellation(const CompensatedSum& s, const NetworkModel& m)
{
    if (s.magnitude() * m.settings().quad_rel_tol > 1e-4)
        throw NumericalError("alternating sum lost too many digits; use a smaller gamma order");
}

// Mean received power from the serving transmitter at distance r, before fading.
inline double serving_power(const NetworkModel& m, std::size_t j, LinkState s, double r)
{
    return m.tier(j).power * m.main_gain() / path_loss(r, m.path_loss(j, s));
}

}  // namespace detail

// P(harvested energy > gamma_e) through E[(1 - e^{-a X / gamma})^N], X the received power.
inline TierStateValues energy_coverage(const NetworkModel& m, const AssociationMatrix& a, double gamma_e, double tau,
                                       double rho)
{
    TierStateValues out;
    out.resize(m.tier_count());
    const double harvest = tau * (1.0 - rho);
    if (gamma_e <= 0.0 || harvest <= 0.0) {
        const double v = gamma_e <= 0.0 ? 1.0 : 0.0;
        for (std::size_t j = 0; j < m.tier_count(); ++j)
            for (int s = 0; s < 2; ++s) out.joint[j][s] = v * a.a[j][s];
        out.finish(a);
        return out;
    }
    const int N = m.settings().gamma_order;
    const double base = alzer_constant(N) * harvest / gamma_e;
    std::vector<InterferenceLaplace> lap;
    lap.reserve(N);
    for (int n = 1; n <= N; ++n) lap.emplace_back(m, base * n);
    for (std::size_t j = 0; j < m.tier_count(); ++j) {
        for (auto s : link_states) {
            if (a(j, s) <= 0.0) continue;
            const int ns = m.order(s);
            auto g = [&](double r) {
                const double pm = detail::serving_power(m, j, s, r);
                CompensatedSum sum;
                sum += 1.0;
                for (int n = 1; n <= N; ++n) {
                    const double x = base * n;
                    const double zeta = nakagami_mgf(x * pm, ns);
                    const double sign = (n % 2 == 1) ? -1.0 : 1.0;
                    sum += sign * binomial(N, n) * zeta * lap[n - 1](j, s, r);
                }
                detail::check_cancellation(sum, m);
                return sum.value();
            };
            out.joint[j][static_cast<int>(s)] = m.integrate_serving(j, s, g, detail::alternating_abs_tol(N));
        }
    }
    out.finish(a);
    return out;
}

// SINR coverage, with the serving link's Gamma fading tail replaced by its Alzer-type
// exponential sum of order N_s.
inline TierStateValues sinr_coverage(const NetworkModel& m, const AssociationMatrix& a, double gamma_sinr, double rho)
{
    if (!(rho > 0.0)) throw std::domain_error("sinr_coverage: power split must be > 0");
    TierStateValues out;
    out.resize(m.tier_count());
    if (gamma_sinr <= 0.0) {
        for (std::size_t j = 0; j < m.tier_count(); ++j) out.joint[j] = a.a[j];
        out.finish(a);
        return out;
    }
    const auto& cfg = m.config();
    const double noise = cfg.conversion_noise / rho + cfg.thermal_noise;
    const InterferenceLaplace lap(m);
    for (std::size_t j = 0; j < m.tier_count(); ++j) {
        for (auto s : link_states) {
            if (a(j, s) <= 0.0) continue;
            const int ns = m.order(s);
            const double eta = alzer_constant(ns);
            auto g = [&](double r) {
                const double pm = detail::serving_power(m, j, s, r);
                CompensatedSum sum;
                for (int n = 1; n <= ns; ++n) {
                    const double mu = n * eta * gamma_sinr / pm;
                    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
                    sum += sign * binomial(ns, n) * std::exp(-mu * noise) * lap(mu, j, s, r);
                }
                detail::check_cancellation(sum, m);
                return sum.value();
            };
            out.joint[j][static_cast<int>(s)] = m.integrate_serving(j, s, g, detail::alternating_abs_tol(ns));
        }
    }
    out.finish(a);
    return out;
}

// P(I > x | association with (j,s)).
inline TierStateValues interference_ccdf(const NetworkModel& m, const AssociationMatrix& a, double x)
{
    TierStateValues out;
    out.resize(m.tier_count());
    if (x <= 0.0 || !std::isfinite(x)) {
        const double v = x <= 0.0 ? 1.0 : 0.0;
        for (std::size_t j = 0; j < m.tier_count(); ++j)
            for (int s = 0; s < 2; ++s) out.joint[j][s] = v * a.a[j][s];
        out.finish(a);
        return out;
    }
    const int N = m.settings().gamma_order;
    const double base = alzer_constant(N) / x;
    std::vector<InterferenceLaplace> lap;
    lap.reserve(N);
    for (int n = 1; n <= N; ++n) lap.emplace_back(m, base * n);
    for (std::size_t j = 0; j < m.tier_count(); ++j) {
        for (auto s : link_states) {
            if (a(j, s) <= 0.0) continue;
            auto g = [&](double r) {
                CompensatedSum sum;
                sum += 1.0;
                for (int n = 1; n <= N; ++n) {
                    const double sign = (n % 2 == 1) ? -1.0 : 1.0;
                    sum += sign * binomial(N, n) * lap[n - 1](j, s, r);
                }
                detail::check_cancellation(sum, m);
                return sum.value();
            };
            out.joint[j][static_cast<int>(s)] = m.integrate_serving(j, s, g, detail::alternating_abs_tol(N));
        }
    }
    out.finish(a);
    return out;
}

// Unconditional E[exp(-x I)].
inline double interference_laplace_total(const NetworkModel& m, double x)
{
    const InterferenceLaplace lap(m, x);
    CompensatedSum t;
    for (std::size_t j = 0; j < m.tier_count(); ++j)
        for (auto s : link_states) t += m.integrate_serving(j, s, [&](double r) { return lap(j, s, r); });
    return t.value();
}

// Threshold on I separating the two regimes of the joint energy/SINR event.
inline double stp_threshold(const NetworkConfig& cfg, double gamma_e, double gamma_sinr, double tau, double rho)
{
    const double harvest = tau * (1.0 - rho);
    if (harvest <= 0.0) return std::numeric_limits<double>::infinity();
    return (gamma_e / harvest - gamma_sinr * (cfg.conversion_noise / rho + cfg.thermal_noise)) / (1.0 + gamma_sinr);
}

struct CoverageReport {
    AssociationMatrix association;
    TierStateValues energy;
    TierStateValues sinr;
    TierStateValues interference_tail;  // P(I > omega | S_{j,s})
    TierStateValues stp;
    double gamma_e = 0.0;
    double gamma_sinr = 0.0;
    double tau = 0.0;
    double rho = 0.0;
    double omega = 0.0;
    AnalysisSettings settings;
};

inline CoverageReport successful_transmission(const NetworkModel& m, const AssociationMatrix& a, double gamma_e,
                                              double gamma_sinr, double tau, double rho)
{
    CoverageReport rep;
    rep.association = a;
    rep.gamma_e = gamma_e;
    rep.gamma_sinr = gamma_sinr;
    rep.tau = tau;
    rep.rho = rho;
    rep.settings = m.settings();
    rep.energy = energy_coverage(m, a, gamma_e, tau, rho);
    rep.sinr = sinr_coverage(m, a, gamma_sinr, rho);
    rep.omega = stp_threshold(m.config(), gamma_e, gamma_sinr, tau, rho);
    rep.interference_tail = interference_ccdf(m, a, rep.omega);
    rep.stp.resize(m.tier_count());
    for (std::size_t j = 0; j < m.tier_count(); ++j) {
        for (int s = 0; s < 2; ++s) {
            if (!(a.a[j][s] > 0)) continue;
            const double f = rep.interference_tail.conditional[j][s];
            const double pe = rep.energy.conditional[j][s], ps = rep.sinr.conditional[j][s];
            rep.stp.joint[j][s] = (pe * (1.0 - f) + ps * f) * a.a[j][s];
        }
    }
    rep.stp.finish(a);
    return rep;
}

inline CoverageReport successful_transmission(const NetworkModel& m, double gamma_e, double gamma_sinr, double tau,
                                              double rho)
{
    return successful_transmission(m, association_probabilities(m), gamma_e, gamma_sinr, tau, rho);
}

}  // namespace uavcov
