#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "config.hpp"

namespace uavcov {

inline double elevation_deg(double ground, double height)
{
    if (height <= 0.0) return 0.0;
    return std::atan2(height, ground) * (180.0 / std::numbers::pi);
}

// Sigmoid air-to-ground LOS curve as a function of elevation angle in degrees.
inline double los_prob_elevation(double theta_deg, double env_b, double env_c)
{
    return 1.0 / (1.0 + env_c * std::exp(-env_b * (theta_deg - env_c)));
}

// r is the 3D link distance; r below H by more than 1e-9 is a domain error.
inline double los_prob_a2g(double r, double height, double env_b, double env_c)
{
    if (r < height - 1e-9) throw std::domain_error("los_prob_a2g: distance below UAV height");
    double theta = 0.0;
    if (height > 0.0) {
        const double ratio = std::clamp(height / r, 0.0, 1.0);
        theta = std::asin(ratio) * (180.0 / std::numbers::pi);
    }
    return los_prob_elevation(theta, env_b, env_c);
}

// Same curve parameterised by horizontal distance, which stays smooth at the UAV foot point.
inline double los_prob_a2g_ground(double ground, double height, double env_b, double env_c)
{
    return los_prob_elevation(elevation_deg(ground, height), env_b, env_c);
}

inline double los_prob_g2g(double r, double epsilon) { return std::exp(-epsilon * r); }

inline double state_prob(double p_los, LinkState s) { return s == LinkState::los ? p_los : 1.0 - p_los; }

inline double path_loss(double r, const PathLoss& pl) { return pl.kappa * std::pow(r, pl.alpha); }

inline double path_loss(double r, std::size_t slot, LinkState s, const NetworkConfig& cfg)
{
    return path_loss(r, cfg.path_loss.at(slot)[s]);
}

struct GainLevel {
    double gain;
    double prob;
};

// Interferer gain levels, ordered (main,main), (main,side), (side,main), (side,side) for (BS, UE).
inline std::array<GainLevel, 4> gain_pmf(const AntennaPattern& a)
{
    const double two_pi = 2.0 * std::numbers::pi;
    const double pb = a.beam_bs / two_pi, pu = a.beam_ue / two_pi;
    return {{{a.main_bs * a.main_ue, pb * pu},
             {a.main_bs * a.side_ue, pb * (1.0 - pu)},
             {a.side_bs * a.main_ue, (1.0 - pb) * pu},
             {a.side_bs * a.side_ue, (1.0 - pb) * (1.0 - pu)}}};
}

inline double mean_gain(const std::array<GainLevel, 4>& pmf)
{
    double g = 0.0;
    for (const auto& l : pmf) g += l.gain * l.prob;
    return g;
}

// Normalised Gamma power gain with shape N and unit mean.
template <class Rng>
double sample_nakagami(int order, Rng& rng)
{
    std::gamma_distribution<double> d(static_cast<double>(order), 1.0 / order);
    return d(rng);
}

// E[exp(-x h)] for the normalised Gamma gain of order N.
inline double nakagami_mgf(double x, int order) { return std::exp(-order * std::log1p(x / order)); }

// 1 - E[exp(-x h)], accurate for small x.
inline double nakagami_mgf_complement(double x, int order) { return -std::expm1(-order * std::log1p(x / order)); }

// Constant N (N!)^{-1/N} of the Alzer-type bound on the Gamma CDF.
inline double alzer_constant(int order)
{
    return order * std::exp(-std::lgamma(order + 1.0) / order);
}

inline double binomial(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

}  // namespace uavcov
