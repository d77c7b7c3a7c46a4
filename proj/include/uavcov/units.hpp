#pragma once

#include <cmath>

namespace uavcov {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// Receiver noise floor: -174 dBm/Hz spectral density over the bandwidth plus the noise figure.
inline double thermal_noise_power(double bandwidth_hz, double noise_figure_db)
{
    return dbm_to_watts(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

}  // namespace uavcov
