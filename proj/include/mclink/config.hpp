// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "mclink/errors.hpp"

namespace mclink {

enum class Dimension { d1, d3 };
enum class CountModel { binomial, poisson, gaussian };
enum class Scenario { known, unknown_location, isi };

inline std::string to_string(Dimension d) { return d == Dimension::d1 ? "1d" : "3d"; }
inline std::string to_string(CountModel m) {
  switch (m) {
    case CountModel::binomial: return "binomial";
    case CountModel::poisson: return "poisson";
    default: return "gaussian";
  }
}
inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::known: return "known";
    case Scenario::unknown_location: return "unknown-location";
    default: return "isi";
  }
}

// Uniform prior support for the interferer distance when its location is
// unknown (1D scenario).
struct LocationBounds {
  double a = 0.0;
  double b = 0.0;
};

// Physical and protocol parameters of one point-to-point link with a single
// co-channel interference source.
struct LinkConfig {
  double D = 0.0;       // diffusion coefficient [m^2/s]
  double d = 0.0;       // transmitter-receiver distance [m]
  double d_I = 0.0;     // interferer-receiver distance [m]
  double r = 0.0;       // receiver radius [m], 3D only
  double T_b = 0.0;     // symbol interval [s]
  long long N0 = 0;     // molecules released for bit 0
  long long N1 = 0;     // molecules released for bit 1
  Dimension dimension = Dimension::d1;
  int L = 1;            // channel/detector memory; 1 = no ISI
  bool location_known = true;
  LocationBounds bounds{};
};

// Detection window [0, T_r] within each symbol interval.
struct DetectionInterval {
  double T_r = 0.0;
};

inline void validate(const LinkConfig& c) {
  if (!(c.D > 0.0)) throw ConfigError("LinkConfig.D: must be > 0");
  if (!(c.d > 0.0)) throw ConfigError("LinkConfig.d: must be > 0");
  if (!(c.d_I > 0.0)) throw ConfigError("LinkConfig.d_I: must be > 0");
  if (!(c.T_b > 0.0)) throw ConfigError("LinkConfig.T_b: must be > 0");
  if (c.dimension == Dimension::d3) {
    if (!(c.r > 0.0)) throw ConfigError("LinkConfig.r: must be > 0 in 3D");
    if (!(c.r < c.d)) throw ConfigError("LinkConfig.r: must be < d in 3D");
    if (!(c.r < c.d_I)) throw ConfigError("LinkConfig.r: must be < d_I in 3D");
  }
  if (c.N0 < 0) throw ConfigError("LinkConfig.N0: must be >= 0");
  if (c.N1 <= c.N0) throw ConfigError("LinkConfig.N1: must be > N0");
  if (c.L < 1) throw ConfigError("LinkConfig.L: must be >= 1");
  if (!c.location_known) {
    if (c.dimension != Dimension::d1)
      throw ConfigError("LinkConfig.location_known: unknown location requires 1D");
    if (!(c.bounds.a > 0.0)) throw ConfigError("LinkConfig.bounds.a: must be > 0");
    if (!(c.bounds.b > c.bounds.a))
      throw ConfigError("LinkConfig.bounds.b: must be > bounds.a");
  }
  if (!std::isfinite(c.D) || !std::isfinite(c.d) || !std::isfinite(c.d_I) ||
      !std::isfinite(c.T_b))
    throw ConfigError("LinkConfig: non-finite field");
}

inline void validate(const DetectionInterval& w, const LinkConfig& c) {
  if (!(w.T_r >= 0.0) || !(w.T_r <= c.T_b))
    throw ConfigError("DetectionInterval.T_r: must satisfy 0 <= T_r <= T_b");
}

// Default desk-scale parameter sets used throughout the test and demo
// programs (diffusion 1e-9 m^2/s, transmitter at 15 um, interferer at 60 um).
inline LinkConfig defaults_1d() {
  LinkConfig c;
  c.D = 1e-9;
  c.d = 1.5e-5;
  c.d_I = 6e-5;
  c.r = 1e-6;
  c.T_b = 7.12;
  c.N0 = 20;
  c.N1 = 40;
  c.dimension = Dimension::d1;
  return c;
}

inline LinkConfig defaults_3d() {
  LinkConfig c;
  c.D = 1e-9;
  c.d = 1.5e-5;
  c.d_I = 6e-5;
  c.r = 1e-6;
  c.T_b = 6.21;
  c.N0 = 1000;
  c.N1 = 2000;
  c.dimension = Dimension::d3;
  return c;
}

}  // namespace mclink
