// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "mclink/config.hpp"
#include "mclink/errors.hpp"
#include "mclink/special.hpp"

namespace mclink {

enum class Source { tx, ix };

// First-passage (absorption) probability of one molecule released at
// distance d from a point receiver in unbounded 1D diffusion, within time t.
inline double hit_prob_1d(double d, double D, double t) {
  if (!(d > 0.0)) throw ConfigError("hit_prob_1d: d must be > 0");
  if (!(D > 0.0)) throw ConfigError("hit_prob_1d: D must be > 0");
  if (t < 0.0) throw ConfigError("hit_prob_1d: t must be >= 0");
  if (t == 0.0) return 0.0;
  return erfc_stable(d / (2.0 * std::sqrt(D * t)));
}

// Same for a fully absorbing sphere of radius r in unbounded 3D diffusion;
// saturates at r/d as t grows.
inline double hit_prob_3d(double d, double r, double D, double t) {
  if (!(r > 0.0)) throw ConfigError("hit_prob_3d: r must be > 0");
  if (!(d > r)) throw ConfigError("hit_prob_3d: d must be > r");
  if (!(D > 0.0)) throw ConfigError("hit_prob_3d: D must be > 0");
  if (t < 0.0) throw ConfigError("hit_prob_3d: t must be >= 0");
  if (t == 0.0) return 0.0;
  return (r / d) * erfc_stable((d - r) / (2.0 * std::sqrt(D * t)));
}

inline double source_distance(const LinkConfig& c, Source which) {
  return which == Source::tx ? c.d : c.d_I;
}

// First-passage CDF for the configured geometry.
inline double hit_prob(const LinkConfig& c, Source which, double t) {
  double dist = source_distance(c, which);
  return c.dimension == Dimension::d1 ? hit_prob_1d(dist, c.D, t)
                                      : hit_prob_3d(dist, c.r, c.D, t);
}

// Time derivative of the first-passage CDF (the absorption rate); vanishes
// in the t -> 0 limit, which is returned exactly.
inline double hit_prob_derivative(const LinkConfig& c, Source which, double t) {
  if (t < 0.0) throw ConfigError("hit_prob_derivative: t must be >= 0");
  if (t == 0.0) return 0.0;
  double dist = source_distance(c, which);
  double eff = c.dimension == Dimension::d1 ? dist : dist - c.r;
  double pre = c.dimension == Dimension::d1 ? 1.0 : c.r / dist;
  return pre * eff / (2.0 * std::sqrt(M_PI * c.D)) * std::pow(t, -1.5) *
         std::exp(-eff * eff / (4.0 * c.D * t));
}

// Probability that a molecule released l symbol intervals in the past is
// absorbed inside the current detection window: F(l*T_b + T_r) - F(l*T_b).
// The l = 0 tap is the plain hit probability at T_r.
inline double isi_tap_probability(const LinkConfig& c, Source which, int l,
                                  double T_r) {
  if (l < 0) throw ConfigError("isi_tap_probability: l must be >= 0");
  if (!(T_r >= 0.0) || !(T_r <= c.T_b))
    throw ConfigError("isi_tap_probability: require 0 <= T_r <= T_b");
  double base = double(l) * c.T_b;
  return hit_prob(c, which, base + T_r) - hit_prob(c, which, base);
}

inline double isi_tap_probability(const LinkConfig& c, int l, double T_r) {
  return isi_tap_probability(c, Source::tx, l, T_r);
}

// Smallest t with hit_prob(t) = ratio * hit_prob(inf), found by bisection;
// the 1D limit is 1, the 3D limit is r/d. Used to pick symbol intervals that
// capture a target fraction (e.g. 90%) of all eventually-absorbed molecules.
inline double solve_capture_time(double dist, double r, double D,
                                 Dimension dim, double ratio) {
  if (!(ratio > 0.0) || !(ratio < 1.0))
    throw ConfigError("solve_capture_time: ratio must be in (0,1)");
  auto frac = [&](double t) {
    return dim == Dimension::d1 ? hit_prob_1d(dist, D, t)
                                : hit_prob_3d(dist, r, D, t) / (r / dist);
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && frac(hi) < ratio; ++i) hi *= 2.0;
  if (frac(hi) < ratio) throw NumericError("solve_capture_time: no bracket");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (frac(mid) < ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mclink
