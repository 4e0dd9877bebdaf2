// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mclink/channel.hpp"
#include "mclink/config.hpp"
#include "mclink/errors.hpp"
#include "mclink/rng.hpp"
#include "mclink/simulate.hpp"

namespace mclink {

// Controls for the Brownian particle simulator.
//
// absorption selects how a discrete step decides capture: `endpoint` tests
// only the step endpoint; `bridge` additionally absorbs with the Brownian
// bridge crossing probability of the intervening path, which removes the
// O(sqrt(dt)) undercount of endpoint-only tests.
//
// Far from the receiver the walk advances k steps at a time with a single
// N(0, 2 D k dt) displacement per axis; k is chosen so the receiver stays
// more than z_star standard deviations away, making a capture inside the
// jump less than ~1e-14 likely per jump. Jumps are clipped at sample times,
// which therefore stay exact.
struct ParticleRunConfig {
  long long n_particles = 100000;
  double dt = 1e-5;
  double horizon = 0.0;  // 0: use the last sample time
  std::uint64_t seed = 1;
  enum class Absorption { endpoint, bridge };
  Absorption absorption = Absorption::bridge;
  double z_star = 8.0;
};

struct ParticlePoint {
  double time = 0.0;
  SimEstimate est;
};

// Cumulative capture fraction at each requested time (ascending), estimated
// from pc.n_particles independent trajectories released at t = 0 toward the
// receiver of config c, from the source selected by `which`.
inline std::vector<ParticlePoint> particle_hit_prob(const LinkConfig& c, Source which,
                                                    const ParticleRunConfig& pc,
                                                    const std::vector<double>& times) {
  validate(c);
  if (pc.n_particles < 1) throw ConfigError("particle_hit_prob: n_particles must be >= 1");
  if (!(pc.dt > 0.0)) throw ConfigError("particle_hit_prob: dt must be > 0");
  if (!(pc.z_star >= 4.0)) throw ConfigError("particle_hit_prob: z_star must be >= 4");
  if (times.empty()) throw ConfigError("particle_hit_prob: need at least one sample time");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw ConfigError("particle_hit_prob: times must be > 0");
    if (i > 0 && times[i] <= times[i - 1])
      throw ConfigError("particle_hit_prob: times must be strictly ascending");
  }
  double horizon = pc.horizon > 0.0 ? pc.horizon : times.back();
  if (times.back() > horizon + 1e-12 * horizon)
    throw ConfigError("particle_hit_prob: sample times exceed horizon");

  double dist = source_distance(c, which);
  double step_var = 2.0 * c.D * pc.dt;
  double sigma = std::sqrt(step_var);
  bool bridge = pc.absorption == ParticleRunConfig::Absorption::bridge;

  // Sample instants on the step grid (rounded to the nearest step).
  std::vector<long long> sample_steps(times.size());
  for (size_t i = 0; i < times.size(); ++i)
    sample_steps[i] = std::max(1LL, (long long)std::llround(times[i] / pc.dt));
  long long max_steps = sample_steps.back();

  std::vector<long long> hits(times.size(), 0);

  if (c.dimension == Dimension::d1) {
    double denom_jump = pc.z_star * pc.z_star * step_var;
    for (long long p = 0; p < pc.n_particles; ++p) {
      CounterRng rng(pc.seed, std::uint64_t(p));
      double x = 0.0;
      long long step = 0;
      long long absorbed_at = -1;
      while (step < max_steps) {
        double gap = dist - x;
        long long next_sample = *std::lower_bound(sample_steps.begin(),
                                                  sample_steps.end(), step + 1);
        long long k = (long long)(gap * gap / denom_jump);
        k = std::min(k, next_sample - step);
        if (k >= 2) {
          x += std::sqrt(double(k)) * sigma * rng.next_normal();
          step += k;
          if (x >= dist) {  // beyond-z_star event; nearly impossible
            absorbed_at = step;
            break;
          }
          continue;
        }
        double x_new = x + sigma * rng.next_normal();
        ++step;
        if (x_new >= dist) {
          absorbed_at = step;
          break;
        }
        if (bridge) {
          double q = std::exp(-(dist - x) * (dist - x_new) / (c.D * pc.dt));
          if (rng.next_double() < q) {
            absorbed_at = step;
            break;
          }
        }
        x = x_new;
      }
      if (absorbed_at >= 0)
        for (size_t i = 0; i < times.size(); ++i)
          if (absorbed_at <= sample_steps[i]) ++hits[i];
    }
  } else {
    double denom_jump = 3.0 * pc.z_star * pc.z_star * step_var;
    for (long long p = 0; p < pc.n_particles; ++p) {
      CounterRng rng(pc.seed, std::uint64_t(p));
      double x = -dist, y = 0.0, z = 0.0;  // receiver centered at origin
      double R = dist;
      long long step = 0;
      long long absorbed_at = -1;
      while (step < max_steps) {
        double gap = R - c.r;
        long long next_sample = *std::lower_bound(sample_steps.begin(),
                                                  sample_steps.end(), step + 1);
        long long k = (long long)(gap * gap / denom_jump);
        k = std::min(k, next_sample - step);
        if (k >= 2) {
          double s = std::sqrt(double(k)) * sigma;
          x += s * rng.next_normal();
          y += s * rng.next_normal();
          z += s * rng.next_normal();
          step += k;
          R = std::sqrt(x * x + y * y + z * z);
          if (R <= c.r) {  // beyond-z_star event; nearly impossible
            absorbed_at = step;
            break;
          }
          continue;
        }
        double xn = x + sigma * rng.next_normal();
        double yn = y + sigma * rng.next_normal();
        double zn = z + sigma * rng.next_normal();
        double Rn = std::sqrt(xn * xn + yn * yn + zn * zn);
        ++step;
        if (Rn <= c.r) {
          absorbed_at = step;
          break;
        }
        if (bridge) {
          // Radial Brownian-bridge crossing of the sphere surface, treating
          // the surface locally as a plane.
          double q = std::exp(-(R - c.r) * (Rn - c.r) / (c.D * pc.dt));
          if (rng.next_double() < q) {
            absorbed_at = step;
            break;
          }
        }
        x = xn;
        y = yn;
        z = zn;
        R = Rn;
      }
      if (absorbed_at >= 0)
        for (size_t i = 0; i < times.size(); ++i)
          if (absorbed_at <= sample_steps[i]) ++hits[i];
    }
  }

  std::vector<ParticlePoint> out(times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    out[i].time = double(sample_steps[i]) * pc.dt;
    out[i].est.trials = pc.n_particles;
    out[i].est.errors = hits[i];
    out[i].est.seed = pc.seed;
    out[i].est.estimate = double(hits[i]) / double(pc.n_particles);
    out[i].est.std_error = std::sqrt(out[i].est.estimate *
                                     (1.0 - out[i].est.estimate) /
                                     double(pc.n_particles));
  }
  return out;
}

}  // namespace mclink
