// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "mclink/errors.hpp"
#include "mclink/special.hpp"

namespace mclink {

namespace detail {

// SplitMix64 finalizer: full-avalanche 64-bit hash.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Counter-based stream: output i is a pure function of (seed, stream, i), so
// per-trial streams are reproducible regardless of how work is partitioned.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::splitmix64(seed ^ detail::splitmix64(stream ^ 0xA5A5A5A5A5A5A5A5ULL))) {}

  std::uint64_t next_u64() {
    return detail::splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second deviate is cached.
  double next_normal() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    double u1 = next_double();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cache_ = r * std::sin(a);
    have_cache_ = true;
    return r * std::cos(a);
  }

  // Exact Binomial(n, p) draw by inversion, consuming the pmf outward from
  // the mode in decreasing-probability order. Robust for any (n, p): never
  // evaluates the underflow-prone tail pmf first.
  long long next_binomial(long long n, double p) {
    if (n < 0) throw ConfigError("next_binomial: n must be >= 0");
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n == 0) return 0;
    double u = next_double();
    long long m = (long long)std::floor(double(n + 1) * p);
    if (m > n) m = n;
    double pm = binomial_pmf_value(n, p, m);
    u -= pm;
    if (u <= 0.0) return m;
    long long k_down = m, k_up = m;
    double v_down = pm, v_up = pm;
    for (;;) {
      double nd = k_down > 0 ? v_down * double(k_down) * (1.0 - p) /
                                   (double(n - k_down + 1) * p)
                             : -1.0;
      double nu = k_up < n ? v_up * double(n - k_up) * p /
                                 (double(k_up + 1) * (1.0 - p))
                           : -1.0;
      if (nd < 0.0 && nu < 0.0) return m;  // rounding dust: all mass consumed
      if (nd >= nu) {
        --k_down;
        v_down = nd;
        u -= nd;
        if (u <= 0.0) return k_down;
      } else {
        ++k_up;
        v_up = nu;
        u -= nu;
        if (u <= 0.0) return k_up;
      }
    }
  }

  // Exact Poisson(lambda) draw by the same mode-outward inversion.
  long long next_poisson(double lambda) {
    if (lambda < 0.0) throw ConfigError("next_poisson: lambda must be >= 0");
    if (lambda == 0.0) return 0;
    double u = next_double();
    long long m = (long long)std::floor(lambda);
    double pm = poisson_pmf_value(lambda, m);
    u -= pm;
    if (u <= 0.0) return m;
    long long k_down = m, k_up = m;
    double v_down = pm, v_up = pm;
    for (;;) {
      double nd = k_down > 0 ? v_down * double(k_down) / lambda : -1.0;
      double nu = v_up * lambda / double(k_up + 1);
      if (nd >= nu) {
        --k_down;
        v_down = nd;
        u -= nd;
        if (u <= 0.0) return k_down;
      } else {
        ++k_up;
        v_up = nu;
        u -= nu;
        if (u <= 0.0) return k_up;
      }
      if (nd < 1e-320 && nu < 1e-320) return m;  // rounding dust
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cache_ = 0.0;
  bool have_cache_ = false;
};

}  // namespace mclink
