// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mclink/channel.hpp"
#include "mclink/config.hpp"
#include "mclink/decision_rule.hpp"
#include "mclink/detector.hpp"
#include "mclink/distributions.hpp"
#include "mclink/errors.hpp"
#include "mclink/rng.hpp"

namespace mclink {

struct SimEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long long trials = 0;
  long long errors = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline SimEstimate finish_estimate(long long errors, long long trials,
                                   std::uint64_t seed) {
  SimEstimate est;
  est.trials = trials;
  est.errors = errors;
  est.seed = seed;
  est.estimate = double(errors) / double(trials);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / double(trials));
  return est;
}

}  // namespace detail

// Monte-Carlo estimate of the single-window error rate under the given rule;
// the sampling model is the rule's model. Trial i draws from its own
// counter-based stream, so the estimate is independent of work partitioning.
inline SimEstimate monte_carlo_ber(const LinkConfig& c, double T_r,
                                   const DecisionRule& rule, long long trials,
                                   std::uint64_t seed) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (trials < 1) throw ConfigError("monte_carlo_ber: trials must be >= 1");
  if (c.L > 1) throw ConfigError("monte_carlo_ber: use monte_carlo_ber_isi for L > 1");
  double p_d = hit_prob(c, Source::tx, T_r);
  double p_dI = hit_prob(c, Source::ix, T_r);

  long long errors = 0;
  for (long long i = 0; i < trials; ++i) {
    CounterRng rng(seed, std::uint64_t(i));
    int bit = rng.next_double() < 0.5 ? 0 : 1;
    long long x_T = bit ? c.N1 : c.N0;
    long long x_I = rng.next_double() < 0.5 ? c.N0 : c.N1;
    int decided;
    if (rule.model == CountModel::gaussian) {
      double mean = double(x_T) * p_d + double(x_I) * p_dI;
      double var = double(x_T) * p_d * (1.0 - p_d) +
                   double(x_I) * p_dI * (1.0 - p_dI);
      double y = var > 0.0 ? mean + std::sqrt(var) * rng.next_normal() : mean;
      decided = rule.detect(y);
    } else {
      long long y = rule.model == CountModel::binomial
                        ? rng.next_binomial(x_T, p_d) + rng.next_binomial(x_I, p_dI)
                        : rng.next_poisson(double(x_T) * p_d + double(x_I) * p_dI);
      decided = rule.detect(y);
    }
    if (decided != bit) ++errors;
  }
  return detail::finish_estimate(errors, trials, seed);
}

// Convenience: build the ML rule for (model, T_r) and simulate against it.
inline SimEstimate monte_carlo_ber(const LinkConfig& c, CountModel model, double T_r,
                                   long long trials, std::uint64_t seed) {
  DecisionRule rule = build_rule(c, model, T_r);
  return monte_carlo_ber(c, T_r, rule, trials, seed);
}

// Sequence-level Monte Carlo with full intersymbol interference. Each of
// n_sequences streams carries seq_len symbols from both sources; every
// release distributes its molecules over all later windows by sequential
// conditional binomials (an exact multinomial whose marginals are the
// Binomial taps), so the truth carries ISI from the whole past sequence.
// The detector applies the supplied rule of memory detector_memory; the
// mismatch between full-ISI truth and truncated detector is part of what is
// measured.
inline SimEstimate monte_carlo_ber_isi(const LinkConfig& c, double T_r,
                                       const DecisionRule& rule,
                                       long long n_sequences, int seq_len,
                                       int detector_memory, std::uint64_t seed) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (n_sequences < 1)
    throw ConfigError("monte_carlo_ber_isi: n_sequences must be >= 1");
  if (seq_len < 1) throw ConfigError("monte_carlo_ber_isi: seq_len must be >= 1");
  if (detector_memory < 1 || detector_memory > 8)
    throw ConfigError("monte_carlo_ber_isi: detector_memory must be in [1, 8]");
  if (rule.model == CountModel::binomial &&
      (long long)rule.labels.size() < 2 * (long long)detector_memory * c.N1 + 1)
    throw ConfigError("monte_carlo_ber_isi: rule table shorter than detector memory");

  // Taps for every lag a release can reach within one sequence.
  std::vector<double> taps_tx(static_cast<size_t>(seq_len));
  std::vector<double> taps_ix(static_cast<size_t>(seq_len));
  for (int l = 0; l < seq_len; ++l) {
    taps_tx[size_t(l)] = isi_tap_probability(c, Source::tx, l, T_r);
    taps_ix[size_t(l)] = isi_tap_probability(c, Source::ix, l, T_r);
  }

  long long errors = 0;
  std::vector<int> bits(static_cast<size_t>(seq_len));
  std::vector<long long> counts(static_cast<size_t>(seq_len));
  for (long long s = 0; s < n_sequences; ++s) {
    CounterRng rng(seed, std::uint64_t(s));
    for (int j = 0; j < seq_len; ++j)
      bits[size_t(j)] = rng.next_double() < 0.5 ? 0 : 1;
    std::fill(counts.begin(), counts.end(), 0LL);
    for (int j = 0; j < seq_len; ++j) {
      for (int src = 0; src < 2; ++src) {
        const std::vector<double>& taps = src == 0 ? taps_tx : taps_ix;
        long long released =
            src == 0 ? (bits[size_t(j)] ? c.N1 : c.N0)
                     : (rng.next_double() < 0.5 ? c.N0 : c.N1);
        double cum = 0.0;
        long long remaining = released;
        for (int l = 0; l + j < seq_len && remaining > 0; ++l) {
          double denom = 1.0 - cum;
          if (denom <= 0.0) break;
          double p_cond = std::min(taps[size_t(l)] / denom, 1.0);
          long long h = rng.next_binomial(remaining, p_cond);
          counts[size_t(j + l)] += h;
          remaining -= h;
          cum += taps[size_t(l)];
        }
      }
    }
    for (int j = 0; j < seq_len; ++j)
      if (rule.detect(counts[size_t(j)]) != bits[size_t(j)]) ++errors;
  }
  return detail::finish_estimate(errors, n_sequences * (long long)seq_len, seed);
}

// Convenience: build the memory-L ML rule for the config and simulate.
inline SimEstimate monte_carlo_ber_isi(const LinkConfig& c, double T_r,
                                       long long n_sequences, int seq_len,
                                       std::uint64_t seed) {
  DecisionRule rule = build_rule_isi(c, CountModel::binomial, T_r);
  return monte_carlo_ber_isi(c, T_r, rule, n_sequences, seq_len, c.L, seed);
}

}  // namespace mclink
