// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mclink/channel.hpp"
#include "mclink/config.hpp"
#include "mclink/errors.hpp"
#include "mclink/special.hpp"

namespace mclink {

// Discrete count distribution on {0, 1, 2, ...}; values[y] = P(Y = y).
// Truncated tails carry < 1e-12 total mass.
struct CountPmf {
  long long support_min = 0;
  std::vector<double> values;

  double at(long long y) const {
    return (y < 0 || y >= (long long)values.size()) ? 0.0 : values[size_t(y)];
  }
  double mass() const {
    KahanSum s;
    for (double v : values) s.add(v);
    return s.value();
  }
  double mean() const {
    KahanSum s;
    for (size_t y = 0; y < values.size(); ++y) s.add(double(y) * values[y]);
    return s.value();
  }
};

// Weighted sum of normal densities; the continuous-observation counterpart
// of CountPmf used by the Gaussian analysis path.
struct GaussianMixture {
  struct Component {
    double weight;
    double mean;
    double variance;
  };
  std::vector<Component> components;

  double pdf(double y) const {
    double s = 0.0;
    for (const auto& c : components)
      s += c.weight / std::sqrt(2.0 * M_PI * c.variance) *
           std::exp(-(y - c.mean) * (y - c.mean) / (2.0 * c.variance));
    return s;
  }
  double cdf(double y) const {
    double s = 0.0;
    for (const auto& c : components)
      s += c.weight * normal_cdf((y - c.mean) / std::sqrt(c.variance));
    return s;
  }
};

namespace detail {

// Per-tail mass discarded when trimming pmf supports. Far below the 1e-12
// truncation budget promised by CountPmf and the 1e-10 oracle tolerances.
inline constexpr double kTrimTail = 1e-18;

// Contiguous slice [offset, offset + values.size()) of a count pmf.
struct Trimmed {
  long long offset = 0;
  std::vector<double> values;

  long long hi() const { return offset + (long long)values.size(); }  // exclusive
};

// Binomial(n, p) with both tails trimmed to < kTrimTail mass. Values are
// generated by the multiplicative recurrence from the mode, which is stable
// for any (n, p) including severely skewed cases.
inline Trimmed trimmed_binomial(long long n, double p) {
  if (n < 0) throw ConfigError("trimmed_binomial: n must be >= 0");
  if (p < 0.0 || p > 1.0) throw ConfigError("trimmed_binomial: p must be in [0,1]");
  if (n == 0 || p == 0.0) return {0, {1.0}};
  if (p == 1.0) return {n, {1.0}};

  long long mode = (long long)std::floor(double(n + 1) * p);
  mode = std::clamp(mode, 0LL, n);
  double pm = binomial_pmf_value(n, p, mode);

  // Walk down from the mode until the remaining tail is provably < kTrimTail.
  // Below the mode the pmf ratio pmf(k-1)/pmf(k) = k(1-p)/((n-k+1)p) shrinks
  // as k decreases, so the tail is bounded by a geometric series.
  std::vector<double> down;
  double v = pm;
  long long k = mode;
  while (k > 0) {
    double ratio = double(k) * (1.0 - p) / (double(n - k + 1) * p);
    double tail_bound = ratio < 0.5 ? v * ratio / (1.0 - ratio) : -1.0;
    if (tail_bound >= 0.0 && tail_bound < kTrimTail) break;
    v *= ratio;
    down.push_back(v);
    --k;
  }
  long long lo = k;

  std::vector<double> up;
  v = pm;
  k = mode;
  while (k < n) {
    double ratio = double(n - k) * p / (double(k + 1) * (1.0 - p));
    double tail_bound = ratio < 0.5 ? v * ratio / (1.0 - ratio) : -1.0;
    if (tail_bound >= 0.0 && tail_bound < kTrimTail) break;
    v *= ratio;
    up.push_back(v);
    ++k;
  }

  Trimmed out;
  out.offset = lo;
  out.values.reserve(down.size() + 1 + up.size());
  for (auto it = down.rbegin(); it != down.rend(); ++it) out.values.push_back(*it);
  out.values.push_back(pm);
  for (double u : up) out.values.push_back(u);
  return out;
}

// Poisson(lambda) trimmed the same way.
inline Trimmed trimmed_poisson(double lambda) {
  if (lambda < 0.0) throw ConfigError("trimmed_poisson: lambda must be >= 0");
  if (lambda == 0.0) return {0, {1.0}};
  long long mode = (long long)std::floor(lambda);
  double pm = poisson_pmf_value(lambda, mode);

  std::vector<double> down;
  double v = pm;
  long long k = mode;
  while (k > 0) {
    double ratio = double(k) / lambda;  // pmf(k-1)/pmf(k)
    double tail_bound = ratio < 0.5 ? v * ratio / (1.0 - ratio) : -1.0;
    if (tail_bound >= 0.0 && tail_bound < kTrimTail) break;
    v *= ratio;
    down.push_back(v);
    --k;
  }
  long long lo = k;

  std::vector<double> up;
  v = pm;
  k = mode;
  for (;;) {
    double ratio = lambda / double(k + 1);
    double tail_bound = ratio < 0.5 ? v * ratio / (1.0 - ratio) : -1.0;
    if (tail_bound >= 0.0 && tail_bound < kTrimTail) break;
    v *= ratio;
    up.push_back(v);
    ++k;
  }

  Trimmed out;
  out.offset = lo;
  out.values.reserve(down.size() + 1 + up.size());
  for (auto it = down.rbegin(); it != down.rend(); ++it) out.values.push_back(*it);
  out.values.push_back(pm);
  for (double u : up) out.values.push_back(u);
  return out;
}

// Exact discrete convolution of two trimmed slices.
inline Trimmed convolve(const Trimmed& a, const Trimmed& b) {
  Trimmed out;
  out.offset = a.offset + b.offset;
  out.values.assign(a.values.size() + b.values.size() - 1, 0.0);
  for (size_t i = 0; i < a.values.size(); ++i) {
    double ai = a.values[i];
    for (size_t j = 0; j < b.values.size(); ++j)
      out.values[i + j] += ai * b.values[j];
  }
  return out;
}

// w1*a + w2*b over the union of supports.
inline Trimmed mix(const Trimmed& a, double w1, const Trimmed& b, double w2) {
  long long lo = std::min(a.offset, b.offset);
  long long hi = std::max(a.hi(), b.hi());
  Trimmed out;
  out.offset = lo;
  out.values.assign(size_t(hi - lo), 0.0);
  for (size_t i = 0; i < a.values.size(); ++i)
    out.values[size_t(a.offset - lo) + i] += w1 * a.values[i];
  for (size_t i = 0; i < b.values.size(); ++i)
    out.values[size_t(b.offset - lo) + i] += w2 * b.values[i];
  return out;
}

inline CountPmf densify(const Trimmed& t) {
  CountPmf p;
  p.values.assign(size_t(t.hi()), 0.0);
  std::copy(t.values.begin(), t.values.end(), p.values.begin() + size_t(t.offset));
  return p;
}

// Equal-weight average of Binomial(N0, tap) and Binomial(N1, tap): the
// conditional count from one interfering (or past) release whose bit is
// unknown and equiprobable.
inline Trimmed averaged_binomial(long long N0, long long N1, double tap) {
  return mix(trimmed_binomial(N0, tap), 0.5, trimmed_binomial(N1, tap), 0.5);
}

}  // namespace detail

// Binomial(n, p) pmf at k, stable up to desk-scale n (log-space kernel).
inline double binomial_pmf(long long n, double p, long long k) {
  if (p < 0.0 || p > 1.0) throw ConfigError("binomial_pmf: p must be in [0,1]");
  if (n < 0) throw ConfigError("binomial_pmf: n must be >= 0");
  if (k < 0) throw ConfigError("binomial_pmf: k must be >= 0");
  return binomial_pmf_value(n, p, k);
}

// Conditional pmf of the total received count given both release counts:
// the convolution Binom(x_T, p_d) * Binom(x_I, p_dI) for the Binomial model,
// or a single Poisson with the summed rate.
inline CountPmf conditional_total_pmf(long long x_T, long long x_I, double p_d,
                                      double p_dI, CountModel model) {
  if (p_d < 0.0 || p_d > 1.0 || p_dI < 0.0 || p_dI > 1.0)
    throw ConfigError("conditional_total_pmf: probabilities must be in [0,1]");
  if (x_T < 0 || x_I < 0)
    throw ConfigError("conditional_total_pmf: counts must be >= 0");
  switch (model) {
    case CountModel::binomial:
      return detail::densify(detail::convolve(detail::trimmed_binomial(x_T, p_d),
                                              detail::trimmed_binomial(x_I, p_dI)));
    case CountModel::poisson:
      return detail::densify(
          detail::trimmed_poisson(double(x_T) * p_d + double(x_I) * p_dI));
    default:
      throw ConfigError(
          "conditional_total_pmf: Gaussian path uses gaussian_component");
  }
}

// Gaussian-model counterpart: one normal component per (x_T, x_I) pair.
inline GaussianMixture::Component gaussian_component(long long x_T, long long x_I,
                                                     double p_d, double p_dI) {
  double mean = double(x_T) * p_d + double(x_I) * p_dI;
  double var =
      double(x_T) * p_d * (1.0 - p_d) + double(x_I) * p_dI * (1.0 - p_dI);
  if (!(var > 0.0))
    throw NumericError("gaussian_component: degenerate (zero-variance) component");
  return {1.0, mean, var};
}

// P(y | x_T) with the interferer bit marginalized over its equiprobable
// alphabet {N0, N1}: discrete models return a CountPmf.
inline CountPmf mixture_over_interference(long long x_T, const LinkConfig& c,
                                          CountModel model, double T_r) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  double p_d = hit_prob(c, Source::tx, T_r);
  double p_dI = hit_prob(c, Source::ix, T_r);
  if (model == CountModel::gaussian)
    throw ConfigError("mixture_over_interference: use gaussian_mixture for Gaussian");
  using detail::convolve;
  using detail::trimmed_binomial;
  using detail::trimmed_poisson;
  detail::Trimmed a, b;
  if (model == CountModel::binomial) {
    auto tx = trimmed_binomial(x_T, p_d);
    a = convolve(tx, trimmed_binomial(c.N0, p_dI));
    b = convolve(tx, trimmed_binomial(c.N1, p_dI));
  } else {
    a = trimmed_poisson(double(x_T) * p_d + double(c.N0) * p_dI);
    b = trimmed_poisson(double(x_T) * p_d + double(c.N1) * p_dI);
  }
  return detail::densify(detail::mix(a, 0.5, b, 0.5));
}

// Gaussian-model mixture P(y | x_T): two components, one per interferer bit.
inline GaussianMixture gaussian_mixture(long long x_T, long long N0, long long N1,
                                        double p_d, double p_dI) {
  GaussianMixture g;
  for (long long x_I : {N0, N1}) {
    auto comp = gaussian_component(x_T, x_I, p_d, p_dI);
    comp.weight = 0.5;
    g.components.push_back(comp);
  }
  return g;
}

// Conditional pmf of the count received in one detection window of an ISI
// channel with memory L: the convolution over the 2L per-release Binomials
// (current + L-1 past transmitter releases, L interferer releases).
inline CountPmf isi_conditional_pmf(const std::vector<long long>& hist_tx,
                                    const std::vector<long long>& hist_ix,
                                    const std::vector<double>& taps_tx,
                                    const std::vector<double>& taps_ix,
                                    CountModel model) {
  size_t L = hist_tx.size();
  if (L < 1 || hist_ix.size() != L || taps_tx.size() != L || taps_ix.size() != L)
    throw ConfigError("isi_conditional_pmf: history/tap length mismatch");
  if (model == CountModel::poisson) {
    double lambda = 0.0;
    for (size_t l = 0; l < L; ++l)
      lambda += double(hist_tx[l]) * taps_tx[l] + double(hist_ix[l]) * taps_ix[l];
    return detail::densify(detail::trimmed_poisson(lambda));
  }
  if (model != CountModel::binomial)
    throw ConfigError("isi_conditional_pmf: Gaussian model unsupported here");
  detail::Trimmed acc{0, {1.0}};
  for (size_t l = 0; l < L; ++l) {
    acc = detail::convolve(acc, detail::trimmed_binomial(hist_tx[l], taps_tx[l]));
    acc = detail::convolve(acc, detail::trimmed_binomial(hist_ix[l], taps_ix[l]));
  }
  return detail::densify(acc);
}

// Channel ISI taps for both sources at a given detection window.
inline std::vector<double> isi_taps(const LinkConfig& c, Source which, double T_r) {
  std::vector<double> taps(size_t(c.L));
  for (int l = 0; l < c.L; ++l)
    taps[size_t(l)] = isi_tap_probability(c, which, l, T_r);
  return taps;
}

}  // namespace mclink
