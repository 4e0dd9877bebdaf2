// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mclink/channel.hpp"
#include "mclink/config.hpp"
#include "mclink/decision_rule.hpp"
#include "mclink/distributions.hpp"
#include "mclink/errors.hpp"
#include "mclink/quadrature.hpp"

namespace mclink {

namespace detail {

// Relative tolerance for likelihood comparisons: differences smaller than
// this are treated as ties (and resolved toward bit 1).
inline constexpr double kTieRelTol = 1e-12;

// One release of x molecules with per-molecule capture probability `tap`.
inline Trimmed trimmed_release(long long x, double tap, CountModel model) {
  if (model == CountModel::poisson) return trimmed_poisson(double(x) * tap);
  return trimmed_binomial(x, tap);
}

// Release whose bit is unknown and equiprobable over {N0, N1}.
inline Trimmed averaged_release(long long N0, long long N1, double tap,
                                CountModel model) {
  return mix(trimmed_release(N0, tap, model), 0.5,
             trimmed_release(N1, tap, model), 0.5);
}

// Build the canonical ML label table from the two conditional pmfs.
// Inside the union support, bit 0 iff P(y|N0) > P(y|N1) by more than a
// 1e-12 relative margin, with ties (and near-ties) to bit 1; below the
// union support bit 0, above it bit 1 (the structural limits of the
// likelihood ratio, which keeps the table stable under tail trimming).
// table_hint >= 0 fixes the table length (full binomial support); otherwise
// the table ends at the trimmed union support and detect() extends with
// bit 1 beyond it.
inline DecisionRule rule_from_conditionals(const Trimmed& pmf0, const Trimmed& pmf1,
                                           CountModel model,
                                           long long table_hint) {
  long long box_lo = std::min(pmf0.offset, pmf1.offset);
  long long box_hi = std::max(pmf0.hi(), pmf1.hi());  // exclusive
  long long table = table_hint >= 0 ? table_hint : box_hi;
  DecisionRule rule;
  rule.model = model;
  rule.labels.assign(size_t(table), 1);
  auto value = [](const Trimmed& p, long long y) {
    return (y < p.offset || y >= p.hi()) ? 0.0 : p.values[size_t(y - p.offset)];
  };
  for (long long y = 0; y < table; ++y) {
    std::uint8_t bit;
    if (y < box_lo)
      bit = 0;
    else if (y >= box_hi)
      bit = 1;
    else
      bit = value(pmf0, y) > value(pmf1, y) * (1.0 + kTieRelTol) ? 0 : 1;
    rule.labels[size_t(y)] = bit;
  }
  return rule;
}

}  // namespace detail

// ML rule for a single detection window given the per-molecule capture
// probabilities, with the interferer bit marginalized over {N0, N1}.
inline DecisionRule build_rule_discrete(long long N0, long long N1, double p_d,
                                        double p_dI, CountModel model) {
  if (N1 <= N0 || N0 < 0) throw ConfigError("build_rule_discrete: need N1 > N0 >= 0");
  if (p_d < 0.0 || p_d > 1.0 || p_dI < 0.0 || p_dI > 1.0)
    throw ConfigError("build_rule_discrete: probabilities must be in [0,1]");
  if (model == CountModel::gaussian)
    throw ConfigError("build_rule_discrete: use build_rule_gaussian");
  using namespace detail;
  Trimmed ix = averaged_release(N0, N1, p_dI, model);
  Trimmed pmf0 = convolve(trimmed_release(N0, p_d, model), ix);
  Trimmed pmf1 = convolve(trimmed_release(N1, p_d, model), ix);
  long long hint = model == CountModel::binomial ? 2 * N1 + 1 : -1;
  return rule_from_conditionals(pmf0, pmf1, model, hint);
}

// ML rule for the Gaussian approximation: decision-region boundaries are the
// roots of pdf(y|N0) = pdf(y|N1), located by a dense scan plus bisection.
// p_d = 0 makes the two conditional mixtures identical; the rule is then
// flagged degenerate and decides bit 1 everywhere.
inline DecisionRule build_rule_gaussian(long long N0, long long N1, double p_d,
                                        double p_dI) {
  if (N1 <= N0 || N0 < 0) throw ConfigError("build_rule_gaussian: need N1 > N0 >= 0");
  if (p_d < 0.0 || p_d > 1.0 || p_dI < 0.0 || p_dI > 1.0)
    throw ConfigError("build_rule_gaussian: probabilities must be in [0,1]");
  DecisionRule rule;
  rule.model = CountModel::gaussian;
  if (p_d == 0.0) {
    rule.degenerate = true;
    rule.region_bits = {1};
    return rule;
  }
  GaussianMixture g0 = gaussian_mixture(N0, N0, N1, p_d, p_dI);
  GaussianMixture g1 = gaussian_mixture(N1, N0, N1, p_d, p_dI);

  double mu_min = g0.components[0].mean, mu_max = g0.components[0].mean;
  double var_max = 0.0;
  for (const auto& g : {g0, g1})
    for (const auto& c : g.components) {
      mu_min = std::min(mu_min, c.mean);
      mu_max = std::max(mu_max, c.mean);
      var_max = std::max(var_max, c.variance);
    }
  double sigma_max = std::sqrt(var_max);
  double lo = mu_min - 5.0 * sigma_max, hi = mu_max + 5.0 * sigma_max;
  double span = hi - lo;

  auto diff = [&](double y) { return g0.pdf(y) - g1.pdf(y); };

  constexpr int kScan = 4096;
  std::vector<double> roots;
  double prev_y = lo, prev_g = diff(lo);
  for (int i = 1; i <= kScan; ++i) {
    double y = lo + span * double(i) / kScan;
    double g = diff(y);
    if ((prev_g > 0.0 && g < 0.0) || (prev_g < 0.0 && g > 0.0)) {
      double a = prev_y, b = y, fa = prev_g;
      while (b - a > 1e-9 * span) {
        double m = 0.5 * (a + b), fm = diff(m);
        if ((fa > 0.0 && fm < 0.0) || (fa < 0.0 && fm > 0.0)) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_y = y;
    prev_g = g;
  }

  // Label each region at a representative interior point; merge neighbours
  // that decide the same bit so the boundary list is canonical.
  std::vector<std::uint8_t> bits;
  for (size_t i = 0; i <= roots.size(); ++i) {
    double rep;
    if (roots.empty())
      rep = 0.5 * (lo + hi);
    else if (i == 0)
      rep = roots.front() - sigma_max;
    else if (i == roots.size())
      rep = roots.back() + sigma_max;
    else
      rep = 0.5 * (roots[i - 1] + roots[i]);
    bits.push_back(g0.pdf(rep) > g1.pdf(rep) ? 0 : 1);
  }
  rule.region_bits.push_back(bits[0]);
  for (size_t i = 1; i < bits.size(); ++i) {
    if (bits[i] != rule.region_bits.back()) {
      rule.boundaries.push_back(roots[i - 1]);
      rule.region_bits.push_back(bits[i]);
    }
  }
  return rule;
}

// ML rule for one detection window of the link (no ISI): capture
// probabilities follow from the geometry at detection interval T_r.
inline DecisionRule build_rule(const LinkConfig& c, CountModel model, double T_r) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  double p_d = hit_prob(c, Source::tx, T_r);
  double p_dI = hit_prob(c, Source::ix, T_r);
  if (model == CountModel::gaussian)
    return build_rule_gaussian(c.N0, c.N1, p_d, p_dI);
  return build_rule_discrete(c.N0, c.N1, p_d, p_dI, model);
}

// ML rule when the interferer distance is only known to be uniform on
// [a, b]: conditionals are replaced by their expectation over d_I, computed
// with Gauss-Legendre quadrature (Binomial model).
inline DecisionRule build_rule_unknown_location(const LinkConfig& c, double T_r,
                                                int nodes = 64) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (c.location_known)
    throw ConfigError("build_rule_unknown_location: config has location_known=true");
  if (nodes < 1) throw ConfigError("build_rule_unknown_location: nodes must be >= 1");
  double p_d = hit_prob(c, Source::tx, T_r);
  auto rule = gauss_legendre(nodes);
  double mid = 0.5 * (c.bounds.a + c.bounds.b);
  double halfw = 0.5 * (c.bounds.b - c.bounds.a);

  using namespace detail;
  long long table = 2 * c.N1 + 1;
  std::vector<double> acc0(size_t(table), 0.0), acc1(size_t(table), 0.0);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double d_I = mid + halfw * rule.nodes[i];
    double w = 0.5 * rule.weights[i];  // E over U(a,b): weights sum to 1
    double p_dI = c.dimension == Dimension::d1 ? hit_prob_1d(d_I, c.D, T_r)
                                               : hit_prob_3d(d_I, c.r, c.D, T_r);
    Trimmed ix = averaged_release(c.N0, c.N1, p_dI, CountModel::binomial);
    Trimmed m0 = convolve(trimmed_binomial(c.N0, p_d), ix);
    Trimmed m1 = convolve(trimmed_binomial(c.N1, p_d), ix);
    for (long long y = m0.offset; y < m0.hi() && y < table; ++y)
      acc0[size_t(y)] += w * m0.values[size_t(y - m0.offset)];
    for (long long y = m1.offset; y < m1.hi() && y < table; ++y)
      acc1[size_t(y)] += w * m1.values[size_t(y - m1.offset)];
  }
  Trimmed e0{0, acc0}, e1{0, acc1};
  return rule_from_conditionals(e0, e1, CountModel::binomial, table);
}

// Expected conditional pmfs used by the unknown-location rule; exposed for
// validation.
inline std::pair<CountPmf, CountPmf> expected_conditionals_unknown_location(
    const LinkConfig& c, double T_r, int nodes = 64) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (c.location_known)
    throw ConfigError(
        "expected_conditionals_unknown_location: config has location_known=true");
  double p_d = hit_prob(c, Source::tx, T_r);
  auto rule = gauss_legendre(nodes);
  double mid = 0.5 * (c.bounds.a + c.bounds.b);
  double halfw = 0.5 * (c.bounds.b - c.bounds.a);
  using namespace detail;
  long long table = 2 * c.N1 + 1;
  CountPmf e0, e1;
  e0.values.assign(size_t(table), 0.0);
  e1.values.assign(size_t(table), 0.0);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double d_I = mid + halfw * rule.nodes[i];
    double w = 0.5 * rule.weights[i];
    double p_dI = c.dimension == Dimension::d1 ? hit_prob_1d(d_I, c.D, T_r)
                                               : hit_prob_3d(d_I, c.r, c.D, T_r);
    Trimmed ix = averaged_release(c.N0, c.N1, p_dI, CountModel::binomial);
    Trimmed m0 = convolve(trimmed_binomial(c.N0, p_d), ix);
    Trimmed m1 = convolve(trimmed_binomial(c.N1, p_d), ix);
    for (long long y = m0.offset; y < m0.hi() && y < table; ++y)
      e0.values[size_t(y)] += w * m0.values[size_t(y - m0.offset)];
    for (long long y = m1.offset; y < m1.hi() && y < table; ++y)
      e1.values[size_t(y)] += w * m1.values[size_t(y - m1.offset)];
  }
  return {e0, e1};
}

namespace detail {

// Conditional pmf of the window count given the current transmitter bit,
// with the L-1 past transmitter bits and L interferer bits marginalized.
// Equiprobable independent bits factorize the history average into a
// convolution of per-lag averaged releases, which is exactly the
// 2^(2L-1)-term enumeration at polynomial cost.
inline Trimmed isi_conditional_mixture(const LinkConfig& c, CountModel model,
                                       double T_r, long long x_T) {
  Trimmed acc = trimmed_release(x_T, isi_tap_probability(c, Source::tx, 0, T_r), model);
  acc = convolve(acc, averaged_release(c.N0, c.N1,
                                       isi_tap_probability(c, Source::ix, 0, T_r),
                                       model));
  for (int l = 1; l < c.L; ++l) {
    acc = convolve(acc, averaged_release(c.N0, c.N1,
                                         isi_tap_probability(c, Source::tx, l, T_r),
                                         model));
    acc = convolve(acc, averaged_release(c.N0, c.N1,
                                         isi_tap_probability(c, Source::ix, l, T_r),
                                         model));
  }
  return acc;
}

}  // namespace detail

// ML rule for a link with ISI memory L = config.L. The history average is
// computed by per-lag factorization; complexity is polynomial in L, but the
// public contract caps L at 8 to bound table sizes and match the
// enumeration-checked regime.
inline DecisionRule build_rule_isi(const LinkConfig& c, CountModel model, double T_r) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (c.L > 8) throw ConfigError("build_rule_isi: L must be <= 8");
  if (model == CountModel::gaussian)
    throw ConfigError("build_rule_isi: Gaussian model unsupported for ISI");
  using namespace detail;
  Trimmed pmf0 = isi_conditional_mixture(c, model, T_r, c.N0);
  Trimmed pmf1 = isi_conditional_mixture(c, model, T_r, c.N1);
  long long hint = model == CountModel::binomial ? 2 * c.L * c.N1 + 1 : -1;
  return rule_from_conditionals(pmf0, pmf1, model, hint);
}

// Enumeration reference for the ISI conditionals: explicit average over all
// 2^(2L-1) histories. Exponential in L; capped at L <= 8.
inline CountPmf isi_conditional_pmf_enumeration(const LinkConfig& c, CountModel model,
                                                double T_r, long long x_T) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (c.L > 8) throw ConfigError("isi_conditional_pmf_enumeration: L must be <= 8");
  int L = c.L;
  std::vector<double> taps_tx = isi_taps(c, Source::tx, T_r);
  std::vector<double> taps_ix = isi_taps(c, Source::ix, T_r);
  int nbits = 2 * L - 1;
  long long table = 0;
  std::vector<std::vector<double>> terms;
  for (long long h = 0; h < (1LL << nbits); ++h) {
    std::vector<long long> hist_tx(static_cast<size_t>(L));
    std::vector<long long> hist_ix(static_cast<size_t>(L));
    hist_tx[0] = x_T;
    for (int l = 1; l < L; ++l)
      hist_tx[size_t(l)] = ((h >> (l - 1)) & 1) ? c.N1 : c.N0;
    for (int l = 0; l < L; ++l)
      hist_ix[size_t(l)] = ((h >> (L - 1 + l)) & 1) ? c.N1 : c.N0;
    CountPmf p = isi_conditional_pmf(hist_tx, hist_ix, taps_tx, taps_ix, model);
    table = std::max(table, (long long)p.values.size());
    terms.push_back(std::move(p.values));
  }
  CountPmf out;
  out.values.assign(size_t(table), 0.0);
  double w = 1.0 / double(1LL << nbits);
  for (const auto& t : terms)
    for (size_t y = 0; y < t.size(); ++y) out.values[y] += w * t[y];
  return out;
}

}  // namespace mclink
