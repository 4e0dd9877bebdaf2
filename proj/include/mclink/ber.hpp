// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "mclink/channel.hpp"
#include "mclink/config.hpp"
#include "mclink/decision_rule.hpp"
#include "mclink/detector.hpp"
#include "mclink/distributions.hpp"
#include "mclink/errors.hpp"
#include "mclink/special.hpp"

namespace mclink {

namespace detail {

// 0.5 * P(decide 1 | bit 0) + 0.5 * P(decide 0 | bit 1) over trimmed
// conditionals; detect() supplies the structural labels beyond the table.
inline double evaluate_ber_trimmed(const DecisionRule& rule, const Trimmed& pmf0,
                                   const Trimmed& pmf1) {
  KahanSum s;
  for (long long y = pmf0.offset; y < pmf0.hi(); ++y)
    if (rule.detect(y) == 1) s.add(0.5 * pmf0.values[size_t(y - pmf0.offset)]);
  for (long long y = pmf1.offset; y < pmf1.hi(); ++y)
    if (rule.detect(y) == 0) s.add(0.5 * pmf1.values[size_t(y - pmf1.offset)]);
  return s.value();
}

inline double checked_ber(double v) {
  if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
    throw NumericError("ber: result outside [0,1]");
  return std::clamp(v, 0.0, 1.0);
}

// Signed d/dp of the Binomial(n, p) pmf: n * [B(n-1,p)(k-1) - B(n-1,p)(k)].
inline Trimmed binomial_dp(long long n, double p) {
  if (n == 0) return {0, {0.0}};
  Trimmed base = trimmed_binomial(n - 1, p);
  Trimmed out;
  out.offset = base.offset;
  out.values.assign(base.values.size() + 1, 0.0);
  for (size_t i = 0; i < base.values.size(); ++i) {
    out.values[i + 1] += double(n) * base.values[i];
    out.values[i] -= double(n) * base.values[i];
  }
  return out;
}

// Signed d/dlambda of the Poisson(lambda) pmf: P(y-1) - P(y).
inline Trimmed poisson_dlambda(double lambda) {
  Trimmed base = trimmed_poisson(lambda);
  Trimmed out;
  out.offset = base.offset;
  out.values.assign(base.values.size() + 1, 0.0);
  for (size_t i = 0; i < base.values.size(); ++i) {
    out.values[i + 1] += base.values[i];
    out.values[i] -= base.values[i];
  }
  return out;
}

// Signed sum of 0.5 * dpmf0 over the bit-1 region plus 0.5 * dpmf1 over the
// bit-0 region: the BER derivative with the rule held fixed.
inline double ber_derivative_sum(const DecisionRule& rule, const Trimmed& d0,
                                 const Trimmed& d1) {
  KahanSum s;
  for (long long y = std::max(d0.offset, 0LL); y < d0.hi(); ++y)
    if (rule.detect(y) == 1) s.add(0.5 * d0.values[size_t(y - d0.offset)]);
  for (long long y = std::max(d1.offset, 0LL); y < d1.hi(); ++y)
    if (rule.detect(y) == 0) s.add(0.5 * d1.values[size_t(y - d1.offset)]);
  return s.value();
}

// Conditional mixtures P(y | x_T) for the single-window (no ISI) link.
inline std::pair<Trimmed, Trimmed> conditional_mixtures(long long N0, long long N1,
                                                        double p_d, double p_dI,
                                                        CountModel model) {
  Trimmed ix = averaged_release(N0, N1, p_dI, model);
  return {convolve(trimmed_release(N0, p_d, model), ix),
          convolve(trimmed_release(N1, p_d, model), ix)};
}

}  // namespace detail

// Error rate of an explicit rule against explicit conditional pmfs.
inline double evaluate_ber(const DecisionRule& rule, const CountPmf& pmf0,
                           const CountPmf& pmf1) {
  if (rule.model == CountModel::gaussian)
    throw ConfigError("evaluate_ber: discrete pmfs with a Gaussian rule");
  detail::Trimmed t0{pmf0.support_min, pmf0.values};
  detail::Trimmed t1{pmf1.support_min, pmf1.values};
  return detail::checked_ber(detail::evaluate_ber_trimmed(rule, t0, t1));
}

// Error rate of a Gaussian-model rule: normal-CDF mass of each conditional
// mixture over the regions deciding the wrong bit.
inline double ber_gaussian_rule(const DecisionRule& rule, const GaussianMixture& g0,
                                const GaussianMixture& g1) {
  if (rule.model != CountModel::gaussian)
    throw ConfigError("ber_gaussian_rule: rule is not Gaussian");
  if (rule.degenerate) return 0.5;  // everything decides bit 1
  double err0 = 0.0, err1 = 0.0;  // P(decide 1 | bit 0), P(decide 0 | bit 1)
  for (size_t i = 0; i < rule.region_bits.size(); ++i) {
    double lo_cdf0 = i == 0 ? 0.0 : g0.cdf(rule.boundaries[i - 1]);
    double hi_cdf0 = i == rule.boundaries.size() ? 1.0 : g0.cdf(rule.boundaries[i]);
    double lo_cdf1 = i == 0 ? 0.0 : g1.cdf(rule.boundaries[i - 1]);
    double hi_cdf1 = i == rule.boundaries.size() ? 1.0 : g1.cdf(rule.boundaries[i]);
    if (rule.region_bits[i] == 1)
      err0 += hi_cdf0 - lo_cdf0;
    else
      err1 += hi_cdf1 - lo_cdf1;
  }
  return detail::checked_ber(0.5 * (err0 + err1));
}

// Closed-form error rate of a given rule at detection interval T_r.
// Handles all three count models and ISI memory (discrete models).
inline double ber(const LinkConfig& c, CountModel model, double T_r,
                  const DecisionRule& rule) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  double p_d = hit_prob(c, Source::tx, T_r);
  double p_dI = hit_prob(c, Source::ix, T_r);
  if (model == CountModel::gaussian) {
    if (c.L > 1) throw ConfigError("ber: Gaussian model unsupported for ISI");
    // Zero transmitter hit probability (t small enough that erfc underflows,
    // or t == 0) makes the two conditional laws identical, so every rule errs
    // at the guessing rate; short-circuit before building mixture components
    // whose variances may vanish.
    if (p_d == 0.0) return 0.5;
    return ber_gaussian_rule(rule, gaussian_mixture(c.N0, c.N0, c.N1, p_d, p_dI),
                             gaussian_mixture(c.N1, c.N0, c.N1, p_d, p_dI));
  }
  detail::Trimmed pmf0, pmf1;
  if (c.L > 1) {
    pmf0 = detail::isi_conditional_mixture(c, model, T_r, c.N0);
    pmf1 = detail::isi_conditional_mixture(c, model, T_r, c.N1);
  } else {
    auto pair = detail::conditional_mixtures(c.N0, c.N1, p_d, p_dI, model);
    pmf0 = std::move(pair.first);
    pmf1 = std::move(pair.second);
  }
  return detail::checked_ber(detail::evaluate_ber_trimmed(rule, pmf0, pmf1));
}

// Closed-form error rate under the ML rule for (model, T_r).
inline double ber(const LinkConfig& c, CountModel model, double T_r) {
  DecisionRule rule = c.L > 1 ? build_rule_isi(c, model, T_r)
                              : build_rule(c, model, T_r);
  return ber(c, model, T_r, rule);
}

// Poisson-model error rate of the single-threshold rule "bit 0 iff
// y <= gamma_th", expressed through the regularized upper incomplete gamma
// function Q via P(Poisson(lambda) <= g) = Q(g + 1, lambda). gamma_th = -1
// encodes an empty bit-0 region.
inline double ber_poisson_gamma_form(const LinkConfig& c, double T_r,
                                     long long gamma_th) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (c.L > 1) throw ConfigError("ber_poisson_gamma_form: requires L == 1");
  if (gamma_th < 0) return 0.5;  // never decides bit 0
  double p_d = hit_prob(c, Source::tx, T_r);
  double p_dI = hit_prob(c, Source::ix, T_r);
  double N0 = double(c.N0), N1 = double(c.N1);
  double a = double(gamma_th) + 1.0;
  double v = 0.5 + 0.25 * (gamma_q(a, N1 * p_d + N0 * p_dI) +
                           gamma_q(a, N1 * p_d + N1 * p_dI) -
                           gamma_q(a, N0 * p_d + N0 * p_dI) -
                           gamma_q(a, N0 * p_d + N1 * p_dI));
  return detail::checked_ber(v);
}

// The unique threshold of a single-threshold discrete rule (bit 0 up to and
// including the returned value, bit 1 above); -1 for an all-one rule.
inline long long single_threshold_of(const DecisionRule& rule) {
  if (rule.model == CountModel::gaussian)
    throw ConfigError("single_threshold_of: discrete rules only");
  long long gamma_th = -1;
  for (size_t y = 0; y < rule.labels.size(); ++y) {
    if (rule.labels[y] == 0) {
      if ((long long)y != gamma_th + 1)
        throw NumericError("single_threshold_of: rule is not a single threshold");
      gamma_th = (long long)y;
    }
  }
  return gamma_th;
}

// Gamma form evaluated at the ML rule's threshold.
inline double ber_poisson_gamma_form(const LinkConfig& c, double T_r) {
  if (c.L > 1) throw ConfigError("ber_poisson_gamma_form: requires L == 1");
  DecisionRule rule = build_rule(c, CountModel::poisson, T_r);
  return ber_poisson_gamma_form(c, T_r, single_threshold_of(rule));
}

// Error rate of a fixed rule when the interferer actually sits at distance
// d_I_actual (the rule itself may have been built for other assumptions).
inline double ber_at_interferer_distance(const LinkConfig& c, CountModel model,
                                         double T_r, const DecisionRule& rule,
                                         double d_I_actual) {
  LinkConfig cc = c;
  cc.d_I = d_I_actual;
  cc.location_known = true;
  return ber(cc, model, T_r, rule);
}

// Expected error rate of a fixed rule when the interferer distance is
// uniform on [a, b]: the rule is evaluated against the expected
// conditionals, which by linearity equals the average over d_I of the
// fixed-rule BER (Binomial model).
inline double ber_unknown_location(const LinkConfig& c, CountModel model, double T_r,
                                   const DecisionRule& rule, int nodes = 64) {
  if (model != CountModel::binomial)
    throw ConfigError("ber_unknown_location: Binomial model only");
  auto [e0, e1] = expected_conditionals_unknown_location(c, T_r, nodes);
  return evaluate_ber(rule, e0, e1);
}

// Convenience: build the unknown-location ML rule, then evaluate it.
inline double ber_unknown_location(const LinkConfig& c, double T_r, int nodes = 64) {
  DecisionRule rule = build_rule_unknown_location(c, T_r, nodes);
  return ber_unknown_location(c, CountModel::binomial, T_r, rule, nodes);
}

// Analytic derivative of the error rate with respect to T_r with the ML
// rule held fixed (within a rule-stability interval this is the full
// derivative). Binomial and Poisson models, no ISI.
inline double ber_gradient(const LinkConfig& c, CountModel model, double T_r,
                           const DecisionRule& rule) {
  validate(c);
  validate(DetectionInterval{T_r}, c);
  if (c.L > 1) throw ConfigError("ber_gradient: requires L == 1");
  if (model == CountModel::gaussian)
    throw ConfigError("ber_gradient: Gaussian model unsupported");
  using namespace detail;
  double p_d = hit_prob(c, Source::tx, T_r);
  double p_dI = hit_prob(c, Source::ix, T_r);
  double dp_d = hit_prob_derivative(c, Source::tx, T_r);
  double dp_dI = hit_prob_derivative(c, Source::ix, T_r);

  Trimmed d0, d1;
  if (model == CountModel::binomial) {
    Trimmed mix_ix = averaged_release(c.N0, c.N1, p_dI, model);
    Trimmed dmix_ix = mix(binomial_dp(c.N0, p_dI), 0.5, binomial_dp(c.N1, p_dI), 0.5);
    for (long long x_T : {c.N0, c.N1}) {
      Trimmed tx = trimmed_binomial(x_T, p_d);
      Trimmed a = convolve(binomial_dp(x_T, p_d), mix_ix);  // d/dp_d part
      Trimmed b = convolve(tx, dmix_ix);                    // d/dp_dI part
      for (double& v : a.values) v *= dp_d;
      for (double& v : b.values) v *= dp_dI;
      Trimmed d = mix(a, 1.0, b, 1.0);
      (x_T == c.N0 ? d0 : d1) = d;
    }
  } else {
    // Total count is Poisson(x_T p_d + x_I p_dI); the lambda-derivative of
    // each mixture component scales by dlambda/dT_r = x_T p_d' + x_I p_dI'.
    for (long long x_T : {c.N0, c.N1}) {
      Trimmed acc{0, {0.0}};
      for (long long x_I : {c.N0, c.N1}) {
        Trimmed dl = poisson_dlambda(double(x_T) * p_d + double(x_I) * p_dI);
        double scale = 0.5 * (double(x_T) * dp_d + double(x_I) * dp_dI);
        for (double& v : dl.values) v *= scale;
        acc = mix(acc, 1.0, dl, 1.0);
      }
      (x_T == c.N0 ? d0 : d1) = acc;
    }
  }
  double g = ber_derivative_sum(rule, d0, d1);
  if (!std::isfinite(g)) throw NumericError("ber_gradient: non-finite result");
  return g;
}

inline double ber_gradient(const LinkConfig& c, CountModel model, double T_r) {
  return ber_gradient(c, model, T_r, build_rule(c, model, T_r));
}

// BER with its provenance, as produced by the named per-model evaluators.
struct BerValue {
  double value = 0.0;
  CountModel model = CountModel::binomial;
  Scenario scenario = Scenario::known;
};

inline BerValue ber_binomial(const LinkConfig& c, double T_r, const DecisionRule& rule) {
  return {ber(c, CountModel::binomial, T_r, rule), CountModel::binomial,
          c.L > 1 ? Scenario::isi : Scenario::known};
}

inline BerValue ber_poisson(const LinkConfig& c, double T_r, const DecisionRule& rule) {
  return {ber(c, CountModel::poisson, T_r, rule), CountModel::poisson,
          c.L > 1 ? Scenario::isi : Scenario::known};
}

inline BerValue ber_gaussian(const LinkConfig& c, double T_r, const DecisionRule& rule) {
  return {ber(c, CountModel::gaussian, T_r, rule), CountModel::gaussian,
          Scenario::known};
}

inline BerValue ber_isi(const LinkConfig& c, double T_r, const DecisionRule& rule) {
  return {ber(c, CountModel::binomial, T_r, rule), CountModel::binomial,
          Scenario::isi};
}

// Enumeration reference for the ISI error rate: conditionals averaged over
// all histories explicitly, then evaluated under the given rule.
inline double ber_isi_enumeration(const LinkConfig& c, CountModel model, double T_r,
                                  const DecisionRule& rule) {
  CountPmf p0 = isi_conditional_pmf_enumeration(c, model, T_r, c.N0);
  CountPmf p1 = isi_conditional_pmf_enumeration(c, model, T_r, c.N1);
  return evaluate_ber(rule, p0, p1);
}

}  // namespace mclink
