// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mclink/ber.hpp"
#include "mclink/config.hpp"
#include "mclink/decision_rule.hpp"
#include "mclink/detector.hpp"
#include "mclink/errors.hpp"

namespace mclink {

// Tuning knobs for both optimizers; every quantity expressed as a fraction
// is relative to T_b so defaults transfer across configurations.
struct OptimizerParams {
  // Shared.
  double t0_frac = 1e-6;     // left end of the search domain
  double width_frac = 1e-9;  // stability boundary resolution and PGD stop
  // Projected gradient (alg1).
  double alpha = 0.5;    // initial-step scale relative to interval width
  double beta = 0.5;     // Armijo backtracking factor
  double c_armijo = 1e-4;
  int max_pgd_iterations = 200;
  int armijo_cap = 60;
  // Implicit filtering (alg2).
  double eps0_frac = 0.05;  // initial stencil half-width
  double shrink = 0.5;      // stencil reduction factor
  double tau_frac = 1e-6;   // terminal stencil half-width
  int a_max = 40;           // line-search cap per stencil
  int prescan = 32;         // coarse start-point scan
  int max_outer = 10000;
};

// Maximal interval [t_lo, t_hi] on which the ML rule is constant, with the
// optimum found inside it (filled by alg1).
struct StabilityInterval {
  double t_lo = 0.0;
  double t_hi = 0.0;
  DecisionRule rule;
  double t_opt = std::numeric_limits<double>::quiet_NaN();
  double ber_opt = std::numeric_limits<double>::quiet_NaN();
};

struct OptimizationReport {
  std::string algorithm;  // "alg1" | "alg2" | "grid"
  CountModel model = CountModel::binomial;
  double t_star = 0.0;
  double ber_star = 0.0;
  // Literal earliest-time reading: the smallest interval optimum time.
  double t_star_earliest = 0.0;
  double ber_star_earliest = 0.0;
  long long iterations = 0;
  long long function_evals = 0;  // BER evaluations plus rule-stability probes
  long long gradient_evals = 0;
  bool converged = true;
  bool degenerate = false;  // flat objective at the guessing rate
  int grid_points = 0;
  std::vector<StabilityInterval> intervals;
};

// Largest t_hi in [t_start, T_b] such that the ML rule matches the rule at
// t_start, located by bisection to width_frac * T_b.
inline StabilityInterval find_stability_interval(const LinkConfig& c, CountModel model,
                                                 double t_start,
                                                 const OptimizerParams& params = {},
                                                 long long* probes = nullptr) {
  validate(c);
  validate(DetectionInterval{t_start}, c);
  if (model == CountModel::gaussian)
    throw ConfigError("find_stability_interval: requires a discrete count model");
  auto rule_at = [&](double t) {
    if (probes) ++*probes;
    return c.L > 1 ? build_rule_isi(c, model, t) : build_rule(c, model, t);
  };
  StabilityInterval iv;
  iv.t_lo = t_start;
  iv.rule = rule_at(t_start);
  double w = params.width_frac * c.T_b;
  if (rule_at(c.T_b) == iv.rule) {
    iv.t_hi = c.T_b;
    return iv;
  }
  double lo = t_start, hi = c.T_b;  // rule(lo) == iv.rule, rule(hi) != iv.rule
  while (hi - lo > w) {
    double mid = 0.5 * (lo + hi);
    if (rule_at(mid) == iv.rule)
      lo = mid;
    else
      hi = mid;
  }
  iv.t_hi = lo;
  return iv;
}

namespace detail {

// Projected gradient descent with Armijo backtracking on one stability
// interval; the rule is fixed, so the objective is smooth there.
inline void optimize_interval(const LinkConfig& c, CountModel model,
                              StabilityInterval& iv, const OptimizerParams& params,
                              OptimizationReport& rep) {
  auto f = [&](double t) {
    ++rep.function_evals;
    return ber(c, model, t, iv.rule);
  };
  auto grad = [&](double t) {
    ++rep.gradient_evals;
    return ber_gradient(c, model, t, iv.rule);
  };
  double eps = params.width_frac * c.T_b;
  double width = iv.t_hi - iv.t_lo;
  double x = iv.t_lo;
  double fx = f(x);
  double best_t = x, best_f = fx;
  auto consider = [&](double t, double v) {
    if (v < best_f) {
      best_f = v;
      best_t = t;
    }
  };

  if (width > eps) {
    // A non-finite gradient aborts the interval descent; the endpoints still
    // enter the final comparison below.
    try {
      for (int it = 0; it < params.max_pgd_iterations; ++it) {
        ++rep.iterations;
        double g = grad(x);
        // Renormalizing by the current gradient keeps the raw trial move at
        // alpha * width regardless of how |g| varies across the interval;
        // Armijo backtracking then shrinks the accepted move geometrically,
        // so the eps stopping test is reached in O(log(width/eps)) steps.
        double step = params.alpha * width / std::max(std::abs(g), 1e-300);
        double d = std::clamp(x - step * g, iv.t_lo, iv.t_hi) - x;
        if (std::abs(d) < eps) break;
        bool accepted = false;
        double t_new = x, f_new = fx;
        for (int m = 0; m < params.armijo_cap; ++m) {
          double scale = std::pow(params.beta, m);
          t_new = x + scale * d;
          f_new = f(t_new);
          if (fx - f_new >= -params.c_armijo * scale * g * d) {
            accepted = true;
            break;
          }
        }
        if (!accepted) break;
        consider(t_new, f_new);
        bool done = std::abs(t_new - x) < eps;
        x = t_new;
        fx = f_new;
        if (done) break;
        if (it + 1 == params.max_pgd_iterations) rep.converged = false;
      }
    } catch (const NumericError&) {
      rep.converged = false;
    }
  }
  // The left endpoint entered as the PGD start; the right endpoint is an
  // explicit candidate too, and wins exact value ties, which makes boundary
  // optima (including t = T_b) exact rather than asymptotic even when the
  // descent has already crept within an ulp of the edge.
  double f_hi = f(iv.t_hi);
  if (f_hi <= best_f) {
    best_f = f_hi;
    best_t = iv.t_hi;
  }
  iv.t_opt = best_t;
  iv.ber_opt = best_f;
}

}  // namespace detail

// Algorithm 1: decompose [t0, T_b] into rule-stability intervals, run
// projected gradient descent on each, return the best interval optimum.
inline OptimizationReport optimize_alg1(const LinkConfig& c, CountModel model,
                                        const OptimizerParams& params = {}) {
  validate(c);
  if (model == CountModel::gaussian)
    throw ConfigError("optimize_alg1: requires a discrete count model");
  OptimizationReport rep;
  rep.algorithm = "alg1";
  rep.model = model;
  double w = params.width_frac * c.T_b;
  double t = params.t0_frac * c.T_b;
  while (t < c.T_b) {
    StabilityInterval iv =
        find_stability_interval(c, model, t, params, &rep.function_evals);
    detail::optimize_interval(c, model, iv, params, rep);
    rep.intervals.push_back(std::move(iv));
    if (rep.intervals.back().t_hi >= c.T_b) break;
    t = rep.intervals.back().t_hi + w;
  }
  if (rep.intervals.empty()) throw NumericError("optimize_alg1: empty search domain");

  const StabilityInterval* best = &rep.intervals.front();
  const StabilityInterval* earliest = &rep.intervals.front();
  for (const auto& iv : rep.intervals) {
    if (iv.ber_opt < best->ber_opt) best = &iv;
    if (iv.t_opt < earliest->t_opt) earliest = &iv;
  }
  rep.t_star = best->t_opt;
  rep.ber_star = best->ber_opt;
  rep.t_star_earliest = earliest->t_opt;
  rep.ber_star_earliest = earliest->ber_opt;
  rep.degenerate = rep.ber_star >= 0.5 - 1e-12;
  return rep;
}

// Algorithm 2 core: implicit filtering of a scalar objective on [lo, hi].
// Central differences on a shrinking stencil drive descent steps; the best
// visited point is returned. Counters accumulate into rep if given.
template <typename F>
std::pair<double, double> implicit_filtering(F&& f, double lo, double hi,
                                             const OptimizerParams& params,
                                             OptimizationReport* rep = nullptr) {
  if (!(hi > lo)) throw ConfigError("implicit_filtering: requires lo < hi");
  auto count_f = [&](double x) {
    if (rep) ++rep->function_evals;
    return f(x);
  };
  double span = hi - lo;
  double best_x = lo, best_f = std::numeric_limits<double>::infinity();
  auto consider = [&](double x, double v) {
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  };

  // Coarse prescan picks the starting point.
  double x = lo;
  {
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < params.prescan; ++i) {
      double xi = lo + span * (double(i) + 0.5) / double(params.prescan);
      double fi = count_f(xi);
      consider(xi, fi);
      if (fi < fbest) {
        fbest = fi;
        x = xi;
      }
    }
  }
  double fx = count_f(x);
  consider(x, fx);

  double eps = params.eps0_frac * span;
  double tau = params.tau_frac * span;
  int outer = 0;
  while (eps > tau && outer < params.max_outer) {
    ++outer;
    if (rep) ++rep->iterations;
    double xp = std::min(x + eps, hi), xm = std::max(x - eps, lo);
    double fp = count_f(xp), fm = count_f(xm);
    consider(xp, fp);
    consider(xm, fm);
    if (rep) ++rep->gradient_evals;
    double g = (fp - fm) / (xp - xm);
    if (std::abs(g) <= eps) {
      eps *= params.shrink;
      continue;
    }
    bool accepted = false;
    for (int m = 1; m <= params.a_max; ++m) {
      double stepped = x - std::pow(params.beta, m) * g;
      double d = std::clamp(stepped, lo, hi);
      double fd = count_f(d);
      consider(d, fd);
      if (fd <= fx - params.c_armijo * std::pow(params.beta, m) * g * g) {
        x = d;
        fx = fd;
        accepted = true;
        break;
      }
    }
    if (!accepted) eps *= params.shrink;  // stencil failure: refine
  }
  if (rep && outer >= params.max_outer) rep->converged = false;
  return {best_x, best_f};
}

// Algorithm 2 applied to the closed-form BER in normalized time
// x = T_r / T_b, projected onto the full value range [0, 1].
inline OptimizationReport optimize_alg2(const LinkConfig& c, CountModel model,
                                        const OptimizerParams& params = {}) {
  validate(c);
  OptimizationReport rep;
  rep.algorithm = "alg2";
  rep.model = model;
  auto objective = [&](double xn) { return ber(c, model, xn * c.T_b); };
  auto [xn_star, f_star] = implicit_filtering(objective, 0.0, 1.0, params, &rep);
  rep.t_star = xn_star * c.T_b;
  rep.ber_star = f_star;
  rep.t_star_earliest = rep.t_star;
  rep.ber_star_earliest = rep.ber_star;
  rep.degenerate = rep.ber_star >= 0.5 - 1e-12;
  return rep;
}

// Exhaustive reference: evaluate the ML BER on the uniform grid
// t_k = k * T_b / n, k = 1..n over (0, T_b], and return the argmin.
inline OptimizationReport grid_oracle(const LinkConfig& c, CountModel model, int n) {
  validate(c);
  if (n < 2) throw ConfigError("grid_oracle: n_points must be >= 2");
  OptimizationReport rep;
  rep.algorithm = "grid";
  rep.model = model;
  rep.grid_points = n;
  double best_t = 0.0, best_f = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    double t = c.T_b * double(k) / double(n);
    double v = ber(c, model, t);
    ++rep.function_evals;
    if (v < best_f) {
      best_f = v;
      best_t = t;
    }
  }
  rep.iterations = n;
  rep.t_star = best_t;
  rep.ber_star = best_f;
  rep.t_star_earliest = best_t;
  rep.ber_star_earliest = best_f;
  rep.degenerate = rep.ber_star >= 0.5 - 1e-12;
  return rep;
}

}  // namespace mclink
