// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>

#include "mclink/errors.hpp"

namespace mclink {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Complementary error function. The libm kernel is a vetted rational
// approximation good to a few ulp; results below the subnormal range
// (argument beyond ~27.2) flush to exact 0, which downstream code relies on.
inline double erfc_stable(double x) { return std::erfc(x); }

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// log C(n, k) for 0 <= k <= n.
inline double log_binom_coeff(long long n, long long k) {
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

// log Binomial(n, p) pmf at k; k outside [0, n] gives -inf (pmf 0).
inline double binomial_log_pmf(long long n, double p, long long k) {
  if (k < 0 || k > n) return kNegInf;
  if (p <= 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p >= 1.0) return k == n ? 0.0 : kNegInf;
  return log_binom_coeff(n, k) + double(k) * std::log(p) +
         double(n - k) * std::log1p(-p);
}

inline double binomial_pmf_value(long long n, double p, long long k) {
  double lp = binomial_log_pmf(n, p, k);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

// log Poisson(lambda) pmf at k.
inline double poisson_log_pmf(double lambda, long long k) {
  if (k < 0) return kNegInf;
  if (lambda <= 0.0) return k == 0 ? 0.0 : kNegInf;
  return double(k) * std::log(lambda) - lambda - std::lgamma(double(k) + 1.0);
}

inline double poisson_pmf_value(double lambda, long long k) {
  double lp = poisson_log_pmf(lambda, k);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

namespace detail {

// Lower regularized incomplete gamma P(a,x) by power series.
inline double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by Lentz continued fraction.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-17) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
// For integer a, Q(k+1, lambda) equals P(Poisson(lambda) <= k).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ConfigError("gamma_q: require a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// Kahan-compensated accumulator for long sums whose terms span many
// orders of magnitude.
class KahanSum {
 public:
  void add(double v) {
    double y = v - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace mclink
