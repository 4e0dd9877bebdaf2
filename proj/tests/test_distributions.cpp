// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <mclink/distributions.hpp>

#include "golden_values.hpp"

using namespace mclink;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("trimmed binomial carries essentially all mass", "[distributions]") {
  for (auto [n, p] : std::vector<std::pair<long long, double>>{
           {1, 0.5}, {40, 0.3}, {40, 0.9}, {2000, 0.06}, {4000, 0.0001}}) {
    detail::Trimmed t = detail::trimmed_binomial(n, p);
    double mass = 0.0;
    for (double v : t.values) mass += v;
    // The trim itself discards < 1e-12 of mass, but the recurrence is
    // anchored at the mode value, whose lgamma-based rounding (~1e-11 for
    // n in the thousands) scales the whole window uniformly.
    CHECK_THAT(mass, WithinAbs(1.0, 1e-10));
    // values match the closed-form pmf pointwise
    for (long long k = t.offset; k < t.hi(); k += std::max<long long>(1, n / 7))
      CHECK_THAT(t.values[size_t(k - t.offset)],
                 WithinRel(binomial_pmf_value(n, p, k), 1e-11));
    // support is a small window for large n
    if (n >= 2000) CHECK((long long)t.values.size() < n / 2);
  }
  detail::Trimmed degenerate = detail::trimmed_binomial(20, 0.0);
  REQUIRE(degenerate.values.size() == 1);
  CHECK(degenerate.offset == 0);
  CHECK(degenerate.values[0] == 1.0);
}

TEST_CASE("trimmed poisson carries essentially all mass", "[distributions]") {
  for (double lambda : {1e-12, 0.3, 5.0, 120.3, 2400.0}) {
    detail::Trimmed t = detail::trimmed_poisson(lambda);
    double mass = 0.0;
    for (double v : t.values) mass += v;
    // Same mode-anchored rounding as the binomial window above.
    CHECK_THAT(mass, WithinAbs(1.0, 1e-10));
    for (long long k = t.offset; k < t.hi();
         k += std::max<long long>(1, (long long)(lambda / 7) )) {
      double expected = poisson_pmf_value(lambda, k);
      // At the far tail the closed form underflows toward denormals where a
      // relative comparison is meaningless; the window holds ~1e-16 there.
      if (expected < 1e-290) continue;
      CHECK_THAT(t.values[size_t(k - t.offset)], WithinRel(expected, 1e-11));
    }
  }
}

TEST_CASE("convolution is exact against direct summation", "[distributions]") {
  detail::Trimmed a = detail::trimmed_binomial(3, 0.4);
  detail::Trimmed b = detail::trimmed_binomial(2, 0.7);
  detail::Trimmed c = detail::convolve(a, b);
  for (long long y = 0; y <= 5; ++y) {
    double direct = 0.0;
    for (long long k = 0; k <= y; ++k)
      direct += binomial_pmf_value(3, 0.4, k) * binomial_pmf_value(2, 0.7, y - k);
    long long idx = y - c.offset;
    double got = (idx >= 0 && idx < (long long)c.values.size())
                     ? c.values[size_t(idx)]
                     : 0.0;
    CHECK_THAT(got, WithinAbs(direct, 1e-15));
  }
}

TEST_CASE("conditional total pmf: binomial sum of two releases", "[distributions]") {
  CountPmf pmf = conditional_total_pmf(2, 1, 0.5, 0.25, CountModel::binomial);
  // X ~ Bin(2, 0.5) + Bin(1, 0.25); hand-computed distribution over 0..3
  CHECK_THAT(pmf.at(0), WithinAbs(0.25 * 0.75, 1e-15));
  CHECK_THAT(pmf.at(1), WithinAbs(0.5 * 0.75 + 0.25 * 0.25, 1e-15));
  CHECK_THAT(pmf.at(2), WithinAbs(0.25 * 0.75 + 0.5 * 0.25, 1e-15));
  CHECK_THAT(pmf.at(3), WithinAbs(0.25 * 0.25, 1e-15));
  CHECK_THAT(pmf.mass(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(pmf.mean(), WithinRel(2 * 0.5 + 1 * 0.25, 1e-13));
}

TEST_CASE("conditional total pmf: poisson collapses to one rate", "[distributions]") {
  CountPmf pmf = conditional_total_pmf(40, 20, 0.1, 0.05, CountModel::poisson);
  double lambda = 40 * 0.1 + 20 * 0.05;
  for (long long k = 0; k <= 15; ++k)
    CHECK_THAT(pmf.at(k), WithinRel(poisson_pmf_value(lambda, k), 1e-11));
  CHECK_THROWS_AS(conditional_total_pmf(2, 1, 0.5, 0.25, CountModel::gaussian),
                  ConfigError);
}

TEST_CASE("interference mixture weights", "[distributions]") {
  LinkConfig c = defaults_1d();
  double T_r = c.T_b / 2;
  CountPmf m = mixture_over_interference(c.N1, c, CountModel::binomial, T_r);
  double p_d = hit_prob(c, Source::tx, T_r);
  double p_dI = hit_prob(c, Source::ix, T_r);
  CountPmf a = conditional_total_pmf(c.N1, c.N0, p_d, p_dI, CountModel::binomial);
  CountPmf b = conditional_total_pmf(c.N1, c.N1, p_d, p_dI, CountModel::binomial);
  for (long long k = 0; k <= 80; k += 5)
    CHECK_THAT(m.at(k), WithinAbs(0.5 * a.at(k) + 0.5 * b.at(k), 1e-14));
}

TEST_CASE("gaussian moment matching", "[distributions]") {
  GaussianMixture::Component comp = gaussian_component(40, 20, 0.1, 0.05);
  CHECK_THAT(comp.mean, WithinRel(40 * 0.1 + 20 * 0.05, 1e-14));
  CHECK_THAT(comp.variance, WithinRel(40 * 0.1 * 0.9 + 20 * 0.05 * 0.95, 1e-14));
  CHECK_THROWS_AS(gaussian_component(1, 0, 0.0, 0.0), NumericError);

  GaussianMixture g = gaussian_mixture(40, 20, 40, 0.1, 0.05);
  REQUIRE(g.components.size() == 2);
  CHECK_THAT(g.components[0].weight + g.components[1].weight,
             WithinAbs(1.0, 1e-15));
  // cdf is a proper distribution function
  CHECK(g.cdf(-1e3) < 1e-12);
  CHECK_THAT(g.cdf(1e3), WithinAbs(1.0, 1e-12));
  CHECK(g.pdf(4.0) > 0.0);
  // numeric integral of the pdf against the cdf over a wide window
  double lo = -50, hi = 100, sum = 0.0;
  int n = 20000;
  for (int i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * (i + 0.5) / n;
    sum += g.pdf(x) * (hi - lo) / n;
  }
  CHECK_THAT(sum, WithinAbs(g.cdf(hi) - g.cdf(lo), 1e-6));
}

TEST_CASE("ISI conditional pmf factorizes over lags", "[distributions]") {
  std::vector<double> taps_tx{0.5, 0.2};
  std::vector<double> taps_ix{0.25, 0.1};
  std::vector<long long> h_tx{2, 1};  // current bit then lag-1 bit
  std::vector<long long> h_ix{1, 2};
  CountPmf pmf =
      isi_conditional_pmf(h_tx, h_ix, taps_tx, taps_ix, CountModel::binomial);
  // direct: sum of four independent binomials
  auto direct = [&](long long y) {
    double s = 0.0;
    for (long long a = 0; a <= 2; ++a)
      for (long long b = 0; b <= 1; ++b)
        for (long long c2 = 0; c2 <= 1; ++c2) {
          long long d2 = y - a - b - c2;
          if (d2 < 0 || d2 > 2) continue;
          s += binomial_pmf_value(2, 0.5, a) * binomial_pmf_value(1, 0.2, b) *
               binomial_pmf_value(1, 0.25, c2) * binomial_pmf_value(2, 0.1, d2);
        }
    return s;
  };
  for (long long y = 0; y <= 6; ++y) CHECK_THAT(pmf.at(y), WithinAbs(direct(y), 1e-14));
  CHECK_THAT(pmf.mass(), WithinAbs(1.0, 1e-13));
}

TEST_CASE("isi_taps come from the capture-time increments", "[distributions]") {
  LinkConfig c = defaults_1d();
  c.L = 3;
  std::vector<double> taps = isi_taps(c, Source::tx, c.T_b / 2);
  REQUIRE(taps.size() == 3);
  CHECK_THAT(taps[1], WithinRel(golden::tap1d_l1_TrHalf, 1e-12));
  CHECK_THAT(taps[2], WithinRel(golden::tap1d_l2_TrHalf, 1e-12));
  CHECK(taps[0] > taps[1]);
  CHECK(taps[1] > taps[2]);
}
