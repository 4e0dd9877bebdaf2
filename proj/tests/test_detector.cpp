// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <mclink/ber.hpp>  // single_threshold_of
#include <mclink/detector.hpp>

#include "golden_values.hpp"

using namespace mclink;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("small-case ML labels, binomial", "[detector]") {
  DecisionRule rule = build_rule_discrete(1, 2, 0.5, 0.25, CountModel::binomial);
  REQUIRE(rule.labels.size() == 5);  // full table 2*N1 + 1
  for (int y = 0; y < 5; ++y) CHECK(int(rule.labels[size_t(y)]) == golden::small_labels[y]);
  // counts beyond the table decide bit 1
  CHECK(rule.detect(100LL) == 1);
  CHECK(rule.detect(4LL) == 1);
  CHECK(rule.detect(0LL) == 0);
  CHECK_THROWS_AS(rule.detect(-1LL), ConfigError);
  CHECK_THROWS_AS(rule.detect(0.5), ConfigError);  // continuous path is gaussian-only
}

TEST_CASE("small-case ML labels, no interference", "[detector]") {
  DecisionRule rule = build_rule_discrete(1, 2, 0.5, 0.0, CountModel::binomial);
  REQUIRE(rule.labels.size() == 5);
  for (int y = 0; y < 5; ++y)
    CHECK(int(rule.labels[size_t(y)]) == golden::small_labels_no_ix[y]);
}

TEST_CASE("small-case ML labels, poisson with single threshold", "[detector]") {
  DecisionRule rule = build_rule_discrete(1, 2, 0.5, 0.25, CountModel::poisson);
  REQUIRE(rule.labels.size() >= 5);
  for (int y = 0; y < 5; ++y) CHECK(int(rule.labels[size_t(y)]) == golden::small_labels[y]);
  CHECK(single_threshold_of(rule) == golden::small_pois_threshold);
}

TEST_CASE("equal conditionals resolve ties to bit 1", "[detector]") {
  // identical tx/ix statistics make every in-support likelihood a tie
  DecisionRule rule = build_rule_discrete(1, 2, 0.0, 0.0, CountModel::binomial);
  // all mass at 0 for both hypotheses: label there must be 1 (tie rule)
  CHECK(rule.detect(0LL) == 1);
}

TEST_CASE("rule equality and table stability", "[detector]") {
  LinkConfig c = defaults_1d();
  DecisionRule a = build_rule(c, CountModel::binomial, c.T_b / 2);
  DecisionRule b = build_rule(c, CountModel::binomial, c.T_b / 2);
  CHECK(a == b);
  DecisionRule d = build_rule(c, CountModel::binomial, c.T_b / 2 + 0.5);
  CHECK(a != d);
  REQUIRE(a.labels.size() == size_t(2 * c.N1 + 1));  // fixed full table
}

TEST_CASE("gaussian rule boundaries match the root oracle", "[detector]") {
  DecisionRule rule = build_rule_gaussian(20, 40, 0.3, 0.0);
  REQUIRE(rule.boundaries.size() == 1);
  CHECK_THAT(rule.boundaries[0], WithinAbs(golden::gauss_no_ix_root, 1e-5));
  REQUIRE(rule.region_bits.size() == 2);
  CHECK(rule.region_bits[0] == 0);
  CHECK(rule.region_bits[1] == 1);
  CHECK(rule.detect(5.0) == 0);
  CHECK(rule.detect(12.0) == 1);
  CHECK_THROWS_AS(rule.detect(3LL), ConfigError);  // integer path is discrete-only

  LinkConfig c = defaults_1d();
  double p_d = hit_prob(c, Source::tx, c.T_b / 2);
  double p_dI = hit_prob(c, Source::ix, c.T_b / 2);
  DecisionRule r2 = build_rule_gaussian(c.N0, c.N1, p_d, p_dI);
  REQUIRE(r2.boundaries.size() >= 1);
  bool found = false;
  for (double b : r2.boundaries)
    if (std::abs(b - golden::gauss_1d_halfTb_root) < 1e-4) found = true;
  CHECK(found);
}

TEST_CASE("gaussian rule degenerates only at zero capture", "[detector]") {
  DecisionRule rule = build_rule_gaussian(20, 40, 0.0, 0.0);
  CHECK(rule.degenerate);
  CHECK(rule.detect(123.0) == 1);
}

TEST_CASE("ISI rule on the small tap case", "[detector]") {
  // via a synthetic 2-tap conditional comparison against enumeration
  std::vector<double> taps_tx{0.5, 0.2};
  std::vector<double> taps_ix{0.25, 0.1};
  CountPmf pmf0, pmf1;
  {
    // average lag bits over {N0, N1} with the current bit conditioned
    auto averaged = [&](long long x_now) {
      CountPmf acc;
      bool first = true;
      for (long long lag_tx : {1LL, 2LL})
        for (long long ix0 : {1LL, 2LL})
          for (long long ix1 : {1LL, 2LL}) {
            CountPmf term = isi_conditional_pmf({x_now, lag_tx}, {ix0, ix1},
                                                taps_tx, taps_ix,
                                                CountModel::binomial);
            if (first) {
              acc = term;
              for (double& v : acc.values) v *= 0.125;
              first = false;
            } else {
              for (long long k = term.support_min;
                   k < term.support_min + (long long)term.values.size(); ++k) {
                long long idx = k - acc.support_min;
                REQUIRE(idx >= 0);
                if (idx >= (long long)acc.values.size())
                  acc.values.resize(size_t(idx + 1), 0.0);
                acc.values[size_t(idx)] += 0.125 * term.at(k);
              }
            }
          }
      return acc;
    };
    pmf0 = averaged(1);
    pmf1 = averaged(2);
  }
  // the library's mixture path must agree with this direct average
  detail::Trimmed t0{pmf0.support_min, pmf0.values};
  detail::Trimmed t1{pmf1.support_min, pmf1.values};
  DecisionRule rule =
      detail::rule_from_conditionals(t0, t1, CountModel::binomial, 9);
  REQUIRE(rule.labels.size() == 9);
  for (int y = 0; y < 9; ++y) CHECK(int(rule.labels[size_t(y)]) == golden::isi_labels[y]);
}

TEST_CASE("ISI rule from a config matches the enumeration pmf", "[detector]") {
  LinkConfig c = defaults_1d();
  c.L = 2;
  double T_r = c.T_b / 2;
  for (long long x : {c.N0, c.N1}) {
    detail::Trimmed mix =
        detail::isi_conditional_mixture(c, CountModel::binomial, T_r, x);
    CountPmf enu = isi_conditional_pmf_enumeration(c, CountModel::binomial, T_r, x);
    auto mix_at = [&](long long k) {
      return (k < mix.offset || k >= mix.hi()) ? 0.0
                                               : mix.values[size_t(k - mix.offset)];
    };
    for (long long k = 0; k <= 4 * c.N1; ++k)
      CHECK_THAT(mix_at(k), WithinAbs(enu.at(k), 1e-13));
  }
  DecisionRule rule = build_rule_isi(c, CountModel::binomial, T_r);
  CHECK(rule.labels.size() == size_t(2 * c.L * c.N1 + 1));
  c.L = 9;
  CHECK_THROWS_AS(build_rule_isi(c, CountModel::binomial, T_r), ConfigError);
  c.L = 2;
  CHECK_THROWS_AS(build_rule_isi(c, CountModel::gaussian, T_r), ConfigError);
}

TEST_CASE("unknown-location rule at the oracle point", "[detector]") {
  LinkConfig c = defaults_1d();
  c.location_known = false;
  c.bounds = {3e-5, 1.2e-4};
  double T_r = c.T_b / 2;
  DecisionRule rule = build_rule_unknown_location(c, T_r);
  // bit-0 region is exactly {0..35}
  for (long long y = 0; y <= golden::unknown_loc_z0_max; ++y)
    CHECK(rule.detect(y) == 0);
  CHECK(rule.detect((long long)golden::unknown_loc_z0_max + 1) == 1);

  auto [pmf0, pmf1] = expected_conditionals_unknown_location(c, T_r);
  CHECK_THAT(pmf0.at(30), WithinRel(golden::unknown_loc_pmf0_30, 1e-10));
  CHECK_THAT(pmf1.at(30), WithinRel(golden::unknown_loc_pmf1_30, 1e-10));

  LinkConfig known = defaults_1d();
  CHECK_THROWS_AS(build_rule_unknown_location(known, T_r), ConfigError);
}

TEST_CASE("build_rule dispatch", "[detector]") {
  LinkConfig c = defaults_3d();
  DecisionRule binom = build_rule(c, CountModel::binomial, 0.2 * c.T_b);
  DecisionRule pois = build_rule(c, CountModel::poisson, 0.2 * c.T_b);
  DecisionRule gauss = build_rule(c, CountModel::gaussian, 0.2 * c.T_b);
  CHECK(binom.model == CountModel::binomial);
  CHECK(pois.model == CountModel::poisson);
  CHECK(gauss.model == CountModel::gaussian);
  CHECK(single_threshold_of(pois) == golden::ber3_pois_threshold);
  REQUIRE(gauss.boundaries.size() >= 1);
  bool found = false;
  for (double b : gauss.boundaries)
    if (std::abs(b - golden::ber3_gauss_0p2Tb_root) < 1e-3) found = true;
  CHECK(found);
}
