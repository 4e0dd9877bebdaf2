// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <mclink/detector.hpp>
#include <mclink/optimizer.hpp>
#include <mclink/serialize.hpp>

using namespace mclink;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("LinkConfig survives a JSON round trip", "[serialize]") {
  LinkConfig c = defaults_3d();
  c.L = 3;
  json j = c;
  LinkConfig back = j.get<LinkConfig>();
  CHECK(back.D == c.D);
  CHECK(back.d == c.d);
  CHECK(back.d_I == c.d_I);
  CHECK(back.r == c.r);
  CHECK(back.T_b == c.T_b);
  CHECK(back.N0 == c.N0);
  CHECK(back.N1 == c.N1);
  CHECK(back.dimension == c.dimension);
  CHECK(back.L == 3);
  CHECK(back.location_known);

  LinkConfig u = defaults_1d();
  u.location_known = false;
  u.bounds = LocationBounds{3e-5, 1.2e-4};
  json ju = u;
  REQUIRE(ju.contains("bounds"));
  LinkConfig ub = ju.get<LinkConfig>();
  CHECK_FALSE(ub.location_known);
  CHECK(ub.bounds.a == 3e-5);
  CHECK(ub.bounds.b == 1.2e-4);
  // a known-location config does not carry bounds
  CHECK_FALSE(json(defaults_1d()).contains("bounds"));
}

TEST_CASE("LinkConfig parsing is field-precise", "[serialize]") {
  json j = defaults_1d();
  j.erase("D");
  CHECK_THROWS_WITH(j.get<LinkConfig>(), ContainsSubstring("LinkConfig.D"));
  json j2 = defaults_1d();
  j2["N0"] = "twenty";
  CHECK_THROWS_WITH(j2.get<LinkConfig>(), ContainsSubstring("LinkConfig.N0"));
  json j3 = defaults_1d();
  j3["dimension"] = "2d";
  CHECK_THROWS_WITH(j3.get<LinkConfig>(), ContainsSubstring("1d"));
  json j4 = defaults_1d();
  j4["location_known"] = false;  // without bounds
  CHECK_THROWS_WITH(j4.get<LinkConfig>(), ContainsSubstring("LinkConfig.bounds"));
}

TEST_CASE("DecisionRule round trip preserves the run-length labels", "[serialize]") {
  DecisionRule rule = build_rule_discrete(2, 4, 0.5, 0.25, CountModel::binomial);
  json j = rule;
  // the label table is stored run-length encoded
  REQUIRE(j.contains("labels_rle"));
  for (const auto& run : j["labels_rle"]) REQUIRE(run.size() == 2);
  DecisionRule back = j.get<DecisionRule>();
  CHECK(back == rule);
  for (long long y = 0; y <= 8; ++y) CHECK(back.detect(y) == rule.detect(y));

  // hand-checked encoding: labels 0 0 1 1 1 -> runs (0,2) (1,3)
  json enc = json(build_rule_discrete(2, 4, 0.5, 0.25, CountModel::binomial));
  std::vector<std::uint8_t> labels{0, 0, 1, 1, 1};
  json manual = enc;
  manual["labels_rle"] = json::array({json::array({0, 2}), json::array({1, 3})});
  DecisionRule five = manual.get<DecisionRule>();
  for (size_t y = 0; y < labels.size(); ++y)
    CHECK(five.detect((long long)y) == labels[y]);

  json bad = enc;
  bad["labels_rle"] = json::array({json::array({0, 2, 7})});
  CHECK_THROWS_WITH(bad.get<DecisionRule>(), ContainsSubstring("labels_rle"));
  json bad2 = enc;
  bad2.erase("labels_rle");
  CHECK_THROWS_WITH(bad2.get<DecisionRule>(), ContainsSubstring("labels_rle"));
}

TEST_CASE("gaussian rules round trip their boundaries", "[serialize]") {
  DecisionRule rule = build_rule_gaussian(20, 40, 0.3, 0.1);
  json j = rule;
  DecisionRule back = j.get<DecisionRule>();
  CHECK(back == rule);
  CHECK(back.boundaries == rule.boundaries);
  CHECK(back.region_bits == rule.region_bits);
  CHECK(back.detect(5.0) == rule.detect(5.0));
  CHECK(back.detect(30.0) == rule.detect(30.0));
}

TEST_CASE("OptimizationReport round trip including intervals", "[serialize]") {
  LinkConfig c = defaults_1d();
  OptimizationReport rep = optimize_alg1(c, CountModel::binomial);
  json j = rep;
  OptimizationReport back = j.get<OptimizationReport>();
  CHECK(back.algorithm == rep.algorithm);
  CHECK(back.model == rep.model);
  CHECK(back.t_star == rep.t_star);
  CHECK(back.ber_star == rep.ber_star);
  CHECK(back.t_star_earliest == rep.t_star_earliest);
  CHECK(back.ber_star_earliest == rep.ber_star_earliest);
  CHECK(back.iterations == rep.iterations);
  CHECK(back.function_evals == rep.function_evals);
  CHECK(back.gradient_evals == rep.gradient_evals);
  CHECK(back.converged == rep.converged);
  CHECK(back.degenerate == rep.degenerate);
  REQUIRE(back.intervals.size() == rep.intervals.size());
  for (size_t i = 0; i < rep.intervals.size(); ++i) {
    CHECK(back.intervals[i].t_lo == rep.intervals[i].t_lo);
    CHECK(back.intervals[i].t_hi == rep.intervals[i].t_hi);
    CHECK(back.intervals[i].rule == rep.intervals[i].rule);
    CHECK(back.intervals[i].t_opt == rep.intervals[i].t_opt);
    CHECK(back.intervals[i].ber_opt == rep.intervals[i].ber_opt);
  }
  // serialized form re-serializes identically
  CHECK(json(back).dump() == j.dump());
}

TEST_CASE("SimEstimate round trip", "[serialize]") {
  SimEstimate e;
  e.estimate = 0.0123;
  e.std_error = 0.0011;
  e.trials = 10000;
  e.errors = 123;
  e.seed = 987654321;
  json j = e;
  SimEstimate back = j.get<SimEstimate>();
  CHECK(back.estimate == e.estimate);
  CHECK(back.std_error == e.std_error);
  CHECK(back.trials == e.trials);
  CHECK(back.errors == e.errors);
  CHECK(back.seed == e.seed);
}

TEST_CASE("tables round trip and reject ragged rows", "[serialize]") {
  Table t;
  t.columns = {"x", "y"};
  t.rows = {{1.0, 2.0}, {3.0, 4.5}};
  json j = t;
  CHECK(j.get<Table>() == t);
  json bad = j;
  bad["rows"][1] = json::array({1.0});
  CHECK_THROWS_WITH(bad.get<Table>(), ContainsSubstring("Table.rows"));
}

TEST_CASE("csv cells carry ten significant digits", "[serialize]") {
  CHECK(csv_cell(0.12345678949) == "0.1234567895");
  CHECK(csv_cell(2.0) == "2");
  CHECK(csv_cell(-1.5e-9) == "-1.5e-09");
  CHECK(csv_cell(0.0) == "0");

  Table t;
  t.columns = {"a", "b_c", "d"};
  t.rows = {{0.5, 1234567891.0, 3e-07}, {2.0, -1.0, 0.1234567895}};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() ==
        "a,b_c,d\n"
        "0.5,1234567891,3e-07\n"
        "2,-1,0.1234567895\n");
}

TEST_CASE("enum spellings parse both ways", "[serialize]") {
  CHECK(dimension_from_string("1d") == Dimension::d1);
  CHECK(dimension_from_string("3d") == Dimension::d3);
  CHECK(count_model_from_string("binomial") == CountModel::binomial);
  CHECK(count_model_from_string("poisson") == CountModel::poisson);
  CHECK(count_model_from_string("gaussian") == CountModel::gaussian);
  CHECK(scenario_from_string("known") == Scenario::known);
  CHECK(scenario_from_string("unknown-location") == Scenario::unknown_location);
  CHECK(scenario_from_string("isi") == Scenario::isi);
  CHECK_THROWS_AS(dimension_from_string("2d"), ConfigError);
  CHECK_THROWS_AS(count_model_from_string("normal"), ConfigError);
  CHECK_THROWS_AS(scenario_from_string("mystery"), ConfigError);
}
