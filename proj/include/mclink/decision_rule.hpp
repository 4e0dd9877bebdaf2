// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mclink/config.hpp"
#include "mclink/errors.hpp"

namespace mclink {

// Maximum-likelihood decision rule mapping an observed count (discrete
// models) or real-valued observation (Gaussian model) to a bit decision.
//
// Discrete models: labels[y] is the decided bit for y in [0, labels.size());
// observations beyond the table decide bit 1 (only attainable above the
// union of the conditional supports, where the larger release dominates).
//
// Gaussian model: boundaries are the sorted decision-region edges; region i
// covers (boundaries[i-1], boundaries[i]] and decides region_bits[i].
// degenerate marks the zero-signal case where both conditional densities
// coincide and every observation decides bit 1.
struct DecisionRule {
  CountModel model = CountModel::binomial;
  std::vector<std::uint8_t> labels;
  std::vector<double> boundaries;
  std::vector<std::uint8_t> region_bits;
  bool degenerate = false;

  int detect(long long y) const {
    if (model == CountModel::gaussian)
      throw ConfigError("DecisionRule.detect: Gaussian rule takes a real observation");
    if (y < 0) throw ConfigError("DecisionRule.detect: count must be >= 0");
    if (y >= (long long)labels.size()) return 1;
    return labels[size_t(y)];
  }

  int detect(double y) const {
    if (model != CountModel::gaussian)
      throw ConfigError("DecisionRule.detect: discrete rule takes an integer count");
    if (degenerate) return 1;
    size_t i = size_t(std::lower_bound(boundaries.begin(), boundaries.end(), y) -
                      boundaries.begin());
    return region_bits[i];
  }

  friend bool operator==(const DecisionRule& a, const DecisionRule& b) {
    return a.model == b.model && a.labels == b.labels &&
           a.boundaries == b.boundaries && a.region_bits == b.region_bits &&
           a.degenerate == b.degenerate;
  }
  friend bool operator!=(const DecisionRule& a, const DecisionRule& b) {
    return !(a == b);
  }
};

}  // namespace mclink
