// Copyright 2026 The confcf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONFCF_MAD_H_
#define CONFCF_MAD_H_

#include <span>
#include <string>
#include <vector>

#include "confcf/dataset.h"

namespace confcf {

// Per-feature change costs for the weighted l1 distance, in schema order.
//
// Continuous features: 1 / MAD (median absolute deviation), or the
// 1 / (1.4826 * sigma) fallback when MAD is zero. Categorical features: a flat
// cost of 1.0 for any level change. A feature whose values are all equal is
// not searchable; its weight is kept at 1.0 so every weight stays finite.
struct MadWeights {
  std::vector<double> weights;
  std::vector<bool> searchable;
};

struct MadComputation {
  MadWeights mad;
  std::vector<std::string> warnings;
};

inline constexpr double kCategoricalChangeCost = 1.0;
inline constexpr double kMadConsistency = 1.4826;

double median(std::vector<double> values);
double median_absolute_deviation(std::span<const double> values);

// Requires at least two instances.
MadComputation compute_mad_weights(const Dataset& data);

// Unit weights for every feature; used by hand-built models.
MadWeights unit_mad_weights(const DatasetSchema& schema);

}  // namespace confcf

#endif  // CONFCF_MAD_H_
