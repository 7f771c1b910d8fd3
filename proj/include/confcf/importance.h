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

#ifndef CONFCF_IMPORTANCE_H_
#define CONFCF_IMPORTANCE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "confcf/dataset.h"
#include "confcf/model.h"

namespace confcf {

struct FeatureImportance {
  std::string feature;
  double accuracy_drop = 0.0;
};

inline constexpr std::uint64_t kDefaultImportanceSeed = 20230101;
inline constexpr int kImportanceShuffles = 10;

// Permutation importance: mean accuracy drop over 10 shuffles of each
// feature column. Sorted by drop, descending; ties keep schema order.
std::vector<FeatureImportance> permutation_importance(
    const Dataset& data, const LogisticModel& model,
    std::uint64_t seed = kDefaultImportanceSeed);

// Names of the top-k features by permutation importance.
std::vector<std::string> rank_features(const Dataset& data,
                                       const LogisticModel& model,
                                       std::size_t k,
                                       std::uint64_t seed = kDefaultImportanceSeed);

}  // namespace confcf

#endif  // CONFCF_IMPORTANCE_H_
