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

#include "confcf/importance.h"

#include <algorithm>

#include "confcf/rng.h"

namespace confcf {

std::vector<FeatureImportance> permutation_importance(
    const Dataset& data, const LogisticModel& model, std::uint64_t seed) {
  if (data.size() == 0) throw Error("data", "importance needs data");
  const auto& schema = model.schema();
  const double baseline = accuracy(model, data);

  std::vector<std::vector<double>> rows;
  rows.reserve(data.size());
  for (const auto& x : data.instances) rows.emplace_back(x.slots().begin(), x.slots().end());

  Rng rng(seed);
  std::vector<FeatureImportance> out;
  std::vector<std::size_t> perm(data.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    double drop = 0.0;
    for (int s = 0; s < kImportanceShuffles; ++s) {
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      rng.shuffle(perm);
      std::size_t correct = 0;
      std::vector<double> slots;
      for (std::size_t i = 0; i < data.size(); ++i) {
        slots = rows[i];
        slots[j] = rows[perm[i]][j];
        const int predicted =
            model.class_of(model.predict_proba(slots)) == Label::kPositive;
        if (predicted == data.labels[i]) ++correct;
      }
      drop += baseline - static_cast<double>(correct) /
                             static_cast<double>(data.size());
    }
    out.push_back({schema.features[j].name, drop / kImportanceShuffles});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.accuracy_drop > b.accuracy_drop;
                   });
  return out;
}

std::vector<std::string> rank_features(const Dataset& data,
                                       const LogisticModel& model,
                                       std::size_t k, std::uint64_t seed) {
  if (k > model.schema().size()) {
    throw Error("query", "k exceeds the number of features", "k");
  }
  auto ranked = permutation_importance(data, model, seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].feature);
  return out;
}

}  // namespace confcf
