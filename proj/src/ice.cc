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

#include "confcf/ice.h"

#include <algorithm>

namespace confcf {

IceProfile ice_profile(const LogisticModel& model, const Instance& x,
                       std::string_view feature, ConfidenceMeasure measure) {
  model.check_instance(x);
  const auto& schema = model.schema();
  const std::size_t j = schema.require_index(feature);
  const auto& f = schema.features[j];

  IceProfile profile;
  profile.feature = f.name;
  profile.kind = f.kind;
  profile.measure = measure;
  profile.predicted_class = model.predict_class(x);
  profile.predicted_label = model.label_text(profile.predicted_class);

  std::vector<double> slots = f.grid();
  const double factual = x.slot(j);
  if (f.is_categorical()) {
    profile.factual_index = static_cast<std::size_t>(factual);
  } else if (auto g = f.grid_index(factual)) {
    profile.factual_index = *g;
  } else {
    auto pos = std::lower_bound(slots.begin(), slots.end(), factual);
    profile.factual_index = static_cast<std::size_t>(pos - slots.begin());
    slots.insert(pos, factual);
  }
  for (double s : slots) {
    const Instance xi = x.with_slot(j, s);
    profile.points.push_back({xi.value(j), s, model.confidence(xi, measure)});
  }
  return profile;
}

std::pair<FeatureValue, FeatureValue> ice_extremes(const IceProfile& profile) {
  if (profile.points.empty()) throw Error("query", "empty ICE profile");
  std::size_t hi = 0, lo = 0;
  for (std::size_t i = 1; i < profile.points.size(); ++i) {
    if (profile.points[i].confidence > profile.points[hi].confidence) hi = i;
    if (profile.points[i].confidence < profile.points[lo].confidence) lo = i;
  }
  return {profile.points[hi].value, profile.points[lo].value};
}

}  // namespace confcf
