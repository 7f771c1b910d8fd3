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

#ifndef CONFCF_ICE_H_
#define CONFCF_ICE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confcf/model.h"

namespace confcf {

struct IcePoint {
  FeatureValue value;
  double slot = 0.0;
  double confidence = 0.0;
};

// Confidence of one instance as a single feature sweeps its domain: every
// level of a categorical feature, or every grid point of a continuous one.
// An off-grid factual value is inserted at its exact position.
struct IceProfile {
  std::string feature;
  FeatureKind kind = FeatureKind::kContinuous;
  ConfidenceMeasure measure = ConfidenceMeasure::kMargin;
  Label predicted_class = Label::kNegative;
  std::string predicted_label;
  std::vector<IcePoint> points;
  std::size_t factual_index = 0;
};

IceProfile ice_profile(const LogisticModel& model, const Instance& x,
                       std::string_view feature,
                       ConfidenceMeasure measure = ConfidenceMeasure::kMargin);

// (argmax value, argmin value); ties resolve to the earliest grid point.
std::pair<FeatureValue, FeatureValue> ice_extremes(const IceProfile& profile);

}  // namespace confcf

#endif  // CONFCF_ICE_H_
