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

#ifndef CONFCF_CFSEARCH_H_
#define CONFCF_CFSEARCH_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confcf/model.h"

namespace confcf {

enum class Direction { kIncrease, kDecrease };

std::string_view to_string(Direction direction);
Direction parse_direction(std::string_view text);

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr std::size_t kDefaultMaxChanged = 2;

// "Why is the model U(x) confident rather than above / below T?"
struct ConfidenceQuery {
  Instance x;
  double threshold = 0.0;
  Direction direction = Direction::kDecrease;
  std::vector<std::string> mutable_features;
  std::size_t max_changed = kDefaultMaxChanged;
  double epsilon = kDefaultEpsilon;
  ConfidenceMeasure measure = ConfidenceMeasure::kMargin;
};

// Builds a query and checks every invariant, including that the threshold
// lies on the asked-for side of U(x). A missing threshold defaults to U(x).
// An empty mutable list means every schema-mutable feature.
ConfidenceQuery make_query(const LogisticModel& model, Instance x,
                           std::optional<double> threshold, Direction direction,
                           std::vector<std::string> mutable_features = {},
                           std::size_t max_changed = kDefaultMaxChanged,
                           ConfidenceMeasure measure = ConfidenceMeasure::kMargin,
                           double epsilon = kDefaultEpsilon);

// Structural checks only (threshold range, mutable subset, schema match).
// solve() and oracle_solve() accept any structurally valid query; the
// threshold-versus-U(x) side check lives in make_query().
void validate_query(const LogisticModel& model, const ConfidenceQuery& query);

struct FeatureChange {
  std::string feature;
  FeatureValue old_value;
  FeatureValue new_value;
};

enum class BindingConstraint {
  kNoMutableFeatures,
  kThreshold,
  kClassBoundary,
  kChangeBudget,
  kGridResolution,
};

std::string_view to_string(BindingConstraint constraint);

struct InfeasibleReport {
  BindingConstraint binding = BindingConstraint::kThreshold;
  std::string message;
};

struct CounterfactualResult {
  bool feasible = false;
  Instance x_prime;
  double confidence = 0.0;
  Label predicted_class = Label::kNegative;
  std::vector<FeatureChange> changed;
  double distance = 0.0;
  double objective = 0.0;
  std::optional<InfeasibleReport> infeasibility;
};

// Weighted l1 distance: MAD-weighted absolute difference for continuous
// features, a flat unit cost per changed categorical feature.
double weighted_distance(const LogisticModel& model, const Instance& a,
                         const Instance& b);

// Exact minimiser over the schema grid of
//   ||x - x'||_{1,w} + |U(x') - T|
// subject to U(x') >= T + eps (increase) or U(x') <= T - eps (decrease), x'
// on the same side of the decision boundary as x, and at most k changed
// mutable features. Branch and bound over features, seeded with the analytic
// single-feature candidates. Ties prefer fewer changes, then the
// lexicographically smaller sorted list of changed names, then smaller grid
// indices.
CounterfactualResult solve(const LogisticModel& model,
                           const ConfidenceQuery& query);

// The m best distinct feasible counterfactuals in tie-break order.
std::vector<CounterfactualResult> solve_top(const LogisticModel& model,
                                            const ConfidenceQuery& query,
                                            std::size_t m);

inline constexpr double kOracleGridGuard = 1e7;

// Exhaustive enumeration of every change set of size <= k. Reference
// definition of correctness for solve(); throws Error("grid_guard") when the
// candidate count exceeds 1e7.
CounterfactualResult oracle_solve(const LogisticModel& model,
                                  const ConfidenceQuery& query);

// Closed-form single-feature candidate for a continuous feature: the grid
// point nearest x_j whose logit lies on the factual class side with |logit|
// past the confidence threshold. Returns x itself when it already satisfies
// the constraints, and nothing when the feature cannot reach them.
std::optional<Instance> analytic_single_feature(const LogisticModel& model,
                                                const ConfidenceQuery& query,
                                                std::string_view feature);

// Prediction-counterfactual baseline: minimises
//   lambda * (P(x') - D)^2 + ||x - x'||_{1,w}
// over the grid subject to class(x') == desired. All schema-mutable features
// may change unless max_changed is given.
CounterfactualResult solve_class_flip(const LogisticModel& model, const Instance& x,
                                   Label desired, double lambda,
                                   std::optional<std::size_t> max_changed = {});

}  // namespace confcf

#endif  // CONFCF_CFSEARCH_H_
