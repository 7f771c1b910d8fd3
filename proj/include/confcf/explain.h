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

#ifndef CONFCF_EXPLAIN_H_
#define CONFCF_EXPLAIN_H_

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "confcf/cfsearch.h"
#include "confcf/ice.h"

namespace confcf {

// Round-half-even to one decimal of a percent: 0.578 -> "57.8%".
std::string format_percent(double confidence);
// Same rounding with a trailing ".0" dropped: 0.45 -> "45%".
std::string format_threshold_percent(double threshold);

// "One way you could have got a confidence score of less than 45% (30.1%)
// instead is if Occupation had taken value Manager rather than Service."
// Several changes are joined with " and ". When U(x') renders equal to T the
// comparison and the parenthetical are dropped. Throws Error("explain") for an
// infeasible result or one without changes.
std::string render_sentence(const CounterfactualResult& result,
                            const ConfidenceQuery& query);

// Example-based table: one row per attribute, alternatives left of the
// original, "-" for unchanged cells, then a confidence row and a single
// prediction row spanning every value column.
struct ExplanationTable {
  struct Row {
    std::string attribute;
    std::vector<std::string> cells;  // alternatives..., original
  };
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::string> confidence_row;
  std::string prediction;
  std::vector<std::string> warnings;

  std::string to_text() const;
};

ExplanationTable render_table(const Instance& original, double original_confidence,
                              std::span<const CounterfactualResult> alternatives,
                              Label prediction);

// Deterministic SVG 1.1 chart of a profile: bars for categorical features,
// a polyline for continuous ones, the factual point highlighted.
std::string render_profile_svg(const IceProfile& profile,
                               const std::string& title_prediction);

struct RenderedProfile {
  IceProfile profile;
  std::string svg;
};

inline constexpr int kBundleFormatVersion = 1;

struct ExplanationBundle {
  std::string sentence;
  ExplanationTable table;
  std::vector<RenderedProfile> profiles;
  std::vector<CounterfactualResult> alternatives;
  int format_version = kBundleFormatVersion;
};

struct ExplainOptions {
  std::size_t alternatives = 2;
};

// Solves the query, then renders the best counterfactual as a sentence, the
// best few as a table, and an ICE chart for every feature they change.
std::variant<ExplanationBundle, InfeasibleReport> explain(
    const LogisticModel& model, const ConfidenceQuery& query,
    const ExplainOptions& options = {});

}  // namespace confcf

#endif  // CONFCF_EXPLAIN_H_
