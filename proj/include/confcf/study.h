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

#ifndef CONFCF_STUDY_H_
#define CONFCF_STUDY_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confcf/explain.h"

namespace confcf {

enum class Condition { kControl, kExampleBased, kVisualisationBased };

std::string_view to_string(Condition condition);
Condition parse_condition(std::string_view text);

// "For which of these three the model predicts with the highest confidence?"
// The three instances differ only on `varied_features`.
struct StudyQuestion {
  std::string id;
  std::vector<Instance> instances;
  std::vector<std::string> varied_features;
  std::vector<double> confidences;
  std::size_t correct_index = 0;
  Label prediction = Label::kNegative;  // meaningful when same_class is set
  Condition condition = Condition::kControl;
  // One bundle per varied feature in the treatment conditions; empty for
  // control. Bundles carry a table and an ICE chart but no sentence.
  std::vector<ExplanationBundle> explanations;
};

struct GenerationSettings {
  std::size_t n = 10;
  std::uint64_t seed = 1;
  Condition condition = Condition::kControl;
  double min_gap = 0.02;
  bool same_class = true;
  ConfidenceMeasure measure = ConfidenceMeasure::kMargin;
  std::size_t max_resamples = 1000;
};

// Deterministic under `settings.seed`. Base instances are drawn from `pool`
// when given, otherwise uniformly from the schema grid.
std::vector<StudyQuestion> generate_questions(const LogisticModel& model,
                                              const GenerationSettings& settings,
                                              std::span<const Instance> pool = {});

struct Answer {
  std::string question_id;
  std::optional<std::size_t> choice;  // nullopt: "I don't have enough information"
  std::string rationale;
};

struct AnswerSheet {
  std::string participant_id;
  std::vector<Answer> answers;
};

inline constexpr int kCorrectPoints = 1;
inline constexpr int kWrongPoints = -2;
inline constexpr long kBasePayoutCents = 700;
inline constexpr long kBonusPerPointCents = 20;
inline constexpr long kMaxBonusCents = 200;

struct ScoreResult {
  int score = 0;
  int correct = 0;
  int wrong = 0;
  int dont_know = 0;
  long payout_cents = kBasePayoutCents;

  double payout() const { return static_cast<double>(payout_cents) / 100.0; }
};

// +1 correct, -2 wrong, 0 "don't know"; payout = $7 + min($2, $0.20 * score+).
ScoreResult score(const AnswerSheet& sheet,
                  std::span<const StudyQuestion> questions);

long payout_cents_for(int score);
std::string format_dollars(long cents);

// Answers CSV: header question_id,choice,rationale; choice is a 0-based
// instance index or "dont_know".
AnswerSheet read_answers(std::istream& in, std::string participant_id);
std::string write_scores_csv(std::span<const std::pair<std::string, ScoreResult>> rows);

}  // namespace confcf

#endif  // CONFCF_STUDY_H_
