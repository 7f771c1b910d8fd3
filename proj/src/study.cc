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

#include "confcf/study.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "confcf/dataset.h"
#include "confcf/rng.h"

namespace confcf {
namespace {

constexpr std::size_t kInstancesPerQuestion = 3;

Instance random_grid_instance(const SchemaPtr& schema, Rng& rng) {
  std::vector<double> slots;
  for (const auto& f : schema->features) {
    slots.push_back(f.grid_value(rng.index(f.grid_size())));
  }
  return Instance(schema, std::move(slots));
}

CounterfactualResult as_alternative(const LogisticModel& model,
                                    const Instance& original, Instance modified,
                                    ConfidenceMeasure measure) {
  const double p = model.predict_proba(modified);
  CounterfactualResult r{true, std::move(modified)};
  r.confidence = confidence_from_probability(p, measure);
  r.predicted_class = model.class_of(p);
  r.distance = weighted_distance(model, original, r.x_prime);
  r.objective = r.distance;
  for (std::size_t j = 0; j < original.size(); ++j) {
    if (original.slot(j) != r.x_prime.slot(j)) {
      r.changed.push_back({original.schema().features[j].name, original.value(j),
                           r.x_prime.value(j)});
    }
  }
  return r;
}

ExplanationBundle feature_explanation(const LogisticModel& model,
                                      const StudyQuestion& q, std::size_t j,
                                      ConfidenceMeasure measure) {
  const auto& schema = model.schema();
  const Instance& base = q.instances[0];
  ExplanationBundle bundle;
  if (q.condition == Condition::kExampleBased) {
    std::vector<CounterfactualResult> alts;
    std::set<double> used{base.slot(j)};
    for (std::size_t i = 1; i < q.instances.size(); ++i) {
      const double v = q.instances[i].slot(j);
      if (!used.insert(v).second) continue;
      alts.push_back(as_alternative(model, base, base.with_slot(j, v), measure));
    }
    const Label prediction = model.predict_class(base);
    const bool same = std::all_of(alts.begin(), alts.end(), [&](const auto& a) {
      return a.predicted_class == prediction;
    });
    if (!alts.empty() && same) {
      bundle.table = render_table(base, model.confidence(base, measure), alts,
                                  prediction);
    }
    bundle.alternatives = std::move(alts);
  } else if (q.condition == Condition::kVisualisationBased) {
    auto profile = ice_profile(model, base, schema.features[j].name, measure);
    std::string svg = render_profile_svg(profile, profile.predicted_label);
    bundle.profiles.push_back({std::move(profile), std::move(svg)});
  }
  return bundle;
}

}  // namespace

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::kControl:
      return "control";
    case Condition::kExampleBased:
      return "example_based";
    case Condition::kVisualisationBased:
      return "visualisation_based";
  }
  return "control";
}

Condition parse_condition(std::string_view text) {
  for (auto c : {Condition::kControl, Condition::kExampleBased,
                 Condition::kVisualisationBased}) {
    if (to_string(c) == text) return c;
  }
  throw Error("study", "unknown condition '" + std::string(text) + "'",
              "condition");
}

std::vector<StudyQuestion> generate_questions(const LogisticModel& model,
                                              const GenerationSettings& settings,
                                              std::span<const Instance> pool) {
  const auto& schema = model.schema();
  for (const auto& x : pool) model.check_instance(x);

  std::vector<std::size_t> singles, pairable;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& f = schema.features[j];
    if (!f.is_mutable || f.grid_size() < 2) continue;
    pairable.push_back(j);
    if (f.grid_size() >= kInstancesPerQuestion) singles.push_back(j);
  }
  if (pairable.empty()) {
    throw Error("study", "schema has no mutable feature to vary");
  }

  Rng rng(settings.seed);
  std::vector<StudyQuestion> out;
  for (std::size_t qi = 0; qi < settings.n; ++qi) {
    std::size_t count = 1 + rng.index(2);
    if (count == 2 && pairable.size() < 2) count = 1;
    if (count == 1 && singles.empty()) count = 2;
    if (count == 2 && pairable.size() < 2) {
      throw Error("study", "no feature has enough values for a question");
    }
    std::vector<std::size_t> varied;
    if (count == 1) {
      varied.push_back(singles[rng.index(singles.size())]);
    } else {
      std::vector<std::size_t> pick = pairable;
      rng.shuffle(pick);
      varied = {pick[0], pick[1]};
      std::sort(varied.begin(), varied.end());
    }

    std::optional<StudyQuestion> question;
    for (std::size_t attempt = 0; attempt < settings.max_resamples && !question;
         ++attempt) {
      const Instance base = pool.empty() ? random_grid_instance(model.schema_ptr(), rng)
                                         : pool[rng.index(pool.size())];
      std::vector<Instance> instances;
      std::set<std::vector<double>> combos;
      for (std::size_t i = 0; i < kInstancesPerQuestion; ++i) {
        std::vector<double> slots(base.slots().begin(), base.slots().end());
        std::vector<double> combo;
        for (std::size_t j : varied) {
          const auto& f = schema.features[j];
          slots[j] = f.grid_value(rng.index(f.grid_size()));
          combo.push_back(slots[j]);
        }
        combos.insert(combo);
        instances.emplace_back(model.schema_ptr(), std::move(slots));
      }
      if (combos.size() != kInstancesPerQuestion) continue;
      bool each_varies = true;
      for (std::size_t j : varied) {
        std::set<double> seen;
        for (const auto& x : instances) seen.insert(x.slot(j));
        each_varies = each_varies && seen.size() >= 2;
      }
      if (!each_varies) continue;

      std::vector<double> conf;
      std::set<Label> classes;
      for (const auto& x : instances) {
        conf.push_back(model.confidence(x, settings.measure));
        classes.insert(model.predict_class(x));
      }
      if (settings.same_class && classes.size() != 1) continue;
      bool gaps_ok = true;
      for (std::size_t a = 0; a < conf.size(); ++a) {
        for (std::size_t b = a + 1; b < conf.size(); ++b) {
          gaps_ok = gaps_ok && std::abs(conf[a] - conf[b]) >= settings.min_gap;
        }
      }
      if (!gaps_ok) continue;

      StudyQuestion q;
      char id[16];
      std::snprintf(id, sizeof(id), "q%02zu", qi + 1);
      q.id = id;
      q.instances = std::move(instances);
      for (std::size_t j : varied) q.varied_features.push_back(schema.features[j].name);
      q.correct_index = static_cast<std::size_t>(
          std::max_element(conf.begin(), conf.end()) - conf.begin());
      q.confidences = std::move(conf);
      q.prediction = model.predict_class(q.instances[0]);
      q.condition = settings.condition;
      question = std::move(q);
    }
    if (!question) {
      std::string names;
      for (std::size_t j : varied) {
        names += (names.empty() ? "" : ", ") + schema.features[j].name;
      }
      throw Error("study",
                  "cannot separate confidences by " +
                      format_number(settings.min_gap) + " after " +
                      std::to_string(settings.max_resamples) +
                      " resamples varying " + names,
                  schema.features[varied.front()].name);
    }
    if (question->condition != Condition::kControl) {
      for (const auto& name : question->varied_features) {
        question->explanations.push_back(feature_explanation(
            model, *question, schema.require_index(name), settings.measure));
      }
    }
    out.push_back(std::move(*question));
  }
  return out;
}

long payout_cents_for(int score) {
  const long bonus = kBonusPerPointCents * std::max(0, score);
  return kBasePayoutCents + std::min(kMaxBonusCents, bonus);
}

std::string format_dollars(long cents) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%ld.%02ld", cents / 100, cents % 100);
  return buf;
}

ScoreResult score(const AnswerSheet& sheet,
                  std::span<const StudyQuestion> questions) {
  if (sheet.answers.size() != questions.size()) {
    throw Error("study", "answer sheet has " + std::to_string(sheet.answers.size()) +
                             " entries for " + std::to_string(questions.size()) +
                             " questions");
  }
  std::map<std::string, const Answer*> by_id;
  for (const auto& a : sheet.answers) {
    if (!by_id.emplace(a.question_id, &a).second) {
      throw Error("study", "duplicate answer for " + a.question_id, a.question_id);
    }
  }
  ScoreResult r;
  for (const auto& q : questions) {
    auto it = by_id.find(q.id);
    if (it == by_id.end()) {
      throw Error("study", "no answer for question " + q.id, q.id);
    }
    const Answer& a = *it->second;
    if (!a.choice) {
      ++r.dont_know;
      continue;
    }
    if (*a.choice >= q.instances.size()) {
      throw Error("study", "choice " + std::to_string(*a.choice) +
                               " out of range for question " + q.id,
                  q.id);
    }
    if (*a.choice == q.correct_index) {
      ++r.correct;
    } else {
      ++r.wrong;
    }
  }
  r.score = kCorrectPoints * r.correct + kWrongPoints * r.wrong;
  r.payout_cents = payout_cents_for(r.score);
  return r;
}

AnswerSheet read_answers(std::istream& in, std::string participant_id) {
  auto rows = parse_csv(in);
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "question_id" ||
      rows[0][1] != "choice") {
    throw Error("study", "answers CSV needs a question_id,choice,rationale header");
  }
  AnswerSheet sheet{std::move(participant_id), {}};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) {
      throw Error("study", "row " + std::to_string(r) + ": too few cells");
    }
    Answer a{row[0], std::nullopt, row.size() > 2 ? row[2] : ""};
    if (row[1] != "dont_know") {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(row[1].data(), row[1].data() + row[1].size(), v);
      if (ec != std::errc() || ptr != row[1].data() + row[1].size()) {
        throw Error("study", "row " + std::to_string(r) + ": bad choice '" +
                                 row[1] + "'",
                    "choice");
      }
      a.choice = v;
    }
    sheet.answers.push_back(std::move(a));
  }
  return sheet;
}

std::string write_scores_csv(
    std::span<const std::pair<std::string, ScoreResult>> rows) {
  std::string out = "participant_id,score,payout\n";
  for (const auto& [id, r] : rows) {
    out += format_csv_row({id, std::to_string(r.score), format_dollars(r.payout_cents)});
    out += "\n";
  }
  return out;
}

}  // namespace confcf
