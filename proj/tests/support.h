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

#ifndef CONFCF_TESTS_SUPPORT_H_
#define CONFCF_TESTS_SUPPORT_H_

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "confcf/cfsearch.h"
#include "confcf/dataset.h"
#include "confcf/mad.h"
#include "confcf/model.h"
#include "confcf/rng.h"
#include "confcf/schema.h"

namespace confcf::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CONFCF_FIXTURE_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Per-feature weights in original units: one entry per level for a
// categorical feature, a single slope for a continuous one.
inline LogisticModel make_model(SchemaPtr schema,
                                const std::vector<std::vector<double>>& per_feature,
                                double bias, double boundary = 0.5,
                                std::optional<MadWeights> mad = std::nullopt) {
  std::vector<double> w;
  for (const auto& f : per_feature) w.insert(w.end(), f.begin(), f.end());
  auto enc = identity_encoding(*schema);
  MadWeights m = mad ? *mad : unit_mad_weights(*schema);
  return LogisticModel(std::move(schema), std::move(enc), std::move(w), bias,
                       boundary, std::move(m));
}

inline SchemaPtr two_continuous_schema(double lo = -5, double hi = 5, double step = 0.1) {
  DatasetSchema s;
  s.features = {FeatureSchema::continuous("a", lo, hi, step),
                FeatureSchema::continuous("b", lo, hi, step)};
  s.target = "y";
  s.positive_label = "pos";
  s.negative_label = "neg";
  return make_schema(std::move(s));
}

inline SchemaPtr one_continuous_schema(double lo, double hi, double step,
                                       const std::string& name = "v") {
  DatasetSchema s;
  s.features = {FeatureSchema::continuous(name, lo, hi, step)};
  s.target = "y";
  s.positive_label = "pos";
  s.negative_label = "neg";
  return make_schema(std::move(s));
}

// The seven income attributes.
inline SchemaPtr income_schema() {
  DatasetSchema s;
  s.features = {
      FeatureSchema::categorical("Marital status",
                                 {"Married", "Never married", "Divorced", "Separated",
                                  "Widowed"}),
      FeatureSchema::continuous("Years of education", 1, 16, 1),
      FeatureSchema::categorical("Occupation",
                                 {"Manager", "Skilled Specialty", "Service", "Clerical",
                                  "Sales", "Technician", "Blue Collar", "Armed Forces"}),
      FeatureSchema::continuous("Age", 17, 90, 1, false),
      FeatureSchema::categorical("Any capital gains", {"No", "Yes"}),
      FeatureSchema::continuous("Working hours per week", 1, 99, 1),
      FeatureSchema::categorical("Education",
                                 {"Dropout", "High School", "Some College", "Bachelors",
                                  "Masters", "Professional", "Doctorate"})};
  s.target = "Income";
  s.positive_label = "Higher than $50,000";
  s.negative_label = "Lower than $50,000";
  return make_schema(std::move(s));
}

// Negative-class probability whose margin confidence is `u`.
inline double negative_probability_for(double u) { return (1.0 - u) / 2.0; }

// Only Occupation moves the logit: Manager 30.1%, Skilled Specialty 42.1%,
// Service 57.8%, all "Lower than $50,000". The remaining occupations sit at
// Service's confidence.
inline LogisticModel occupation_model() {
  auto schema = income_schema();
  const double service = logit_of(negative_probability_for(0.578));
  std::vector<double> occupation(8, service);
  occupation[0] = logit_of(negative_probability_for(0.301));
  occupation[1] = logit_of(negative_probability_for(0.421));
  return make_model(schema,
                    {std::vector<double>(5, 0.0), {0.0}, occupation, {0.0},
                     {0.0, 0.0}, {0.0}, std::vector<double>(7, 0.0)},
                    0.0);
}

inline Instance occupation_original(const SchemaPtr& schema) {
  return Instance::from_values(schema, {{"Marital status", std::string("Married")},
                                        {"Years of education", 9.0},
                                        {"Occupation", std::string("Service")},
                                        {"Age", 63.0},
                                        {"Any capital gains", std::string("No")},
                                        {"Working hours per week", 12.0},
                                        {"Education", std::string("High School")}});
}

struct RandomModelOptions {
  std::size_t max_features = 4;
  std::size_t max_grid = 12;
  bool allow_immutable = true;
};

inline SchemaPtr random_schema(Rng& rng, const RandomModelOptions& o = {}) {
  DatasetSchema s;
  const std::size_t n = 1 + rng.index(o.max_features);
  for (std::size_t j = 0; j < n; ++j) {
    const std::string name = std::string("f") + static_cast<char>('a' + j);
    const bool mut = !o.allow_immutable || rng.index(5) != 0;
    if (rng.index(2) == 0) {
      const std::size_t levels = 2 + rng.index(std::min<std::size_t>(o.max_grid, 6) - 1);
      std::vector<std::string> names;
      for (std::size_t l = 0; l < levels; ++l) names.push_back("L" + std::to_string(l));
      s.features.push_back(FeatureSchema::categorical(name, names, mut));
    } else {
      const std::size_t points = 2 + rng.index(o.max_grid - 1);
      const double step = std::vector<double>{0.5, 1.0, 0.25, 2.0}[rng.index(4)];
      const double lo = step * (static_cast<double>(rng.index(9)) - 6.0);
      s.features.push_back(FeatureSchema::continuous(
          name, lo, lo + step * static_cast<double>(points - 1), step, mut));
    }
  }
  s.target = "y";
  s.positive_label = "pos";
  s.negative_label = "neg";
  return make_schema(std::move(s));
}

inline LogisticModel random_model(Rng& rng, SchemaPtr schema) {
  std::vector<std::vector<double>> w;
  MadWeights mad = unit_mad_weights(*schema);
  for (std::size_t j = 0; j < schema->size(); ++j) {
    const auto& f = schema->features[j];
    if (f.is_categorical()) {
      std::vector<double> lv;
      for (std::size_t l = 0; l < f.levels.size(); ++l) lv.push_back(rng.uniform(-2, 2));
      w.push_back(lv);
    } else {
      w.push_back({rng.uniform(-1.5, 1.5)});
      mad.weights[j] = rng.uniform(0.2, 2.0);
    }
  }
  return make_model(schema, w, rng.uniform(-1, 1), rng.uniform(0.3, 0.7), mad);
}

inline Instance random_instance(Rng& rng, const SchemaPtr& schema) {
  std::vector<double> slots;
  for (const auto& f : schema->features) slots.push_back(f.grid_value(rng.index(f.grid_size())));
  return Instance(schema, std::move(slots));
}

// A structurally valid query with T on the asked-for side of U(x).
inline ConfidenceQuery random_query(Rng& rng, const LogisticModel& model, Instance x,
                                    std::size_t max_k = 2) {
  const auto measure = kAllMeasures[rng.index(4)];
  const double u = model.confidence(x, measure);
  const bool increase = rng.index(2) == 0;
  const double t = increase ? rng.uniform(u, 1.0) : rng.uniform(0.0, u);
  return make_query(model, std::move(x), t,
                    increase ? Direction::kIncrease : Direction::kDecrease, {},
                    1 + rng.index(max_k), measure);
}

}  // namespace confcf::testing

#endif  // CONFCF_TESTS_SUPPORT_H_
