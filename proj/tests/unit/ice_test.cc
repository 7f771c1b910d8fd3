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

#include <doctest.h>

#include "confcf/ice.h"
#include "support.h"

using namespace confcf;
using namespace confcf::testing;

namespace {

// Strictly down, then strictly up; either side may be empty.
bool unimodal_valley(const std::vector<double>& u) {
  std::size_t i = 1;
  while (i < u.size() && u[i] < u[i - 1]) ++i;
  while (i < u.size() && u[i] > u[i - 1]) ++i;
  return i == u.size();
}

std::vector<double> confidences(const IceProfile& p) {
  std::vector<double> out;
  for (const auto& pt : p.points) out.push_back(pt.confidence);
  return out;
}

}  // namespace

TEST_CASE("zero-weight feature gives a flat profile of grid length") {
  auto schema = two_continuous_schema(-5, 5, 0.5);
  const auto model = make_model(schema, {{1.0}, {0.0}}, 0.2);
  const Instance x(schema, {1.0, 0.0});
  const auto p = ice_profile(model, x, "b");
  CHECK(p.points.size() == 21);
  const double u = model.confidence(x, ConfidenceMeasure::kMargin);
  for (const auto& pt : p.points) CHECK(pt.confidence == u);
  const auto [hi, lo] = ice_extremes(p);
  CHECK(std::get<double>(hi) == -5.0);
  CHECK(std::get<double>(lo) == -5.0);
}

TEST_CASE("occupation profile with three named levels") {
  const auto model = occupation_model();
  const auto x = occupation_original(model.schema_ptr());
  const auto p = ice_profile(model, x, "Occupation");
  REQUIRE(p.points.size() == 8);
  CHECK(p.kind == FeatureKind::kCategorical);
  CHECK(std::get<std::string>(p.points[0].value) == "Manager");
  CHECK(p.points[0].confidence == doctest::Approx(0.301).epsilon(1e-12));
  CHECK(p.points[1].confidence == doctest::Approx(0.421).epsilon(1e-12));
  CHECK(p.points[2].confidence == doctest::Approx(0.578).epsilon(1e-12));
  CHECK(p.factual_index == 2);
  CHECK(p.predicted_label == "Lower than $50,000");

  // The three occupations of the table: maximum at Service, minimum at Manager.
  IceProfile three = p;
  three.points.resize(3);
  const auto [hi, lo] = ice_extremes(three);
  CHECK(std::get<std::string>(hi) == "Service");
  CHECK(std::get<std::string>(lo) == "Manager");
}

TEST_CASE("each point equals the confidence of the modified instance") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    auto schema = random_schema(rng);
    const auto model = random_model(rng, schema);
    const auto x = random_instance(rng, schema);
    const auto measure = kAllMeasures[rng.index(4)];
    for (std::size_t j = 0; j < schema->size(); ++j) {
      const auto& f = schema->features[j];
      const auto p = ice_profile(model, x, f.name, measure);
      CHECK(p.points.size() == f.grid_size());
      for (const auto& pt : p.points) {
        CHECK(pt.confidence == model.confidence(x.with_slot(j, pt.slot), measure));
        CHECK(pt.confidence >= 0.0);
        CHECK(pt.confidence <= 1.0);
      }
      for (std::size_t i = 1; i < p.points.size(); ++i) {
        CHECK(p.points[i].slot > p.points[i - 1].slot);
      }
      CHECK(p.points[p.factual_index].slot == x.slot(j));
    }
  }
}

TEST_CASE("continuous margin profiles are V-shaped") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    auto schema = one_continuous_schema(-10, 10, 0.5);
    const double w = rng.uniform(0.05, 2.0) * (rng.index(2) ? 1 : -1);
    const auto model = make_model(schema, {{w}}, rng.uniform(-3, 3));
    const auto p = ice_profile(model, Instance(schema, {0.0}), "v");
    CHECK(unimodal_valley(confidences(p)));
    // The minimum sits next to the logit-zero crossing when it is in range.
    const double zero = -model.bias() / w;
    const auto [hi, lo] = ice_extremes(p);
    if (zero > -10 && zero < 10) CHECK(std::abs(std::get<double>(lo) - zero) <= 0.5);
  }
}

TEST_CASE("off-grid factual value is inserted and marked") {
  auto schema = one_continuous_schema(0, 10, 1);
  const auto model = make_model(schema, {{0.4}}, -1.0);
  const Instance x(schema, {3.3});
  const auto p = ice_profile(model, x, "v");
  CHECK(p.points.size() == 12);
  CHECK(p.points[p.factual_index].slot == 3.3);
  CHECK(p.factual_index == 4);
  CHECK(p.points[p.factual_index].confidence == model.confidence(x, ConfidenceMeasure::kMargin));
}

TEST_CASE("profiles ignore mutability") {
  const auto model = occupation_model();
  const auto x = occupation_original(model.schema_ptr());
  const auto p = ice_profile(model, x, "Age");
  CHECK(p.points.size() == 74);
}

TEST_CASE("unknown feature is an error") {
  const auto model = occupation_model();
  CHECK_THROWS_AS(ice_profile(model, occupation_original(model.schema_ptr()), "Salary"), Error);
}
