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

#include <functional>
#include <limits>

#include "confcf/cfsearch.h"
#include "support.h"

using namespace confcf;
using namespace confcf::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double objective_or_inf(const CounterfactualResult& r) {
  return r.feasible ? r.objective : kInf;
}

// Independent enumeration written from the problem statement only.
struct Brute {
  double objective = kInf;
  std::vector<double> point;
};

Brute brute_force(const LogisticModel& model, const ConfidenceQuery& q) {
  const auto& schema = model.schema();
  const double p0 = model.predict_proba(q.x);
  const Label cls = model.class_of(p0);
  Brute best;
  std::vector<std::vector<double>> grids;
  for (const auto& f : schema.features) {
    const bool mut = std::find(q.mutable_features.begin(), q.mutable_features.end(),
                               f.name) != q.mutable_features.end();
    grids.push_back(mut ? f.grid() : std::vector<double>{});
  }
  std::vector<double> cur(q.x.slots().begin(), q.x.slots().end());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t used) {
    if (j == grids.size()) {
      const Instance xp(q.x.schema_ptr(), cur);
      const double p = model.predict_proba(xp);
      if (model.class_of(p) != cls) return;
      const double u = confidence_from_probability(p, q.measure);
      const bool ok = q.direction == Direction::kIncrease ? u >= q.threshold + q.epsilon
                                                          : u <= q.threshold - q.epsilon;
      if (!ok) return;
      double d = 0;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        if (cur[i] == q.x.slot(i)) continue;
        d += schema.features[i].is_categorical()
                 ? 1.0
                 : model.mad().weights[i] * std::abs(cur[i] - q.x.slot(i));
      }
      const double obj = d + std::abs(u - q.threshold);
      if (obj < best.objective) best = {obj, cur};
      return;
    }
    rec(j + 1, used);
    if (used == q.max_changed) return;
    const double keep = cur[j];
    for (double v : grids[j]) {
      if (v == keep) continue;
      cur[j] = v;
      rec(j + 1, used + 1);
    }
    cur[j] = keep;
  };
  rec(0, 0);
  return best;
}

void check_invariants(const LogisticModel& model, const ConfidenceQuery& q,
                      const CounterfactualResult& r) {
  if (!r.feasible) return;
  CHECK(model.predict_class(r.x_prime) == model.predict_class(q.x));
  const double u = model.confidence(r.x_prime, q.measure);
  CHECK(u == r.confidence);
  if (q.direction == Direction::kIncrease) {
    CHECK(u >= q.threshold + q.epsilon);
  } else {
    CHECK(u <= q.threshold - q.epsilon);
  }
  CHECK(r.changed.size() <= q.max_changed);
  for (const auto& c : r.changed) {
    CHECK(std::find(q.mutable_features.begin(), q.mutable_features.end(), c.feature) !=
          q.mutable_features.end());
  }
  CHECK(r.distance == doctest::Approx(weighted_distance(model, q.x, r.x_prime)).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(r.distance + std::abs(u - q.threshold)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("two-feature toy model matches exhaustive enumeration") {
  auto schema = two_continuous_schema();
  const auto model = make_model(schema, {{1.0}, {-2.0}}, 0.0);
  const Instance x(schema, {0.5, 0.0});
  const auto q = make_query(model, x, 0.2, Direction::kDecrease);
  const auto r = solve(model, q);
  const auto o = oracle_solve(model, q);
  const auto b = brute_force(model, q);
  REQUIRE(r.feasible);
  REQUIRE(o.feasible);
  CHECK(std::abs(r.objective - o.objective) <= 1e-9);
  CHECK(std::abs(r.objective - b.objective) <= 1e-9);
  CHECK(r.x_prime == o.x_prime);
  check_invariants(model, q, r);
  CHECK(r.objective == doctest::Approx(weighted_distance(model, x, r.x_prime) +
                                       std::abs(r.confidence - 0.2)));
}

TEST_CASE("unreachable increase is an infeasible report, not an exception") {
  auto schema = two_continuous_schema();
  const auto model = make_model(schema, {{1.0}, {-2.0}}, 0.0);
  const Instance x(schema, {0.5, 0.0});
  const auto r = solve(model, make_query(model, x, 1.0, Direction::kIncrease));
  CHECK_FALSE(r.feasible);
  REQUIRE(r.infeasibility.has_value());
  CHECK(r.infeasibility->binding == BindingConstraint::kThreshold);
  CHECK_FALSE(oracle_solve(model, make_query(model, x, 1.0, Direction::kIncrease)).feasible);
}

TEST_CASE("all features immutable is reported as such") {
  DatasetSchema s;
  s.features = {FeatureSchema::continuous("a", 0, 4, 1, false)};
  s.target = "y";
  s.positive_label = "p";
  s.negative_label = "n";
  auto schema = make_schema(std::move(s));
  const auto model = make_model(schema, {{1.0}}, -0.5);
  const auto r = solve(model, make_query(model, Instance(schema, {3}), 0.1, Direction::kDecrease));
  CHECK_FALSE(r.feasible);
  CHECK(r.infeasibility->binding == BindingConstraint::kNoMutableFeatures);
}

TEST_CASE("a cheap categorical change beats every continuous route") {
  DatasetSchema s;
  s.features = {FeatureSchema::categorical("c", {"A", "B"}),
                FeatureSchema::continuous("v", 0, 10, 1)};
  s.target = "y";
  s.positive_label = "p";
  s.negative_label = "n";
  auto schema = make_schema(std::move(s));
  // logit = level weight + 0.3 v; x = (A, 5), logit 3.0.
  // Level B puts the logit at exactly 1.0, 2e-6 under T on the margin scale.
  // Continuous routes need v <= 1, costing 8.
  const double t_logit = 1.0;
  const double target_u = std::tanh(t_logit / 2);
  MadWeights mad = unit_mad_weights(*schema);
  mad.weights[1] = 2.0;
  const auto model = make_model(schema, {{1.5, 1.5 - 3.0 + t_logit}, {0.3}}, 0.0, 0.5, mad);
  const Instance x(schema, {0, 5});
  REQUIRE(model.logit(x) == doctest::Approx(3.0));
  const double t = target_u + 2e-6;
  const auto q = make_query(model, x, t, Direction::kDecrease, {}, 2);
  const auto r = solve(model, q);
  const auto o = oracle_solve(model, q);
  REQUIRE(r.feasible);
  REQUIRE(r.changed.size() == 1);
  CHECK(r.changed[0].feature == "c");
  CHECK(std::get<std::string>(r.changed[0].new_value) == "B");
  CHECK(r.distance == 1.0);
  CHECK(std::abs(r.objective - o.objective) <= 1e-9);
  CHECK(r.x_prime == o.x_prime);
  CHECK(std::abs(r.objective - brute_force(model, q).objective) <= 1e-9);
}

TEST_CASE("analytic single feature: required |logit| above 1.0") {
  auto schema = one_continuous_schema(-5, 5, 0.1);
  const auto model = make_model(schema, {{1.0}}, 0.0);
  const Instance x(schema, {0.3});
  const auto q = make_query(model, x, std::tanh(0.5), Direction::kIncrease);
  const auto a = analytic_single_feature(model, q, "v");
  REQUIRE(a.has_value());
  CHECK(a->slot(0) == 1.1);
  const auto o = oracle_solve(model, q);
  REQUIRE(o.feasible);
  CHECK(o.x_prime.slot(0) == 1.1);
  CHECK(solve(model, q).x_prime.slot(0) == 1.1);
}

TEST_CASE("analytic single feature: zero weight and already beyond") {
  auto schema = two_continuous_schema();
  const auto model = make_model(schema, {{1.0}, {0.0}}, 0.0);
  const Instance x(schema, {0.3, 0.0});
  const auto q = make_query(model, x, 0.5, Direction::kIncrease);
  CHECK_FALSE(analytic_single_feature(model, q, "b").has_value());

  const Instance far(schema, {2.0, 0.0});
  ConfidenceQuery beyond{far, std::tanh(0.5), Direction::kIncrease, {"a", "b"}};
  const auto a = analytic_single_feature(model, beyond, "a");
  REQUIRE(a.has_value());
  CHECK(*a == far);
  CHECK(weighted_distance(model, far, *a) == 0.0);
}

TEST_CASE("oracle with k = 0 admits only x itself") {
  auto schema = one_continuous_schema(-5, 5, 0.5);
  const auto model = make_model(schema, {{1.0}}, 0.0);
  const Instance x(schema, {2.0});
  const double u = model.confidence(x, ConfidenceMeasure::kMargin);
  ConfidenceQuery satisfied{x, u - 0.1, Direction::kIncrease, {"v"}, 0};
  const auto yes = oracle_solve(model, satisfied);
  REQUIRE(yes.feasible);
  CHECK(yes.x_prime == x);
  CHECK(yes.changed.empty());
  ConfidenceQuery unsatisfied{x, u + 0.1, Direction::kIncrease, {"v"}, 0};
  CHECK_FALSE(oracle_solve(model, unsatisfied).feasible);
  CHECK(solve(model, unsatisfied).feasible == false);
}

TEST_CASE("V-shaped confidence: the optimum brackets the threshold crossing") {
  auto schema = one_continuous_schema(-5, 5, 0.5);
  const auto model = make_model(schema, {{1.0}}, 0.0);
  const Instance x(schema, {3.0});
  const auto q = make_query(model, x, 0.5, Direction::kDecrease);
  const double crossing = 2 * std::atanh(0.5);
  const auto o = oracle_solve(model, q);
  REQUIRE(o.feasible);
  const double v = o.x_prime.slot(0);
  CHECK(std::abs(v - crossing) < 0.5);
  CHECK(v == 1.0);
  CHECK(solve(model, q).x_prime == o.x_prime);
}

TEST_CASE("class-flip baseline") {
  auto schema = one_continuous_schema(-5, 5, 0.1);
  const auto model = make_model(schema, {{1.0}}, -0.25);
  const Instance x(schema, {-2.0});
  REQUIRE(model.predict_class(x) == Label::kNegative);

  auto best_by_enumeration = [&](double lambda) {
    double best = kInf, arg = 0;
    for (double v : schema->features[0].grid()) {
      const double p = model.predict_proba(Instance(schema, {v}));
      if (p < 0.5) continue;
      const double obj = lambda * (p - 0.5) * (p - 0.5) + std::abs(v + 2.0);
      if (obj < best) best = obj, arg = v;
    }
    return std::pair{best, arg};
  };
  for (double lambda : {0.0, 1.0, 1e6}) {
    const auto r = solve_class_flip(model, x, Label::kPositive, lambda);
    REQUIRE(r.feasible);
    const auto [obj, arg] = best_by_enumeration(lambda);
    CHECK(r.x_prime.slot(0) == arg);
    CHECK(r.objective == doctest::Approx(obj).epsilon(1e-12));
    CHECK(model.predict_class(r.x_prime) == Label::kPositive);
  }
  CHECK(solve_class_flip(model, x, Label::kPositive, 1e6).x_prime.slot(0) == 0.3);
  CHECK(solve_class_flip(model, x, Label::kPositive, 0.0).x_prime.slot(0) == 0.3);
  CHECK_THROWS_AS(solve_class_flip(model, x, Label::kNegative, 1.0), Error);

  auto narrow = one_continuous_schema(-5, -1, 0.5);
  const auto stuck = make_model(narrow, {{1.0}}, 0.0);
  CHECK_FALSE(solve_class_flip(stuck, Instance(narrow, {-2}), Label::kPositive, 1.0).feasible);
}

TEST_CASE("property: solve agrees with the oracle on random small models") {
  Rng rng(101);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto schema = random_schema(rng);
    const auto model = random_model(rng, schema);
    const auto q = random_query(rng, model, random_instance(rng, schema));
    const auto r = solve(model, q);
    const auto o = oracle_solve(model, q);
    CHECK(r.feasible == o.feasible);
    if (r.feasible && o.feasible) {
      ++feasible;
      CHECK(std::abs(r.objective - o.objective) <= 1e-9);
      CHECK(r.x_prime == o.x_prime);
    }
    const auto b = brute_force(model, q);
    CHECK(o.feasible == std::isfinite(b.objective));
    if (o.feasible) CHECK(std::abs(o.objective - b.objective) <= 1e-9);
    check_invariants(model, q, r);
  }
  CHECK(feasible > 50);
}

TEST_CASE("property: relaxing the query never raises the optimum") {
  Rng rng(103);
  for (int trial = 0; trial < 120; ++trial) {
    RandomModelOptions o;
    o.allow_immutable = false;
    auto schema = random_schema(rng, o);
    const auto model = random_model(rng, schema);
    auto q = random_query(rng, model, random_instance(rng, schema), 1);
    q.max_changed = 1;
    const double k1 = objective_or_inf(solve(model, q));
    q.max_changed = 2;
    const double k2 = objective_or_inf(solve(model, q));
    CHECK(k2 <= k1 + 1e-12);

    if (q.mutable_features.size() > 1) {
      auto narrow = q;
      narrow.mutable_features.erase(narrow.mutable_features.begin() +
                                    static_cast<long>(rng.index(narrow.mutable_features.size())));
      CHECK(objective_or_inf(solve(model, q)) <= objective_or_inf(solve(model, narrow)) + 1e-12);
    }
  }
}

TEST_CASE("property: optimum is no worse than any analytic single-feature candidate") {
  Rng rng(107);
  for (int trial = 0; trial < 150; ++trial) {
    auto schema = random_schema(rng);
    const auto model = random_model(rng, schema);
    const auto q = random_query(rng, model, random_instance(rng, schema));
    const auto r = solve(model, q);
    for (const auto& name : q.mutable_features) {
      const auto& f = schema->features[schema->require_index(name)];
      if (f.is_categorical()) continue;
      const auto a = analytic_single_feature(model, q, name);
      if (!a) continue;
      REQUIRE(r.feasible);
      const double u = model.confidence(*a, q.measure);
      const double obj = weighted_distance(model, q.x, *a) + std::abs(u - q.threshold);
      CHECK(r.objective <= obj + 1e-12);
      CHECK(r.distance <= weighted_distance(model, q.x, *a) + 1e-12);
    }
  }
}

TEST_CASE("property: consistent unit rescaling maps the argmin") {
  Rng rng(109);
  for (int trial = 0; trial < 60; ++trial) {
    const double s = std::vector<double>{2.0, 0.5, 4.0}[rng.index(3)];
    auto make = [&](double scale) {
      DatasetSchema d;
      d.features = {FeatureSchema::categorical("c", {"A", "B", "C"}),
                    FeatureSchema::continuous("v", 0, 10 * scale, scale)};
      d.target = "y";
      d.positive_label = "p";
      d.negative_label = "n";
      return make_schema(std::move(d));
    };
    const double w_c0 = rng.uniform(-1, 1), w_c1 = rng.uniform(-1, 1), w_c2 = rng.uniform(-1, 1);
    const double slope = rng.uniform(-0.8, 0.8);
    const double bias = rng.uniform(-2, 2);
    const double mad_weight = rng.uniform(0.1, 1.0);
    const double level = static_cast<double>(rng.index(3));
    const double v = static_cast<double>(rng.index(11));

    auto base_schema = make(1.0);
    MadWeights m1 = unit_mad_weights(*base_schema);
    m1.weights[1] = mad_weight;
    const auto base = make_model(base_schema, {{w_c0, w_c1, w_c2}, {slope}}, bias, 0.5, m1);
    auto scaled_schema = make(s);
    MadWeights ms = unit_mad_weights(*scaled_schema);
    ms.weights[1] = mad_weight / s;
    const auto scaled = make_model(scaled_schema, {{w_c0, w_c1, w_c2}, {slope / s}}, bias, 0.5, ms);

    const Instance x(base_schema, {level, v});
    const Instance xs(scaled_schema, {level, v * s});
    const auto measure = kAllMeasures[rng.index(4)];
    const double u = base.confidence(x, measure);
    const bool inc = rng.index(2) == 0;
    const double t = inc ? rng.uniform(u, 1) : rng.uniform(0, u);
    const auto dir = inc ? Direction::kIncrease : Direction::kDecrease;
    const auto r = solve(base, make_query(base, x, t, dir, {}, 2, measure));
    const auto rs = solve(scaled, make_query(scaled, xs, t, dir, {}, 2, measure));
    REQUIRE(r.feasible == rs.feasible);
    if (!r.feasible) continue;
    CHECK(std::abs(r.objective - rs.objective) <= 1e-9);
    CHECK(rs.x_prime.slot(0) == r.x_prime.slot(0));
    CHECK(rs.x_prime.slot(1) == doctest::Approx(r.x_prime.slot(1) * s).epsilon(1e-12));
  }
}

TEST_CASE("solve_top lists distinct results in objective order") {
  auto schema = two_continuous_schema();
  const auto model = make_model(schema, {{1.0}, {-2.0}}, 0.0);
  const Instance x(schema, {0.5, 0.0});
  const auto q = make_query(model, x, 0.2, Direction::kDecrease);
  const auto top = solve_top(model, q, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].x_prime == solve(model, q).x_prime);
  for (std::size_t i = 1; i < top.size(); ++i) {
    CHECK(top[i].objective >= top[i - 1].objective);
    CHECK_FALSE(top[i].x_prime == top[i - 1].x_prime);
  }
}

TEST_CASE("oracle guard rejects oversized grids") {
  DatasetSchema s;
  for (const char* n : {"a", "b", "c", "d"}) {
    s.features.push_back(FeatureSchema::continuous(n, 0, 10, 0.001));
  }
  s.target = "y";
  s.positive_label = "p";
  s.negative_label = "n";
  auto schema = make_schema(std::move(s));
  const auto model = make_model(schema, {{0.1}, {0.1}, {0.1}, {0.1}}, 0.0);
  const auto q = make_query(model, Instance(schema, {5, 5, 5, 5}), 0.1, Direction::kDecrease);
  try {
    oracle_solve(model, q);
    FAIL("expected the grid guard");
  } catch (const Error& e) {
    CHECK(e.code() == "grid_guard");
  }
  // Two changes move the logit by at most 1.0, short of the 1.8 needed.
  const auto r = solve(model, q);
  CHECK_FALSE(r.feasible);
  REQUIRE(r.infeasibility.has_value());
  CHECK(r.infeasibility->binding == BindingConstraint::kChangeBudget);
  const auto q2 = make_query(model, Instance(schema, {5, 5, 5, 5}), 0.6, Direction::kDecrease);
  const auto r2 = solve(model, q2);
  REQUIRE(r2.feasible);
  CHECK(r2.confidence <= 0.6 - 1e-6);
  CHECK(r2.changed.size() == 2);
}

TEST_CASE("make_query validation") {
  auto schema = two_continuous_schema();
  const auto model = make_model(schema, {{1.0}, {-2.0}}, 0.0);
  const Instance x(schema, {0.5, 0.0});
  CHECK_THROWS_AS(make_query(model, x, 1.5, Direction::kDecrease), Error);
  CHECK_THROWS_AS(make_query(model, x, 0.9, Direction::kDecrease), Error);
  CHECK_THROWS_AS(make_query(model, x, 0.1, Direction::kIncrease), Error);
  CHECK_THROWS_AS(make_query(model, x, 0.1, Direction::kDecrease, {"zzz"}), Error);
  CHECK_THROWS_AS(make_query(model, x, 0.1, Direction::kDecrease, {}, 0), Error);
  const auto def = make_query(model, x, std::nullopt, Direction::kDecrease);
  CHECK(def.threshold == model.confidence(x, ConfidenceMeasure::kMargin));
  CHECK(def.mutable_features == std::vector<std::string>{"a", "b"});
  CHECK(parse_direction("increase") == Direction::kIncrease);
  CHECK_THROWS_AS(parse_direction("up"), Error);
}

TEST_CASE("Adult-size query is solved and matches the oracle") {
  const auto model = occupation_model();
  const auto x = occupation_original(model.schema_ptr());
  const auto q = make_query(model, x, 0.45, Direction::kDecrease);
  const auto r = solve(model, q);
  const auto o = oracle_solve(model, q);
  REQUIRE(r.feasible);
  CHECK(std::abs(r.objective - o.objective) <= 1e-9);
  CHECK(r.x_prime == o.x_prime);
  check_invariants(model, q, r);
}
