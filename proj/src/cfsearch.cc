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

#include "confcf/cfsearch.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace confcf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Absolute slack used when pruning with bounds computed along a different
// summation order than the canonical evaluation.
constexpr double kPruneTolerance = 1e-9;
constexpr double kLogitWiden = 1e-9;

// The part of a search problem that depends on the counterfactual's
// probability only: feasibility, the penalty term, and a lower bound of the
// penalty over a probability interval.
class Criterion {
 public:
  virtual ~Criterion() = default;
  virtual bool feasible(double p) const = 0;
  virtual double penalty(double p) const = 0;
  // Min of penalty over feasible p in [lo, hi], or a value below it; +inf
  // when no feasible p can lie in the interval.
  virtual double lower_bound(double lo, double hi) const = 0;
  // Whether the non-class constraints alone could be met in [lo, hi].
  virtual bool reachable_ignoring_class(double lo, double hi) const = 0;
};

class ConfidenceCriterion final : public Criterion {
 public:
  ConfidenceCriterion(const LogisticModel& model, const ConfidenceQuery& q)
      : model_(model),
        threshold_(q.threshold),
        epsilon_(q.epsilon),
        direction_(q.direction),
        measure_(q.measure),
        boundary_(model.decision_boundary()),
        factual_class_(model.class_of(model.predict_proba(q.x.slots()))) {}

  double confidence(double p) const {
    return confidence_from_probability(p, measure_);
  }

  bool meets_threshold(double u) const {
    return direction_ == Direction::kIncrease ? u >= threshold_ + epsilon_
                                              : u <= threshold_ - epsilon_;
  }

  bool feasible(double p) const override {
    return model_.class_of(p) == factual_class_ && meets_threshold(confidence(p));
  }

  double penalty(double p) const override {
    return std::abs(confidence(p) - threshold_);
  }

  double lower_bound(double lo, double hi) const override {
    if (factual_class_ == Label::kPositive) {
      lo = std::max(lo, boundary_);
    } else {
      hi = std::min(hi, boundary_);
    }
    if (lo > hi) return kInf;
    return bound_in(lo, hi);
  }

  bool reachable_ignoring_class(double lo, double hi) const override {
    return bound_in(lo, hi) < kInf;
  }

 private:
  double bound_in(double lo, double hi) const {
    const double u_min = confidence(std::clamp(0.5, lo, hi));
    const double u_max = std::max(confidence(lo), confidence(hi));
    if (direction_ == Direction::kIncrease) {
      const double need = threshold_ + epsilon_;
      if (u_max < need - 1e-12) return kInf;
      return std::max(0.0, std::max(u_min, need) - threshold_);
    }
    const double need = threshold_ - epsilon_;
    if (u_min > need + 1e-12) return kInf;
    return std::max(0.0, threshold_ - std::min(u_max, need));
  }

  const LogisticModel& model_;
  double threshold_;
  double epsilon_;
  Direction direction_;
  ConfidenceMeasure measure_;
  double boundary_;
  Label factual_class_;
};

class ClassFlipCriterion final : public Criterion {
 public:
  ClassFlipCriterion(const LogisticModel& model, Label desired, double lambda)
      : model_(model),
        desired_(desired),
        lambda_(lambda),
        boundary_(model.decision_boundary()) {}

  bool feasible(double p) const override { return model_.class_of(p) == desired_; }

  double penalty(double p) const override {
    return lambda_ * (p - boundary_) * (p - boundary_);
  }

  double lower_bound(double lo, double hi) const override {
    if (desired_ == Label::kPositive) {
      lo = std::max(lo, boundary_);
    } else {
      hi = std::min(hi, boundary_);
    }
    if (lo > hi) return kInf;
    if (lo <= boundary_ && boundary_ <= hi) return 0.0;
    const double gap = std::min(std::abs(lo - boundary_), std::abs(hi - boundary_));
    return lambda_ * gap * gap;
  }

  bool reachable_ignoring_class(double, double) const override { return true; }

 private:
  const LogisticModel& model_;
  Label desired_;
  double lambda_;
  double boundary_;
};

// One searchable feature: its non-factual grid values sorted by change cost.
struct Axis {
  std::size_t feature = 0;
  std::string name;
  struct Option {
    std::size_t grid_index;
    double slot;
    double cost;
    double delta;  // logit change relative to the factual value
  };
  std::vector<Option> options;
  double max_delta = 0.0;  // >= 0
  double min_delta = 0.0;  // <= 0
};

double change_cost(const LogisticModel& model, std::size_t j, double from,
                   double to) {
  if (model.schema().features[j].is_categorical()) {
    return from == to ? 0.0 : kCategoricalChangeCost;
  }
  return model.mad().weights[j] * std::abs(to - from);
}

std::vector<Axis> build_axes(const LogisticModel& model, const Instance& x,
                             const std::vector<std::size_t>& features) {
  std::vector<Axis> axes;
  for (std::size_t j : features) {
    const auto& f = model.schema().features[j];
    Axis axis;
    axis.feature = j;
    axis.name = f.name;
    const double base = model.contribution(j, x.slot(j));
    for (std::size_t g = 0; g < f.grid_size(); ++g) {
      const double slot = f.grid_value(g);
      if (slot == x.slot(j)) continue;
      const double delta = model.contribution(j, slot) - base;
      axis.options.push_back(
          {g, slot, change_cost(model, j, x.slot(j), slot), delta});
      axis.max_delta = std::max(axis.max_delta, delta);
      axis.min_delta = std::min(axis.min_delta, delta);
    }
    std::stable_sort(axis.options.begin(), axis.options.end(),
                     [](const Axis::Option& a, const Axis::Option& b) {
                       return a.cost < b.cost;
                     });
    if (!axis.options.empty()) axes.push_back(std::move(axis));
  }
  return axes;
}

// Canonically evaluated change set. `changes` holds (feature, grid index)
// pairs sorted by feature index; `key` holds (name, grid index) pairs sorted
// by name for tie-breaking.
struct Candidate {
  std::vector<std::pair<std::size_t, std::size_t>> changes;
  std::vector<std::pair<std::string, std::size_t>> key;
  std::vector<double> slots;
  double probability = 0.0;
  double distance = 0.0;
  double objective = 0.0;
  bool feasible = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  if (a.key.size() != b.key.size()) return a.key.size() < b.key.size();
  for (std::size_t i = 0; i < a.key.size(); ++i) {
    if (a.key[i].first != b.key[i].first) return a.key[i].first < b.key[i].first;
  }
  for (std::size_t i = 0; i < a.key.size(); ++i) {
    if (a.key[i].second != b.key[i].second) {
      return a.key[i].second < b.key[i].second;
    }
  }
  return false;
}

// The single evaluation path shared by solve and the oracle, so equal change
// sets always produce bit-identical objectives.
Candidate evaluate(const LogisticModel& model, const Criterion& criterion,
                   const Instance& x,
                   std::vector<std::pair<std::size_t, std::size_t>> changes) {
  std::sort(changes.begin(), changes.end());
  const auto& schema = model.schema();
  Candidate c;
  c.slots.assign(x.slots().begin(), x.slots().end());
  for (const auto& [j, g] : changes) {
    c.slots[j] = schema.features[j].grid_value(g);
  }
  double distance = 0.0;
  for (std::size_t j = 0; j < c.slots.size(); ++j) {
    distance += change_cost(model, j, x.slot(j), c.slots[j]);
  }
  c.probability = model.predict_proba(c.slots);
  c.distance = distance;
  c.objective = distance + criterion.penalty(c.probability);
  c.feasible = criterion.feasible(c.probability);
  for (const auto& [j, g] : changes) c.key.emplace_back(schema.features[j].name, g);
  std::sort(c.key.begin(), c.key.end());
  c.changes = std::move(changes);
  return c;
}

class TopCandidates {
 public:
  explicit TopCandidates(std::size_t m) : m_(std::max<std::size_t>(m, 1)) {}

  double bound() const { return items_.size() < m_ ? kInf : items_.back().objective; }

  void offer(Candidate c) {
    if (!c.feasible) return;
    for (const auto& item : items_) {
      if (item.changes == c.changes) return;
    }
    auto pos = std::find_if(items_.begin(), items_.end(),
                            [&](const Candidate& it) { return better(c, it); });
    items_.insert(pos, std::move(c));
    if (items_.size() > m_) items_.pop_back();
  }

  std::vector<Candidate>& items() { return items_; }

 private:
  std::size_t m_;
  std::vector<Candidate> items_;
};

class BranchAndBound {
 public:
  BranchAndBound(const LogisticModel& model, const Criterion& criterion,
                 const Instance& x, const std::vector<Axis>& axes,
                 std::size_t max_changed, TopCandidates& top)
      : model_(model),
        criterion_(criterion),
        x_(x),
        axes_(axes),
        k_(std::min(max_changed, axes.size())),
        top_(top) {
    const std::size_t n = axes_.size();
    up_.assign(n + 1, std::vector<double>(k_ + 1, 0.0));
    down_.assign(n + 1, std::vector<double>(k_ + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> ups, downs;
      for (std::size_t a = i; a < n; ++a) {
        ups.push_back(axes_[a].max_delta);
        downs.push_back(axes_[a].min_delta);
      }
      std::sort(ups.begin(), ups.end(), std::greater<>());
      std::sort(downs.begin(), downs.end());
      for (std::size_t r = 1; r <= k_; ++r) {
        up_[i][r] = up_[i][r - 1] + (r <= ups.size() ? ups[r - 1] : 0.0);
        down_[i][r] = down_[i][r - 1] + (r <= downs.size() ? downs[r - 1] : 0.0);
      }
    }
  }

  void run() { visit(0, model_.logit(x_.slots()), 0.0); }

 private:
  void visit(std::size_t i, double y, double dist) {
    const std::size_t used = changes_.size();
    const std::size_t r = k_ - used;
    const double widen = kLogitWiden * (1.0 + std::abs(y));
    const double lo = sigmoid(y + down_[i][r] - widen);
    const double hi = sigmoid(y + up_[i][r] + widen);
    const double lb = dist + criterion_.lower_bound(lo, hi);
    if (lb == kInf || lb > top_.bound() + kPruneTolerance) return;
    if (i == axes_.size() || used == k_) {
      top_.offer(evaluate(model_, criterion_, x_, changes_));
      return;
    }

    visit(i + 1, y, dist);
    const Axis& axis = axes_[i];
    for (const auto& opt : axis.options) {
      if (dist + opt.cost > top_.bound() + kPruneTolerance) break;
      changes_.emplace_back(axis.feature, opt.grid_index);
      visit(i + 1, y + opt.delta, dist + opt.cost);
      changes_.pop_back();
    }
  }

  const LogisticModel& model_;
  const Criterion& criterion_;
  const Instance& x_;
  const std::vector<Axis>& axes_;
  std::size_t k_;
  TopCandidates& top_;
  std::vector<std::vector<double>> up_;
  std::vector<std::vector<double>> down_;
  std::vector<std::pair<std::size_t, std::size_t>> changes_;
};

std::vector<std::size_t> search_features(const LogisticModel& model,
                                         const std::vector<std::string>& names) {
  std::set<std::size_t> picked;
  for (const auto& name : names) picked.insert(model.schema().require_index(name));
  std::vector<std::size_t> out;
  for (std::size_t j : picked) {
    if (model.mad().searchable[j]) out.push_back(j);
  }
  return out;
}

InfeasibleReport diagnose(const LogisticModel& model, const Criterion& criterion,
                          const Instance& x, const std::vector<Axis>& axes,
                          std::size_t max_changed) {
  if (axes.empty()) {
    return {BindingConstraint::kNoMutableFeatures,
            "no mutable feature can change"};
  }
  const double y = model.logit(x.slots());
  auto interval = [&](std::size_t r) {
    std::vector<double> ups, downs;
    for (const auto& a : axes) {
      ups.push_back(a.max_delta);
      downs.push_back(a.min_delta);
    }
    std::sort(ups.begin(), ups.end(), std::greater<>());
    std::sort(downs.begin(), downs.end());
    double up = 0.0, down = 0.0;
    for (std::size_t i = 0; i < std::min(r, axes.size()); ++i) {
      up += ups[i];
      down += downs[i];
    }
    return std::pair{sigmoid(y + down), sigmoid(y + up)};
  };
  const auto [lo_all, hi_all] = interval(axes.size());
  if (criterion.lower_bound(lo_all, hi_all) == kInf) {
    if (criterion.reachable_ignoring_class(lo_all, hi_all)) {
      return {BindingConstraint::kClassBoundary,
              "the threshold is only reachable across the decision boundary"};
    }
    return {BindingConstraint::kThreshold,
            "no admissible value reaches the confidence threshold"};
  }
  if (max_changed < axes.size()) {
    const auto [lo_k, hi_k] = interval(max_changed);
    if (criterion.lower_bound(lo_k, hi_k) == kInf) {
      return {BindingConstraint::kChangeBudget,
              "the threshold needs more than " + std::to_string(max_changed) +
                  " changed features"};
    }
  }
  return {BindingConstraint::kGridResolution,
          "no grid point satisfies the constraints"};
}

CounterfactualResult to_result(const LogisticModel& model, const Instance& x,
                               const Candidate& c, ConfidenceMeasure measure) {
  CounterfactualResult r{true, Instance(x.schema_ptr(), c.slots)};
  r.confidence = confidence_from_probability(c.probability, measure);
  r.predicted_class = model.class_of(c.probability);
  r.distance = c.distance;
  r.objective = c.objective;
  for (const auto& [j, g] : c.changes) {
    r.changed.push_back({model.schema().features[j].name, x.value(j),
                         r.x_prime.value(j)});
  }
  return r;
}

CounterfactualResult infeasible_result(const LogisticModel& model,
                                       const Instance& x, InfeasibleReport report,
                                       ConfidenceMeasure measure) {
  CounterfactualResult r{false, x};
  const double p = model.predict_proba(x);
  r.confidence = confidence_from_probability(p, measure);
  r.predicted_class = model.class_of(p);
  r.infeasibility = std::move(report);
  return r;
}

void seed_with_analytic(const LogisticModel& model, const ConfidenceQuery& query,
                        const Criterion& criterion, const std::vector<Axis>& axes,
                        TopCandidates& top) {
  if (query.max_changed == 0) return;
  const auto& schema = model.schema();
  for (const auto& axis : axes) {
    if (schema.features[axis.feature].is_categorical()) continue;
    if (model.slope(axis.feature) == 0.0) continue;
    auto candidate = analytic_single_feature(model, query, axis.name);
    if (!candidate) continue;
    std::vector<std::pair<std::size_t, std::size_t>> changes;
    const double v = candidate->slot(axis.feature);
    if (v != query.x.slot(axis.feature)) {
      auto g = schema.features[axis.feature].grid_index(v);
      if (!g) continue;
      changes.emplace_back(axis.feature, *g);
    }
    top.offer(evaluate(model, criterion, query.x, std::move(changes)));
  }
}

}  // namespace

std::string_view to_string(Direction direction) {
  return direction == Direction::kIncrease ? "increase" : "decrease";
}

Direction parse_direction(std::string_view text) {
  if (text == "increase") return Direction::kIncrease;
  if (text == "decrease") return Direction::kDecrease;
  throw Error("query", "direction must be 'increase' or 'decrease'", "direction");
}

std::string_view to_string(BindingConstraint constraint) {
  switch (constraint) {
    case BindingConstraint::kNoMutableFeatures:
      return "mutable_features";
    case BindingConstraint::kThreshold:
      return "threshold";
    case BindingConstraint::kClassBoundary:
      return "class_boundary";
    case BindingConstraint::kChangeBudget:
      return "max_changed_features";
    case BindingConstraint::kGridResolution:
      return "grid_resolution";
  }
  return "threshold";
}

void validate_query(const LogisticModel& model, const ConfidenceQuery& query) {
  model.check_instance(query.x);
  if (!(query.threshold >= 0.0 && query.threshold <= 1.0)) {
    throw Error("query", "threshold must lie in [0, 1]", "threshold");
  }
  if (!(query.epsilon >= 0.0) || !std::isfinite(query.epsilon)) {
    throw Error("query", "epsilon must be a non-negative number", "epsilon");
  }
  std::set<std::string> seen;
  for (const auto& name : query.mutable_features) {
    auto j = model.schema().index_of(name);
    if (!j) {
      throw Error("query", "unknown feature '" + name + "'", "mutable_features");
    }
    if (!model.schema().features[*j].is_mutable) {
      throw Error("query", "feature '" + name + "' is immutable in the schema",
                  "mutable_features");
    }
    if (!seen.insert(name).second) {
      throw Error("query", "feature '" + name + "' listed twice",
                  "mutable_features");
    }
  }
}

ConfidenceQuery make_query(const LogisticModel& model, Instance x,
                           std::optional<double> threshold, Direction direction,
                           std::vector<std::string> mutable_features,
                           std::size_t max_changed, ConfidenceMeasure measure,
                           double epsilon) {
  model.check_instance(x);
  const double u = model.confidence(x, measure);
  if (mutable_features.empty()) {
    for (const auto& f : model.schema().features) {
      if (f.is_mutable) mutable_features.push_back(f.name);
    }
  }
  ConfidenceQuery q{std::move(x), threshold.value_or(u), direction,
                    std::move(mutable_features), max_changed, epsilon, measure};
  validate_query(model, q);
  if (max_changed < 1) {
    throw Error("query", "max_changed_features must be at least 1", "k");
  }
  if (direction == Direction::kIncrease && !(q.threshold > u - epsilon)) {
    throw Error("query",
                "threshold must exceed the current confidence to ask for an increase",
                "threshold");
  }
  if (direction == Direction::kDecrease && !(q.threshold < u + epsilon)) {
    throw Error("query",
                "threshold must be below the current confidence to ask for a decrease",
                "threshold");
  }
  return q;
}

double weighted_distance(const LogisticModel& model, const Instance& a,
                         const Instance& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    d += change_cost(model, j, a.slot(j), b.slot(j));
  }
  return d;
}

std::vector<CounterfactualResult> solve_top(const LogisticModel& model,
                                            const ConfidenceQuery& query,
                                            std::size_t m) {
  validate_query(model, query);
  ConfidenceCriterion criterion(model, query);
  const auto axes =
      build_axes(model, query.x, search_features(model, query.mutable_features));
  TopCandidates top(m);
  seed_with_analytic(model, query, criterion, axes, top);
  BranchAndBound(model, criterion, query.x, axes, query.max_changed, top).run();

  std::vector<CounterfactualResult> out;
  for (const auto& c : top.items()) {
    out.push_back(to_result(model, query.x, c, query.measure));
  }
  if (out.empty()) {
    out.push_back(infeasible_result(
        model, query.x,
        diagnose(model, criterion, query.x, axes, query.max_changed),
        query.measure));
  }
  return out;
}

CounterfactualResult solve(const LogisticModel& model,
                           const ConfidenceQuery& query) {
  return solve_top(model, query, 1).front();
}

CounterfactualResult oracle_solve(const LogisticModel& model,
                                  const ConfidenceQuery& query) {
  validate_query(model, query);
  ConfidenceCriterion criterion(model, query);
  const auto axes =
      build_axes(model, query.x, search_features(model, query.mutable_features));
  const std::size_t n = axes.size();
  const std::size_t k = std::min(query.max_changed, n);

  // Candidate count: sum over subsets of size <= k of the product of option
  // counts, via the elementary symmetric polynomials of the option counts.
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (const auto& a : axes) {
    for (std::size_t r = k; r >= 1; --r) {
      e[r] += e[r - 1] * static_cast<double>(a.options.size());
    }
  }
  double total = 0.0;
  for (double v : e) total += v;
  if (total > kOracleGridGuard) {
    throw Error("grid_guard", "oracle enumeration would visit " +
                                  std::to_string(static_cast<long long>(total)) +
                                  " candidates");
  }

  TopCandidates top(1);
  std::vector<std::size_t> subset;
  std::vector<std::pair<std::size_t, std::size_t>> changes;
  // Enumerate subsets in lexicographic order, then every value combination.
  auto enumerate_values = [&](auto&& self, std::size_t pos) -> void {
    if (pos == subset.size()) {
      top.offer(evaluate(model, criterion, query.x, changes));
      return;
    }
    const Axis& axis = axes[subset[pos]];
    for (const auto& opt : axis.options) {
      changes.emplace_back(axis.feature, opt.grid_index);
      self(self, pos + 1);
      changes.pop_back();
    }
  };
  auto enumerate_subsets = [&](auto&& self, std::size_t start) -> void {
    enumerate_values(enumerate_values, 0);
    if (subset.size() == k) return;
    for (std::size_t a = start; a < n; ++a) {
      subset.push_back(a);
      self(self, a + 1);
      subset.pop_back();
    }
  };
  enumerate_subsets(enumerate_subsets, 0);

  if (top.items().empty()) {
    return infeasible_result(model, query.x,
                             diagnose(model, criterion, query.x, axes, k),
                             query.measure);
  }
  return to_result(model, query.x, top.items().front(), query.measure);
}

std::optional<Instance> analytic_single_feature(const LogisticModel& model,
                                                const ConfidenceQuery& query,
                                                std::string_view feature) {
  const auto& schema = model.schema();
  const std::size_t j = schema.require_index(feature);
  const auto& f = schema.features[j];
  if (f.is_categorical()) {
    throw Error("query", "analytic search needs a continuous feature",
                std::string(feature));
  }
  const double beta = model.slope(j);
  if (beta == 0.0) return std::nullopt;

  ConfidenceCriterion criterion(model, query);
  const Instance& x = query.x;
  if (criterion.feasible(model.predict_proba(x.slots()))) return x;

  // Feasible logits: the factual class side intersected with the threshold
  // band on |y|.
  const double y0 = model.logit(x.slots());
  const double y_boundary = logit_of(model.decision_boundary());
  const bool positive_side = y0 >= y_boundary;
  std::vector<std::pair<double, double>> bands;
  if (query.direction == Direction::kIncrease) {
    const double a = abs_logit_for_confidence(query.threshold + query.epsilon,
                                              query.measure);
    if (a == kInf) return std::nullopt;
    bands = {{-kInf, -a}, {a, kInf}};
  } else {
    const double need = query.threshold - query.epsilon;
    if (need < 0.0) return std::nullopt;
    const double b = abs_logit_for_confidence(need, query.measure);
    bands = {{-b, b}};
  }

  const double lo_v = f.c_min - f.step;
  const double hi_v = f.c_max + f.step;
  std::set<std::size_t> probe;
  const double last_index = static_cast<double>(f.grid_size() - 1);
  auto add_probe = [&](double idx) {
    for (double d = -1; d <= 1; ++d) {
      const double v = std::clamp(idx + d, 0.0, last_index);
      probe.insert(static_cast<std::size_t>(v));
    }
  };
  for (auto [ylo, yhi] : bands) {
    if (positive_side) {
      ylo = std::max(ylo, y_boundary);
    } else {
      yhi = std::min(yhi, y_boundary);
    }
    if (ylo > yhi) continue;
    double v1 = ylo == -kInf ? (beta > 0 ? lo_v : hi_v) : x.slot(j) + (ylo - y0) / beta;
    double v2 = yhi == kInf ? (beta > 0 ? hi_v : lo_v) : x.slot(j) + (yhi - y0) / beta;
    if (v1 > v2) std::swap(v1, v2);
    v1 = std::max(v1, lo_v);
    v2 = std::min(v2, hi_v);
    if (v1 > v2) continue;
    add_probe(std::ceil((v1 - f.c_min) / f.step));
    add_probe(std::floor((v2 - f.c_min) / f.step));
  }

  std::optional<std::size_t> best;
  double best_gap = kInf;
  std::vector<double> slots(x.slots().begin(), x.slots().end());
  for (std::size_t g : probe) {
    const double v = f.grid_value(g);
    slots[j] = v;
    if (!criterion.feasible(model.predict_proba(slots))) continue;
    const double gap = std::abs(v - x.slot(j));
    if (gap < best_gap) {
      best_gap = gap;
      best = g;
    }
  }
  if (!best) return std::nullopt;
  return x.with_slot(j, f.grid_value(*best));
}

CounterfactualResult solve_class_flip(const LogisticModel& model, const Instance& x,
                                   Label desired, double lambda,
                                   std::optional<std::size_t> max_changed) {
  model.check_instance(x);
  if (model.predict_class(x) == desired) {
    throw Error("precondition", "instance is already in the desired class",
                "desired_class");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error("query", "lambda must be a non-negative number", "lambda");
  }
  std::vector<std::string> names;
  for (const auto& f : model.schema().features) {
    if (f.is_mutable) names.push_back(f.name);
  }
  ClassFlipCriterion criterion(model, desired, lambda);
  const auto axes = build_axes(model, x, search_features(model, names));
  const std::size_t k = max_changed.value_or(axes.size());
  TopCandidates top(1);
  BranchAndBound(model, criterion, x, axes, k, top).run();
  if (top.items().empty()) {
    return infeasible_result(model, x, diagnose(model, criterion, x, axes, k),
                             ConfidenceMeasure::kMargin);
  }
  return to_result(model, x, top.items().front(), ConfidenceMeasure::kMargin);
}

}  // namespace confcf
