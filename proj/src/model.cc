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

#include "confcf/model.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace confcf {
namespace {

double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double binary_entropy_bits(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace

std::string_view to_string(ConfidenceMeasure measure) {
  switch (measure) {
    case ConfidenceMeasure::kLeastConfidence:
      return "least_confidence";
    case ConfidenceMeasure::kMargin:
      return "margin";
    case ConfidenceMeasure::kRatio:
      return "ratio";
    case ConfidenceMeasure::kEntropy:
      return "entropy";
  }
  return "margin";
}

ConfidenceMeasure parse_measure(std::string_view text) {
  for (auto m : kAllMeasures) {
    if (to_string(m) == text) return m;
  }
  throw Error("query", "unknown confidence measure '" + std::string(text) + "'",
              "measure");
}

double sigmoid(double logit) {
  if (logit >= 0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

double logit_of(double probability) {
  if (probability <= 0.0) return -std::numeric_limits<double>::infinity();
  if (probability >= 1.0) return std::numeric_limits<double>::infinity();
  return std::log(probability / (1.0 - probability));
}

double confidence_from_probability(double probability,
                                   ConfidenceMeasure measure) {
  const double p = probability >= 0.5 ? probability : 1.0 - probability;
  switch (measure) {
    case ConfidenceMeasure::kMargin:
    case ConfidenceMeasure::kLeastConfidence:
      return std::abs(2.0 * probability - 1.0);
    case ConfidenceMeasure::kRatio:
      return 1.0 - (1.0 - p) / p;
    case ConfidenceMeasure::kEntropy:
      return 1.0 - binary_entropy_bits(probability);
  }
  return 0.0;
}

double abs_logit_for_confidence(double confidence, ConfidenceMeasure measure) {
  if (confidence <= 0.0) return 0.0;
  if (confidence >= 1.0) return std::numeric_limits<double>::infinity();
  switch (measure) {
    case ConfidenceMeasure::kMargin:
    case ConfidenceMeasure::kLeastConfidence:
      return 2.0 * std::atanh(confidence);
    case ConfidenceMeasure::kRatio:
      return -std::log1p(-confidence);
    case ConfidenceMeasure::kEntropy: {
      double lo = 0.0, hi = 1.0;
      while (confidence_from_probability(sigmoid(hi), measure) < confidence) {
        hi *= 2.0;
        if (hi > 1e3) return std::numeric_limits<double>::infinity();
      }
      for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid == lo || mid == hi) break;
        if (confidence_from_probability(sigmoid(mid), measure) < confidence) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return hi;
    }
  }
  return 0.0;
}

std::vector<FeatureEncoding> identity_encoding(const DatasetSchema& schema) {
  std::vector<FeatureEncoding> out;
  std::size_t offset = 0;
  for (const auto& f : schema.features) {
    FeatureEncoding e;
    e.offset = offset;
    e.width = f.is_categorical() ? f.levels.size() : 1;
    offset += e.width;
    out.push_back(e);
  }
  return out;
}

std::size_t encoded_dimension(std::span<const FeatureEncoding> encoding) {
  std::size_t d = 0;
  for (const auto& e : encoding) d = std::max(d, e.offset + e.width);
  return d;
}

LogisticModel::LogisticModel(SchemaPtr schema,
                             std::vector<FeatureEncoding> encoding,
                             std::vector<double> weights, double bias,
                             double decision_boundary, MadWeights mad)
    : schema_(std::move(schema)),
      encoding_(std::move(encoding)),
      weights_(std::move(weights)),
      bias_(bias),
      decision_boundary_(decision_boundary),
      mad_(std::move(mad)) {
  if (!schema_) throw Error("model", "model has no schema");
  schema_digest_ = schema_->digest();
  const auto& features = schema_->features;
  if (encoding_.size() != features.size()) {
    throw Error("model", "encoding does not cover every feature");
  }
  std::size_t expected_dim = 0;
  for (std::size_t j = 0; j < features.size(); ++j) {
    const auto& e = encoding_[j];
    const std::size_t width =
        features[j].is_categorical() ? features[j].levels.size() : 1;
    if (e.width != width) {
      throw Error("model", "encoding width mismatch for '" + features[j].name + "'",
                  features[j].name);
    }
    if (!features[j].is_categorical() && !(e.scale > 0.0)) {
      throw Error("model", "non-positive scale for '" + features[j].name + "'",
                  features[j].name);
    }
    expected_dim += width;
  }
  if (encoded_dimension(encoding_) != expected_dim ||
      weights_.size() != expected_dim) {
    throw Error("model", "weight vector has " + std::to_string(weights_.size()) +
                             " entries, encoded dimension is " +
                             std::to_string(expected_dim));
  }
  if (!(decision_boundary_ > 0.0 && decision_boundary_ < 1.0)) {
    throw Error("model", "decision boundary must lie in (0, 1)");
  }
  if (mad_.weights.size() != features.size() ||
      mad_.searchable.size() != features.size()) {
    throw Error("model", "MAD weights do not cover every feature");
  }
  for (double w : mad_.weights) {
    if (!std::isfinite(w) || !(w > 0.0)) {
      throw Error("model", "MAD weights must be finite and positive");
    }
  }
}

double LogisticModel::contribution(std::size_t j, double slot) const {
  const auto& e = encoding_[j];
  if (schema_->features[j].is_categorical()) {
    return weights_[e.offset + static_cast<std::size_t>(slot)];
  }
  return weights_[e.offset] * ((slot - e.mean) / e.scale);
}

double LogisticModel::slope(std::size_t j) const {
  const auto& e = encoding_[j];
  return weights_[e.offset] / e.scale;
}

std::vector<double> LogisticModel::encode(const Instance& x) const {
  check_instance(x);
  std::vector<double> out(weights_.size(), 0.0);
  for (std::size_t j = 0; j < encoding_.size(); ++j) {
    const auto& e = encoding_[j];
    if (schema_->features[j].is_categorical()) {
      out[e.offset + static_cast<std::size_t>(x.slot(j))] = 1.0;
    } else {
      out[e.offset] = (x.slot(j) - e.mean) / e.scale;
    }
  }
  return out;
}

double LogisticModel::logit(std::span<const double> slots) const {
  double y = bias_;
  for (std::size_t j = 0; j < slots.size(); ++j) y += contribution(j, slots[j]);
  return y;
}

double LogisticModel::logit(const Instance& x) const {
  check_instance(x);
  return logit(x.slots());
}

double LogisticModel::predict_proba(std::span<const double> slots) const {
  return sigmoid(logit(slots));
}

double LogisticModel::predict_proba(const Instance& x) const {
  return sigmoid(logit(x));
}

Label LogisticModel::class_of(double probability) const {
  return probability >= decision_boundary_ ? Label::kPositive : Label::kNegative;
}

Label LogisticModel::predict_class(const Instance& x) const {
  return class_of(predict_proba(x));
}

double LogisticModel::confidence(const Instance& x,
                                 ConfidenceMeasure measure) const {
  return confidence_from_probability(predict_proba(x), measure);
}

const std::string& LogisticModel::label_text(Label label) const {
  return label == Label::kPositive ? schema_->positive_label
                                   : schema_->negative_label;
}

Label LogisticModel::parse_label(std::string_view text) const {
  if (text == schema_->positive_label || text == "positive") {
    return Label::kPositive;
  }
  if (text == schema_->negative_label || text == "negative") {
    return Label::kNegative;
  }
  throw Error("query", "unknown class label '" + std::string(text) + "'");
}

void LogisticModel::check_instance(const Instance& x) const {
  if (x.schema_ptr() == schema_) return;
  if (x.schema().digest() != schema_digest_) {
    throw Error("model", "instance schema does not match the model schema");
  }
}

LogisticObjective::LogisticObjective(std::vector<double> design,
                                     std::vector<int> labels,
                                     std::size_t dimension, double l2)
    : design_(std::move(design)),
      labels_(std::move(labels)),
      dimension_(dimension),
      l2_(l2) {
  if (design_.size() != labels_.size() * dimension_) {
    throw Error("model", "design matrix shape mismatch");
  }
}

double LogisticObjective::loss(std::span<const double> params) const {
  const std::size_t d = dimension_;
  const double b = params[d];
  double nll = 0.0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double* row = design_.data() + i * d;
    double z = b;
    for (std::size_t k = 0; k < d; ++k) z += params[k] * row[k];
    nll += softplus(z) - (labels_[i] ? z : 0.0);
  }
  double reg = 0.0;
  for (std::size_t k = 0; k < d; ++k) reg += params[k] * params[k];
  return nll / static_cast<double>(labels_.size()) + 0.5 * l2_ * reg;
}

std::vector<double> LogisticObjective::gradient(
    std::span<const double> params) const {
  const std::size_t d = dimension_;
  std::vector<double> g(d + 1, 0.0);
  const double b = params[d];
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double* row = design_.data() + i * d;
    double z = b;
    for (std::size_t k = 0; k < d; ++k) z += params[k] * row[k];
    const double r = sigmoid(z) - labels_[i];
    for (std::size_t k = 0; k < d; ++k) g[k] += r * row[k];
    g[d] += r;
  }
  const double n = static_cast<double>(labels_.size());
  for (std::size_t k = 0; k < d; ++k) g[k] = g[k] / n + l2_ * params[k];
  g[d] /= n;
  return g;
}

LogisticObjective make_objective(const Dataset& data,
                                 std::span<const FeatureEncoding> encoding,
                                 double l2) {
  const std::size_t d = encoded_dimension(encoding);
  const auto& features = data.schema->features;
  std::vector<double> design(data.size() * d, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    double* row = design.data() + i * d;
    const auto& x = data.instances[i];
    for (std::size_t j = 0; j < features.size(); ++j) {
      const auto& e = encoding[j];
      if (features[j].is_categorical()) {
        row[e.offset + static_cast<std::size_t>(x.slot(j))] = 1.0;
      } else {
        row[e.offset] = (x.slot(j) - e.mean) / e.scale;
      }
    }
  }
  return LogisticObjective(std::move(design), data.labels, d, l2);
}

TrainedModel train(const Dataset& data, const TrainingSettings& settings) {
  if (data.size() == 0) throw Error("data", "cannot train on an empty dataset");
  const std::size_t positives =
      static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), 1));
  if (positives == 0 || positives == data.size()) {
    throw Error("data", "training data contains a single class");
  }
  const auto& schema = *data.schema;

  TrainingReport report;
  auto encoding = identity_encoding(schema);
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (schema.features[j].is_categorical()) continue;
    double mean = 0.0;
    for (const auto& x : data.instances) mean += x.slot(j);
    mean /= static_cast<double>(data.size());
    double var = 0.0;
    for (const auto& x : data.instances) {
      var += (x.slot(j) - mean) * (x.slot(j) - mean);
    }
    const double sd = std::sqrt(var / static_cast<double>(data.size()));
    encoding[j].mean = mean;
    encoding[j].scale = sd > 0.0 ? sd : 1.0;
  }

  MadWeights mad;
  if (data.size() >= 2) {
    auto mc = compute_mad_weights(data);
    mad = std::move(mc.mad);
    report.warnings = std::move(mc.warnings);
  } else {
    mad = unit_mad_weights(schema);
  }

  const auto objective = make_objective(data, encoding, settings.l2);
  const std::size_t d = objective.dimension();
  std::vector<double> params(d + 1, 0.0);
  double loss = objective.loss(params);
  std::vector<double> grad = objective.gradient(params);
  double lr = settings.learning_rate;
  report.loss_history.push_back(loss);

  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  std::vector<double> trial(d + 1);
  int it = 0;
  for (; it < settings.max_iterations; ++it) {
    if (inf_norm(grad) <= settings.gradient_tolerance) {
      report.converged = true;
      break;
    }
    for (std::size_t k = 0; k <= d; ++k) trial[k] = params[k] - lr * grad[k];
    const double trial_loss = objective.loss(trial);
    if (trial_loss <= loss) {
      params.swap(trial);
      loss = trial_loss;
      grad = objective.gradient(params);
      report.loss_history.push_back(loss);
    } else {
      lr /= 2.0;
      if (lr < 1e-30) break;
    }
  }
  report.iterations = it;
  report.final_loss = loss;
  report.gradient_norm = inf_norm(grad);
  if (!report.converged && report.gradient_norm <= settings.gradient_tolerance) {
    report.converged = true;
  }

  std::vector<double> weights(params.begin(), params.begin() + d);
  LogisticModel model(data.schema, std::move(encoding), std::move(weights),
                      params[d], settings.decision_boundary, std::move(mad));
  return {std::move(model), std::move(report)};
}

double accuracy(const LogisticModel& model, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int predicted =
        model.predict_class(data.instances[i]) == Label::kPositive ? 1 : 0;
    if (predicted == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace confcf
