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

#ifndef CONFCF_MODEL_H_
#define CONFCF_MODEL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confcf/dataset.h"
#include "confcf/mad.h"

namespace confcf {

enum class Label { kNegative, kPositive };

enum class ConfidenceMeasure { kLeastConfidence, kMargin, kRatio, kEntropy };

inline constexpr ConfidenceMeasure kAllMeasures[] = {
    ConfidenceMeasure::kLeastConfidence, ConfidenceMeasure::kMargin,
    ConfidenceMeasure::kRatio, ConfidenceMeasure::kEntropy};

std::string_view to_string(ConfidenceMeasure measure);
ConfidenceMeasure parse_measure(std::string_view text);

double sigmoid(double logit);
double logit_of(double probability);

// Binary-case confidence of a positive-class probability P, in [0, 1].
// With p = max(P, 1 - P):
//   margin           |2P - 1|
//   least confidence (p - 0.5) / 0.5
//   ratio            1 - (1 - p) / p
//   entropy          1 - H(P) in bits
// All four are 0 at P = 0.5 and tend to 1 as P approaches 0 or 1.
double confidence_from_probability(double probability,
                                   ConfidenceMeasure measure);

// Inverse of the confidence as a function of |logit|: the |logit| at which the
// measure equals `confidence`. Returns +infinity for confidence >= 1.
double abs_logit_for_confidence(double confidence, ConfidenceMeasure measure);

// Columns of one feature in the encoded design space. Categorical features
// are one-hot over `width` levels; continuous features use one standardized
// column (x - mean) / scale.
struct FeatureEncoding {
  std::size_t offset = 0;
  std::size_t width = 1;
  double mean = 0.0;
  double scale = 1.0;
};

// Encoding with identity standardization (mean 0, scale 1).
std::vector<FeatureEncoding> identity_encoding(const DatasetSchema& schema);
std::size_t encoded_dimension(std::span<const FeatureEncoding> encoding);

// Binary logistic regression over the encoded feature space.
// Immutable once built; all queries are pure.
class LogisticModel {
 public:
  LogisticModel(SchemaPtr schema, std::vector<FeatureEncoding> encoding,
                std::vector<double> weights, double bias,
                double decision_boundary, MadWeights mad);

  const DatasetSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  std::span<const FeatureEncoding> encoding() const { return encoding_; }
  std::span<const double> weights() const { return weights_; }
  double bias() const { return bias_; }
  double decision_boundary() const { return decision_boundary_; }
  const MadWeights& mad() const { return mad_; }

  // Logit contribution of feature j taking slot value `slot`.
  double contribution(std::size_t j, double slot) const;
  // d(logit)/d(value) for continuous feature j, in original units.
  double slope(std::size_t j) const;

  std::vector<double> encode(const Instance& x) const;

  double logit(std::span<const double> slots) const;
  double logit(const Instance& x) const;
  double predict_proba(std::span<const double> slots) const;
  double predict_proba(const Instance& x) const;
  Label predict_class(const Instance& x) const;
  Label class_of(double probability) const;
  double confidence(const Instance& x, ConfidenceMeasure measure) const;

  const std::string& label_text(Label label) const;
  Label parse_label(std::string_view text) const;

  // Throws Error("model") unless x was built against this model's schema.
  void check_instance(const Instance& x) const;

 private:
  SchemaPtr schema_;
  std::string schema_digest_;
  std::vector<FeatureEncoding> encoding_;
  std::vector<double> weights_;
  double bias_;
  double decision_boundary_;
  MadWeights mad_;
};

struct TrainingSettings {
  double l2 = 1e-4;
  double learning_rate = 0.1;
  double gradient_tolerance = 1e-8;
  int max_iterations = 10000;
  double decision_boundary = 0.5;
};

struct TrainingReport {
  int iterations = 0;
  bool converged = false;  // gradient inf-norm reached the tolerance
  double final_loss = 0.0;
  double gradient_norm = 0.0;
  std::vector<double> loss_history;
  std::vector<std::string> warnings;
};

struct TrainedModel {
  LogisticModel model;
  TrainingReport report;
};

// Mean negative log-likelihood plus (l2 / 2) * ||w||^2 over a dense encoded
// design matrix. Parameters are [w_0 .. w_{d-1}, bias]; the bias is not
// regularized.
class LogisticObjective {
 public:
  LogisticObjective(std::vector<double> design, std::vector<int> labels,
                    std::size_t dimension, double l2);

  std::size_t dimension() const { return dimension_; }
  std::size_t rows() const { return labels_.size(); }

  double loss(std::span<const double> params) const;
  std::vector<double> gradient(std::span<const double> params) const;

 private:
  std::vector<double> design_;
  std::vector<int> labels_;
  std::size_t dimension_;
  double l2_;
};

// Builds the standardized design matrix for `data` using `encoding`.
LogisticObjective make_objective(const Dataset& data,
                                 std::span<const FeatureEncoding> encoding,
                                 double l2);

// Full-batch gradient descent. A step that would raise the loss is rejected
// and the learning rate halved, so the recorded loss never increases.
TrainedModel train(const Dataset& data, const TrainingSettings& settings = {});

double accuracy(const LogisticModel& model, const Dataset& data);

}  // namespace confcf

#endif  // CONFCF_MODEL_H_
