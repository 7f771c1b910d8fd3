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

#include "confcf/mad.h"

#include <algorithm>
#include <cmath>

namespace confcf {

double median(std::vector<double> values) {
  if (values.empty()) throw Error("data", "median of an empty sample");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return lower + (upper - lower) / 2.0;
}

double median_absolute_deviation(std::span<const double> values) {
  const double m = median({values.begin(), values.end()});
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - m));
  return median(std::move(dev));
}

MadComputation compute_mad_weights(const Dataset& data) {
  if (data.size() < 2) {
    throw Error("data", "MAD weights need at least two instances");
  }
  const auto& schema = *data.schema;
  MadComputation out;
  out.mad.weights.assign(schema.size(), kCategoricalChangeCost);
  out.mad.searchable.assign(schema.size(), true);

  std::vector<double> column(data.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& f = schema.features[j];
    if (f.is_categorical()) continue;
    for (std::size_t i = 0; i < data.size(); ++i) {
      column[i] = data.instances[i].slot(j);
    }
    const double mad = median_absolute_deviation(column);
    if (mad > 0.0) {
      out.mad.weights[j] = 1.0 / mad;
      continue;
    }
    double mean = 0.0;
    for (double v : column) mean += v;
    mean /= static_cast<double>(column.size());
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / static_cast<double>(column.size()));
    if (sigma > 0.0) {
      out.mad.weights[j] = 1.0 / (kMadConsistency * sigma);
      out.warnings.push_back("feature '" + f.name +
                             "' has zero MAD; using 1/(1.4826*sigma)");
    } else {
      out.mad.searchable[j] = false;
      out.warnings.push_back("feature '" + f.name +
                             "' is constant; excluded from counterfactual search");
    }
  }
  return out;
}

MadWeights unit_mad_weights(const DatasetSchema& schema) {
  return {std::vector<double>(schema.size(), 1.0),
          std::vector<bool>(schema.size(), true)};
}

}  // namespace confcf
