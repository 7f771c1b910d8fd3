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

#ifndef CONFCF_SCHEMA_H_
#define CONFCF_SCHEMA_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace confcf {

// Base error for every validation failure in the library. `code` is a short
// machine-readable tag ("schema", "data", "query", ...), `field` names the
// offending feature or request field when there is one.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, std::string field = {})
      : std::runtime_error(message),
        code_(std::move(code)),
        field_(std::move(field)) {}

  const std::string& code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  std::string code_;
  std::string field_;
};

enum class FeatureKind { kCategorical, kContinuous };

std::string_view to_string(FeatureKind kind);

// One input attribute. Categorical features carry an ordered level list;
// continuous features carry a closed range [c_min, c_max] discretised with a
// fixed increment `step`, so the admissible grid is c_min, c_min+step, ...,
// c_max.
struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<std::string> levels;
  double c_min = 0.0;
  double c_max = 0.0;
  double step = 0.0;
  bool is_mutable = true;

  static FeatureSchema categorical(std::string name,
                                   std::vector<std::string> levels,
                                   bool is_mutable = true);
  static FeatureSchema continuous(std::string name, double c_min, double c_max,
                                  double step, bool is_mutable = true);

  // Throws Error("schema") when an invariant does not hold.
  void validate() const;

  bool is_categorical() const { return kind == FeatureKind::kCategorical; }

  std::size_t grid_size() const;
  // Grid point i. Continuous points are cleaned to 12 significant digits so
  // that 0.1-step grids print and parse as the decimals a user typed.
  double grid_value(std::size_t i) const;
  std::vector<double> grid() const;

  std::optional<std::size_t> level_index(std::string_view label) const;
  // Index of the grid point equal to `value` (within 1e-9 of a step), if any.
  std::optional<std::size_t> grid_index(double value) const;
};

struct DatasetSchema {
  std::vector<FeatureSchema> features;
  std::string target;
  std::string positive_label;
  std::string negative_label;

  void validate() const;

  std::size_t size() const { return features.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  // Like index_of but throws Error("schema", ..., name) when absent.
  std::size_t require_index(std::string_view name) const;

  // Stable 64-bit FNV-1a digest of the canonical JSON form, as 16 hex chars.
  std::string digest() const;
};

using SchemaPtr = std::shared_ptr<const DatasetSchema>;

SchemaPtr make_schema(DatasetSchema schema);

// Text label for categorical features, real value for continuous ones.
using FeatureValue = std::variant<std::string, double>;

// Shortest readable decimal form used everywhere a number is shown to a user.
std::string format_number(double value);
std::string format_value(const FeatureValue& value);

// A full assignment of feature values, validated against its schema.
//
// Values are held as numeric slots in schema order: a categorical slot is the
// level index, a continuous slot is the raw value in original units.
class Instance {
 public:
  Instance(SchemaPtr schema, std::vector<double> slots);

  static Instance from_values(SchemaPtr schema,
                              const std::map<std::string, FeatureValue>& values);

  const DatasetSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }

  std::span<const double> slots() const { return slots_; }
  double slot(std::size_t j) const { return slots_.at(j); }
  std::size_t size() const { return slots_.size(); }

  FeatureValue value(std::size_t j) const;
  FeatureValue value(std::string_view name) const;
  std::string display(std::size_t j) const;

  Instance with_slot(std::size_t j, double slot) const;
  Instance with_value(std::string_view name, const FeatureValue& value) const;

  std::map<std::string, FeatureValue> to_map() const;

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  SchemaPtr schema_;
  std::vector<double> slots_;
};

// Converts a user-facing value into a slot for feature j, validating it.
double slot_for_value(const FeatureSchema& feature, const FeatureValue& value);

}  // namespace confcf

#endif  // CONFCF_SCHEMA_H_
