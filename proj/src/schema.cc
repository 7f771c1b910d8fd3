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

#include "confcf/schema.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "confcf/json_io.h"

namespace confcf {
namespace {

constexpr double kGridTolerance = 1e-9;

double clean_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  double out = std::strtod(buf, nullptr);
  return out == 0.0 ? 0.0 : out;
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::kCategorical ? "categorical" : "continuous";
}

FeatureSchema FeatureSchema::categorical(std::string name,
                                         std::vector<std::string> levels,
                                         bool is_mutable) {
  FeatureSchema f;
  f.name = std::move(name);
  f.kind = FeatureKind::kCategorical;
  f.levels = std::move(levels);
  f.is_mutable = is_mutable;
  f.validate();
  return f;
}

FeatureSchema FeatureSchema::continuous(std::string name, double c_min,
                                        double c_max, double step,
                                        bool is_mutable) {
  FeatureSchema f;
  f.name = std::move(name);
  f.kind = FeatureKind::kContinuous;
  f.c_min = c_min;
  f.c_max = c_max;
  f.step = step;
  f.is_mutable = is_mutable;
  f.validate();
  return f;
}

void FeatureSchema::validate() const {
  if (name.empty()) throw Error("schema", "feature name is empty");
  if (is_categorical()) {
    if (levels.empty()) {
      throw Error("schema", "categorical feature '" + name + "' has no levels",
                  name);
    }
    std::set<std::string> seen;
    for (const auto& level : levels) {
      if (!seen.insert(level).second) {
        throw Error("schema",
                    "duplicate level '" + level + "' in feature '" + name + "'",
                    name);
      }
    }
    return;
  }
  if (!std::isfinite(c_min) || !std::isfinite(c_max) || !(c_min < c_max)) {
    throw Error("schema", "feature '" + name + "' needs c_min < c_max", name);
  }
  if (!std::isfinite(step) || !(step > 0.0)) {
    throw Error("schema", "feature '" + name + "' needs step > 0", name);
  }
  const double range = c_max - c_min;
  const double n = std::round(range / step);
  if (std::abs(n * step - range) > kGridTolerance * std::max(1.0, range)) {
    throw Error("schema",
                "step of feature '" + name + "' does not divide its range",
                name);
  }
}

std::size_t FeatureSchema::grid_size() const {
  if (is_categorical()) return levels.size();
  return static_cast<std::size_t>(std::llround((c_max - c_min) / step)) + 1;
}

double FeatureSchema::grid_value(std::size_t i) const {
  if (is_categorical()) return static_cast<double>(i);
  if (i + 1 >= grid_size()) return c_max;
  if (i == 0) return c_min;
  return clean_decimal(c_min + static_cast<double>(i) * step);
}

std::vector<double> FeatureSchema::grid() const {
  std::vector<double> out(grid_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = grid_value(i);
  return out;
}

std::optional<std::size_t> FeatureSchema::level_index(
    std::string_view label) const {
  auto it = std::find(levels.begin(), levels.end(), label);
  if (it == levels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - levels.begin());
}

std::optional<std::size_t> FeatureSchema::grid_index(double value) const {
  if (is_categorical()) {
    if (value < 0 || value != std::floor(value) ||
        value >= static_cast<double>(levels.size())) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(value);
  }
  const double pos = (value - c_min) / step;
  const double idx = std::round(pos);
  if (idx < 0 || idx >= static_cast<double>(grid_size())) return std::nullopt;
  if (std::abs(pos - idx) > kGridTolerance) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

void DatasetSchema::validate() const {
  if (features.empty()) throw Error("schema", "schema has no features");
  if (target.empty()) throw Error("schema", "schema has no target column");
  if (positive_label.empty() || negative_label.empty() ||
      positive_label == negative_label) {
    throw Error("schema", "positive and negative labels must be distinct");
  }
  std::set<std::string> names;
  for (const auto& f : features) {
    f.validate();
    if (!names.insert(f.name).second) {
      throw Error("schema", "duplicate feature name '" + f.name + "'", f.name);
    }
  }
  if (names.count(target)) {
    throw Error("schema", "target '" + target + "' is also a feature", target);
  }
}

std::optional<std::size_t> DatasetSchema::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j].name == name) return j;
  }
  return std::nullopt;
}

std::size_t DatasetSchema::require_index(std::string_view name) const {
  auto j = index_of(name);
  if (!j) {
    throw Error("schema", "unknown feature '" + std::string(name) + "'",
                std::string(name));
  }
  return *j;
}

std::string DatasetSchema::digest() const {
  const std::string canonical = schema_to_json(*this).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SchemaPtr make_schema(DatasetSchema schema) {
  schema.validate();
  return std::make_shared<const DatasetSchema>(std::move(schema));
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string format_value(const FeatureValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return format_number(std::get<double>(value));
}

double slot_for_value(const FeatureSchema& feature, const FeatureValue& value) {
  if (feature.is_categorical()) {
    const auto* label = std::get_if<std::string>(&value);
    if (!label) {
      throw Error("data",
                  "feature '" + feature.name + "' expects a categorical label",
                  feature.name);
    }
    auto idx = feature.level_index(*label);
    if (!idx) {
      throw Error("data",
                  "value '" + *label + "' is not a level of feature '" +
                      feature.name + "'",
                  feature.name);
    }
    return static_cast<double>(*idx);
  }
  const auto* number = std::get_if<double>(&value);
  if (!number) {
    throw Error("data", "feature '" + feature.name + "' expects a number",
                feature.name);
  }
  if (!std::isfinite(*number) || *number < feature.c_min ||
      *number > feature.c_max) {
    throw Error("data",
                "value " + format_number(*number) + " of feature '" +
                    feature.name + "' is outside [" +
                    format_number(feature.c_min) + ", " +
                    format_number(feature.c_max) + "]",
                feature.name);
  }
  return *number;
}

Instance::Instance(SchemaPtr schema, std::vector<double> slots)
    : schema_(std::move(schema)), slots_(std::move(slots)) {
  if (!schema_) throw Error("data", "instance has no schema");
  if (slots_.size() != schema_->size()) {
    throw Error("data", "instance has " + std::to_string(slots_.size()) +
                            " values, schema has " +
                            std::to_string(schema_->size()));
  }
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    const auto& f = schema_->features[j];
    if (f.is_categorical()) {
      if (!f.grid_index(slots_[j])) {
        throw Error("data", "invalid level index for feature '" + f.name + "'",
                    f.name);
      }
    } else {
      slot_for_value(f, slots_[j]);
    }
  }
}

Instance Instance::from_values(
    SchemaPtr schema, const std::map<std::string, FeatureValue>& values) {
  std::vector<double> slots;
  slots.reserve(schema->size());
  for (const auto& f : schema->features) {
    auto it = values.find(f.name);
    if (it == values.end()) {
      throw Error("data", "missing value for feature '" + f.name + "'", f.name);
    }
    slots.push_back(slot_for_value(f, it->second));
  }
  for (const auto& [name, _] : values) {
    if (!schema->index_of(name)) {
      throw Error("data", "unknown feature '" + name + "'", name);
    }
  }
  return Instance(std::move(schema), std::move(slots));
}

FeatureValue Instance::value(std::size_t j) const {
  const auto& f = schema_->features.at(j);
  if (f.is_categorical()) {
    return f.levels[static_cast<std::size_t>(slots_[j])];
  }
  return slots_[j];
}

FeatureValue Instance::value(std::string_view name) const {
  return value(schema_->require_index(name));
}

std::string Instance::display(std::size_t j) const {
  return format_value(value(j));
}

Instance Instance::with_slot(std::size_t j, double slot) const {
  std::vector<double> next = slots_;
  next.at(j) = slot;
  return Instance(schema_, std::move(next));
}

Instance Instance::with_value(std::string_view name,
                              const FeatureValue& value) const {
  const std::size_t j = schema_->require_index(name);
  return with_slot(j, slot_for_value(schema_->features[j], value));
}

std::map<std::string, FeatureValue> Instance::to_map() const {
  std::map<std::string, FeatureValue> out;
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    out.emplace(schema_->features[j].name, value(j));
  }
  return out;
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.slots_ != b.slots_) return false;
  return a.schema_ == b.schema_ || a.schema_->digest() == b.schema_->digest();
}

}  // namespace confcf
