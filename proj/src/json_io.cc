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

#include "confcf/json_io.h"

#include <fstream>

#include "confcf/cfsearch.h"
#include "confcf/explain.h"
#include "confcf/ice.h"
#include "confcf/model.h"
#include "confcf/schema.h"
#include "confcf/study.h"

namespace confcf {
namespace {

template <typename T>
T field(const Json& j, const char* name, const char* context) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(context, std::string("missing field '") + name + "'", name);
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(context, std::string("field '") + name + "' has the wrong type",
                name);
  }
}

Json value_to_json(const FeatureValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<double>(v);
}

Json changes_to_json(const std::vector<FeatureChange>& changes) {
  Json out = Json::array();
  for (const auto& c : changes) {
    out.push_back({{"feature", c.feature},
                   {"old", value_to_json(c.old_value)},
                   {"new", value_to_json(c.new_value)}});
  }
  return out;
}

}  // namespace

Json schema_to_json(const DatasetSchema& schema) {
  Json features = Json::array();
  for (const auto& f : schema.features) {
    Json jf = {{"name", f.name},
               {"kind", std::string(to_string(f.kind))},
               {"mutable", f.is_mutable}};
    if (f.is_categorical()) {
      jf["levels"] = f.levels;
    } else {
      jf["c_min"] = f.c_min;
      jf["c_max"] = f.c_max;
      jf["step"] = f.step;
    }
    features.push_back(std::move(jf));
  }
  return {{"features", std::move(features)},
          {"target", schema.target},
          {"positive_label", schema.positive_label},
          {"negative_label", schema.negative_label}};
}

SchemaPtr schema_from_json(const Json& j) {
  DatasetSchema schema;
  const auto features = field<Json>(j, "features", "schema");
  if (!features.is_array()) throw Error("schema", "'features' must be a list");
  for (const auto& jf : features) {
    FeatureSchema f;
    f.name = field<std::string>(jf, "name", "schema");
    const auto kind = field<std::string>(jf, "kind", "schema");
    f.is_mutable = jf.value("mutable", true);
    if (kind == "categorical") {
      f.kind = FeatureKind::kCategorical;
      f.levels = field<std::vector<std::string>>(jf, "levels", "schema");
    } else if (kind == "continuous") {
      f.kind = FeatureKind::kContinuous;
      f.c_min = field<double>(jf, "c_min", "schema");
      f.c_max = field<double>(jf, "c_max", "schema");
      f.step = field<double>(jf, "step", "schema");
    } else {
      throw Error("schema", "unknown feature kind '" + kind + "'", f.name);
    }
    schema.features.push_back(std::move(f));
  }
  schema.target = field<std::string>(j, "target", "schema");
  schema.positive_label = field<std::string>(j, "positive_label", "schema");
  schema.negative_label = field<std::string>(j, "negative_label", "schema");
  return make_schema(std::move(schema));
}

SchemaPtr load_schema(const std::filesystem::path& path) {
  return schema_from_json(read_json_file(path));
}

Json instance_to_json(const Instance& x) {
  Json out = Json::object();
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[x.schema().features[j].name] = value_to_json(x.value(j));
  }
  return out;
}

Instance instance_from_json(const SchemaPtr& schema, const Json& j) {
  if (!j.is_object()) throw Error("data", "instance must be a JSON object", "instance");
  std::map<std::string, FeatureValue> values;
  for (const auto& [name, v] : j.items()) {
    auto idx = schema->index_of(name);
    if (!idx) throw Error("data", "unknown feature '" + name + "'", name);
    const auto& f = schema->features[*idx];
    if (f.is_categorical()) {
      if (v.is_string()) {
        values[name] = v.get<std::string>();
      } else if (v.is_number()) {
        values[name] = format_number(v.get<double>());
      } else {
        throw Error("data", "feature '" + name + "' expects a label", name);
      }
    } else if (v.is_number()) {
      values[name] = v.get<double>();
    } else if (v.is_string()) {
      const auto s = v.get<std::string>();
      char* end = nullptr;
      const double d = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) {
        throw Error("data", "feature '" + name + "' expects a number", name);
      }
      values[name] = d;
    } else {
      throw Error("data", "feature '" + name + "' expects a number", name);
    }
  }
  return Instance::from_values(schema, values);
}

Json model_to_json(const LogisticModel& model) {
  const auto& schema = model.schema();
  Json encoding = Json::array(), standardization = Json::array(),
       mad = Json::array();
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& e = model.encoding()[j];
    const auto& f = schema.features[j];
    encoding.push_back({{"feature", f.name}, {"offset", e.offset}, {"width", e.width}});
    if (!f.is_categorical()) {
      standardization.push_back({{"feature", f.name}, {"mean", e.mean}, {"scale", e.scale}});
    }
    mad.push_back({{"feature", f.name},
                   {"weight", model.mad().weights[j]},
                   {"searchable", static_cast<bool>(model.mad().searchable[j])}});
  }
  return {{"weights", std::vector<double>(model.weights().begin(), model.weights().end())},
          {"bias", model.bias()},
          {"encoding", std::move(encoding)},
          {"standardization", std::move(standardization)},
          {"decision_boundary", model.decision_boundary()},
          {"mad_weights", std::move(mad)},
          {"schema_digest", schema.digest()},
          {"schema", schema_to_json(schema)}};
}

LogisticModel model_from_json(const Json& j) {
  auto schema = schema_from_json(field<Json>(j, "schema", "model"));
  const auto digest = field<std::string>(j, "schema_digest", "model");
  if (digest != schema->digest()) {
    throw Error("model", "schema digest does not match the embedded schema",
                "schema_digest");
  }
  auto encoding = identity_encoding(*schema);
  for (const auto& je : field<Json>(j, "encoding", "model")) {
    const auto idx = schema->require_index(field<std::string>(je, "feature", "model"));
    encoding[idx].offset = field<std::size_t>(je, "offset", "model");
    encoding[idx].width = field<std::size_t>(je, "width", "model");
  }
  for (const auto& js : field<Json>(j, "standardization", "model")) {
    const auto idx = schema->require_index(field<std::string>(js, "feature", "model"));
    encoding[idx].mean = field<double>(js, "mean", "model");
    encoding[idx].scale = field<double>(js, "scale", "model");
  }
  MadWeights mad = unit_mad_weights(*schema);
  for (const auto& jm : field<Json>(j, "mad_weights", "model")) {
    const auto idx = schema->require_index(field<std::string>(jm, "feature", "model"));
    mad.weights[idx] = field<double>(jm, "weight", "model");
    mad.searchable[idx] = jm.value("searchable", true);
  }
  return LogisticModel(schema, std::move(encoding),
                       field<std::vector<double>>(j, "weights", "model"),
                       field<double>(j, "bias", "model"),
                       field<double>(j, "decision_boundary", "model"), std::move(mad));
}

LogisticModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path));
}

void save_model(const LogisticModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path.string());
  out << model_to_json(model).dump(2) << "\n";
}

Json query_to_json(const ConfidenceQuery& q) {
  return {{"x", instance_to_json(q.x)},
          {"threshold", q.threshold},
          {"direction", std::string(to_string(q.direction))},
          {"mutable_features", q.mutable_features},
          {"max_changed_features", q.max_changed},
          {"epsilon", q.epsilon},
          {"measure", std::string(to_string(q.measure))}};
}

ConfidenceQuery query_from_json(const LogisticModel& model, const Json& j) {
  if (!j.is_object()) throw Error("query", "query must be a JSON object");
  Instance x = instance_from_json(model.schema_ptr(), field<Json>(j, "x", "query"));
  std::optional<double> threshold;
  if (j.contains("threshold") && !j["threshold"].is_null()) {
    threshold = field<double>(j, "threshold", "query");
  }
  const Direction direction =
      parse_direction(field<std::string>(j, "direction", "query"));
  std::vector<std::string> mutables;
  if (j.contains("mutable_features")) {
    mutables = field<std::vector<std::string>>(j, "mutable_features", "query");
    if (mutables.empty()) {
      throw Error("query", "no mutable features selected", "mutable_features");
    }
  }
  const auto k = j.contains("max_changed_features")
                     ? field<std::size_t>(j, "max_changed_features", "query")
                     : kDefaultMaxChanged;
  const auto measure = j.contains("measure")
                           ? parse_measure(field<std::string>(j, "measure", "query"))
                           : ConfidenceMeasure::kMargin;
  const double eps = j.contains("epsilon") ? field<double>(j, "epsilon", "query")
                                           : kDefaultEpsilon;
  return make_query(model, std::move(x), threshold, direction, std::move(mutables),
                    k, measure, eps);
}

Json infeasible_to_json(const InfeasibleReport& report) {
  return {{"feasible", false},
          {"binding_constraint", std::string(to_string(report.binding))},
          {"message", report.message}};
}

Json result_to_json(const CounterfactualResult& r) {
  if (!r.feasible) {
    Json out = infeasible_to_json(r.infeasibility.value_or(InfeasibleReport{}));
    out["confidence"] = r.confidence;
    return out;
  }
  const auto& schema = r.x_prime.schema();
  return {{"feasible", true},
          {"x_prime", instance_to_json(r.x_prime)},
          {"confidence", r.confidence},
          {"predicted_class", r.predicted_class == Label::kPositive
                                  ? schema.positive_label
                                  : schema.negative_label},
          {"changed", changes_to_json(r.changed)},
          {"distance", r.distance},
          {"objective", r.objective}};
}

Json profile_to_json(const IceProfile& p) {
  Json points = Json::array();
  for (const auto& pt : p.points) {
    points.push_back({{"value", value_to_json(pt.value)}, {"confidence", pt.confidence}});
  }
  return {{"feature", p.feature},
          {"kind", std::string(to_string(p.kind))},
          {"measure", std::string(to_string(p.measure))},
          {"predicted_class", p.predicted_label},
          {"points", std::move(points)},
          {"factual_index", p.factual_index}};
}

Json table_to_json(const ExplanationTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"attribute", r.attribute}, {"cells", r.cells}});
  }
  return {{"columns", t.columns},
          {"rows", std::move(rows)},
          {"confidence_row", t.confidence_row},
          {"prediction", t.prediction},
          {"warnings", t.warnings},
          {"text", t.columns.empty() ? std::string() : t.to_text()}};
}

Json bundle_to_json(const ExplanationBundle& b) {
  Json profiles = Json::array();
  for (const auto& rp : b.profiles) {
    Json jp = profile_to_json(rp.profile);
    jp["svg"] = rp.svg;
    profiles.push_back(std::move(jp));
  }
  Json alternatives = Json::array();
  for (const auto& r : b.alternatives) alternatives.push_back(result_to_json(r));
  return {{"format_version", b.format_version},
          {"sentence", b.sentence},
          {"table", table_to_json(b.table)},
          {"profiles", std::move(profiles)},
          {"alternatives", std::move(alternatives)}};
}

Json questions_to_json(std::span<const StudyQuestion> questions,
                       const DatasetSchema& schema) {
  Json list = Json::array();
  for (const auto& q : questions) {
    Json instances = Json::array();
    for (const auto& x : q.instances) instances.push_back(instance_to_json(x));
    Json explanations = Json::array();
    for (const auto& b : q.explanations) explanations.push_back(bundle_to_json(b));
    list.push_back({{"id", q.id},
                    {"condition", std::string(to_string(q.condition))},
                    {"instances", std::move(instances)},
                    {"varied_features", q.varied_features},
                    {"confidences", q.confidences},
                    {"correct_index", q.correct_index},
                    {"prediction", q.prediction == Label::kPositive
                                       ? schema.positive_label
                                       : schema.negative_label},
                    {"explanations", std::move(explanations)}});
  }
  return {{"format_version", 1},
          {"schema", schema_to_json(schema)},
          {"schema_digest", schema.digest()},
          {"questions", std::move(list)}};
}

std::vector<StudyQuestion> questions_from_json(const Json& j) {
  auto schema = schema_from_json(field<Json>(j, "schema", "study"));
  std::vector<StudyQuestion> out;
  for (const auto& jq : field<Json>(j, "questions", "study")) {
    StudyQuestion q;
    q.id = field<std::string>(jq, "id", "study");
    q.condition = parse_condition(field<std::string>(jq, "condition", "study"));
    for (const auto& jx : field<Json>(jq, "instances", "study")) {
      q.instances.push_back(instance_from_json(schema, jx));
    }
    q.varied_features = field<std::vector<std::string>>(jq, "varied_features", "study");
    q.confidences = field<std::vector<double>>(jq, "confidences", "study");
    q.correct_index = field<std::size_t>(jq, "correct_index", "study");
    if (q.correct_index >= q.instances.size()) {
      throw Error("study", "correct_index out of range in " + q.id, "correct_index");
    }
    q.prediction = field<std::string>(jq, "prediction", "study") == schema->positive_label
                       ? Label::kPositive
                       : Label::kNegative;
    out.push_back(std::move(q));
  }
  return out;
}

Json score_to_json(const ScoreResult& s) {
  return {{"score", s.score},
          {"correct", s.correct},
          {"wrong", s.wrong},
          {"dont_know", s.dont_know},
          {"payout", format_dollars(s.payout_cents)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("io", path.string() + ": " + e.what());
  }
}

}  // namespace confcf
