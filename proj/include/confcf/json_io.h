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

#ifndef CONFCF_JSON_IO_H_
#define CONFCF_JSON_IO_H_

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace confcf {

struct DatasetSchema;
class Instance;
class LogisticModel;
struct ConfidenceQuery;
struct CounterfactualResult;
struct InfeasibleReport;
struct IceProfile;
struct ExplanationTable;
struct ExplanationBundle;
struct StudyQuestion;
struct ScoreResult;
using SchemaPtr = std::shared_ptr<const DatasetSchema>;

using Json = nlohmann::json;

Json schema_to_json(const DatasetSchema& schema);
SchemaPtr schema_from_json(const Json& j);
SchemaPtr load_schema(const std::filesystem::path& path);

// {feature: value}; labels for categorical features, numbers for continuous.
Json instance_to_json(const Instance& x);
Instance instance_from_json(const SchemaPtr& schema, const Json& j);

// Model file: weights, bias, encoding, standardization, decision_boundary,
// mad_weights, schema_digest, plus the schema itself so the file is
// self-contained.
Json model_to_json(const LogisticModel& model);
LogisticModel model_from_json(const Json& j);
LogisticModel load_model(const std::filesystem::path& path);
void save_model(const LogisticModel& model, const std::filesystem::path& path);

Json query_to_json(const ConfidenceQuery& query);
// Missing threshold means "current confidence"; missing mutable_features
// means every schema-mutable feature. Validated through make_query.
ConfidenceQuery query_from_json(const LogisticModel& model, const Json& j);

Json result_to_json(const CounterfactualResult& result);
Json infeasible_to_json(const InfeasibleReport& report);
Json profile_to_json(const IceProfile& profile);
Json table_to_json(const ExplanationTable& table);
Json bundle_to_json(const ExplanationBundle& bundle);

// Questions file: {format_version, schema, schema_digest, questions: [...]}.
Json questions_to_json(std::span<const StudyQuestion> questions,
                       const DatasetSchema& schema);
std::vector<StudyQuestion> questions_from_json(const Json& j);

Json score_to_json(const ScoreResult& score);

Json read_json_file(const std::filesystem::path& path);

}  // namespace confcf

#endif  // CONFCF_JSON_IO_H_
