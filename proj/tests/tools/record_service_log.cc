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

// Writes the service request log replayed by service_test and acceptance.
// usage: record_service_log <out.jsonl>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "service_log.h"

using namespace confcf;
using namespace confcf::testing;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: record_service_log <out.jsonl>\n";
    return 1;
  }
  const Service service = replay_service();
  const auto& model = *service.state().model;
  const auto& sample = service.state().sample;
  std::vector<HttpRequest> reqs;
  auto get = [&](std::string path, std::map<std::string, std::string> params = {}) {
    reqs.push_back({"GET", std::move(path), std::move(params), ""});
  };
  auto post = [&](std::string path, const Json& body) {
    reqs.push_back({"POST", std::move(path), {}, body.dump()});
  };

  get("/schema");
  get("/openapi.json");
  get("/instances");
  get("/instances", {{"limit", "3"}});
  get("/instances", {{"limit", "many"}});
  for (std::size_t i = 0; i < 8; ++i) post("/predict", {{"instance_id", i}});
  post("/predict", {{"instance", instance_to_json(sample[7])}});
  post("/predict", {{"instance", {{"Occupation", "Astronaut"}}}});
  post("/predict", {{"instance_id", 100000}});
  for (std::size_t i = 0; i < 8; ++i) {
    const double u = model.confidence(sample[i], ConfidenceMeasure::kMargin);
    const bool down = i % 2 == 0 || u > 0.9;
    const double t = down ? std::max(0.0, u - 0.15) : std::min(1.0, u + 0.1);
    post("/counterfactual", {{"instance_id", i},
                             {"threshold", t},
                             {"direction", down ? "decrease" : "increase"}});
  }
  post("/counterfactual", {{"query", {{"x", instance_to_json(sample[1])},
                                      {"threshold", 1.0},
                                      {"direction", "increase"}}}});
  post("/counterfactual", {{"instance_id", 2},
                           {"threshold", 0.05},
                           {"direction", "decrease"},
                           {"mutable_features", {"Occupation"}},
                           {"max_changed_features", 1}});
  post("/counterfactual", {{"instance_id", 2}, {"threshold", 0.3}, {"direction", "sideways"}});
  post("/counterfactual", {{"instance_id", 2},
                           {"threshold", 0.3},
                           {"direction", "decrease"},
                           {"mutable_features", {"Age"}}});
  post("/counterfactual", {{"instance_id", 9},
                           {"threshold", 0.2},
                           {"direction", "decrease"},
                           {"measure", "ratio"}});
  for (const char* f : {"Occupation", "Age", "Working hours per week", "Education"}) {
    get("/ice", {{"feature", f}, {"instance_id", "3"}});
  }
  get("/ice", {{"feature", "Age"}, {"measure", "entropy"}, {"instance_id", "4"}});
  get("/ice", {{"feature", "Salary"}, {"instance_id", "0"}});
  post("/ice", {{"feature", "Marital status"},
                {"measure", "ratio"},
                {"instance", instance_to_json(sample[5])}});
  for (std::size_t i : {0, 3, 6}) {
    const double u = model.confidence(sample[i], ConfidenceMeasure::kMargin);
    post("/explain", {{"instance_id", i},
                      {"threshold", std::max(0.0, u - 0.1)},
                      {"direction", "decrease"},
                      {"alternatives", 2}});
  }
  post("/explain", {{"instance_id", 8},
                    {"threshold", 0.1},
                    {"direction", "decrease"},
                    {"measure", "entropy"}});
  post("/explain", {{"instance_id", 1}, {"threshold", 1.0}, {"direction", "increase"}});
  post("/study/generate", {{"n", 3}, {"seed", 11}, {"condition", "control"}});
  post("/study/generate", {{"n", 2}, {"seed", 12}, {"condition", "visualisation_based"}});
  post("/study/generate", {{"n", 2}, {"condition", "placebo"}});
  {
    const auto qs = Json::parse(service.handle(reqs[reqs.size() - 3]).body);
    Json answers = Json::array();
    std::size_t n = 0;
    for (const auto& q : qs["questions"]) {
      Json a = {{"question_id", q["id"]}, {"rationale", "looked at the charts"}};
      if (n++ == 2) {
        a["choice"] = "dont_know";
      } else {
        a["choice"] = q["correct_index"];
      }
      answers.push_back(a);
    }
    post("/study/score", {{"questions", qs}, {"answers", answers}, {"participant_id", "p1"}});
  }
  reqs.push_back({"POST", "/predict", {}, "{not json"});
  get("/predict");
  get("/nowhere");
  reqs.push_back({"DELETE", "/schema", {}, ""});
  post("/schema", Json::object());

  std::ofstream out(argv[1]);
  for (const auto& r : reqs) {
    const auto res = service.handle(r);
    out << Json{{"request", request_to_json(r)}, {"status", res.status}, {"body", res.body}}.dump()
        << "\n";
  }
  std::cerr << reqs.size() << " requests\n";
  return 0;
}
