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

#ifndef CONFCF_TESTS_SERVICE_LOG_H_
#define CONFCF_TESTS_SERVICE_LOG_H_

#include <fstream>
#include <string>
#include <vector>

#include "confcf/json_io.h"
#include "confcf/service.h"
#include "support.h"

namespace confcf::testing {

struct LoggedExchange {
  HttpRequest request;
  int status = 0;
  std::string body;
};

inline Json request_to_json(const HttpRequest& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return {{"method", r.method}, {"path", r.path}, {"params", params}, {"body", r.body}};
}

inline HttpRequest request_from_json(const Json& j) {
  HttpRequest r{j.at("method").get<std::string>(), j.at("path").get<std::string>(), {},
                j.at("body").get<std::string>()};
  for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<std::string>();
  return r;
}

inline std::vector<LoggedExchange> read_service_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  std::vector<LoggedExchange> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = Json::parse(line);
    out.push_back({request_from_json(j.at("request")), j.at("status").get<int>(),
                   j.at("body").get<std::string>()});
  }
  return out;
}

// Session used when the log was recorded.
inline Service replay_service() {
  return Service::from_files(fixture("adult_model.json"), fixture("adult_subset.csv"),
                             fixture("adult_schema.json"), ServiceConfig{});
}

}  // namespace confcf::testing

#endif  // CONFCF_TESTS_SERVICE_LOG_H_
