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

#ifndef CONFCF_SERVICE_H_
#define CONFCF_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "confcf/model.h"

namespace confcf {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  // Empty: any http(s)://localhost or 127.0.0.1 origin, any port.
  std::vector<std::string> cors_origins;
  std::size_t sample_limit = 500;

  // Overrides fields from PORT and CORS_ORIGIN (comma-separated).
  void apply_environment();
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Read-only state shared by every request. Each request is a pure function
// of this state and the request itself.
struct SessionState {
  std::shared_ptr<const LogisticModel> model;
  std::vector<Instance> sample;
  std::string model_digest;
  ServiceConfig config;
};

class Service {
 public:
  explicit Service(SessionState state);

  // Loads and validates the model, and optionally a dataset sample and a
  // schema file that must match the model's embedded schema.
  static Service from_files(const std::filesystem::path& model_path,
                            const std::filesystem::path& data_path,
                            const std::filesystem::path& schema_path,
                            ServiceConfig config);

  HttpResponse handle(const HttpRequest& request) const;

  bool origin_allowed(const std::string& origin) const;
  const SessionState& state() const { return state_; }

 private:
  SessionState state_;
};

std::string openapi_document();

// Blocking HTTP/1.1 server around a Service. `start` binds (port 0 picks a
// free port) and serves on a background thread until `stop`.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port; throws Error("service") when the port is taken.
  int start(const std::string& host, int port);
  void listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace confcf

#endif  // CONFCF_SERVICE_H_
