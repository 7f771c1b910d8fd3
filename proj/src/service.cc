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

#include "confcf/service.h"

#include <cstdlib>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "confcf/cfsearch.h"
#include "confcf/explain.h"
#include "confcf/ice.h"
#include "confcf/json_io.h"
#include "confcf/study.h"

namespace confcf {
namespace {

HttpResponse json_response(int status, const Json& body) {
  return {status, body.dump(), "application/json"};
}

HttpResponse error_response(int status, const std::string& code,
                            const std::string& message, const std::string& field) {
  return json_response(status, {{"code", code}, {"message", message}, {"field", field}});
}

Json parse_body(const HttpRequest& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("json", std::string("malformed JSON body: ") + e.what(), "body");
  }
}

std::size_t parse_count(const std::string& text, const char* name) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    if (text.empty() || text[0] < '0' || text[0] > '9') throw std::invalid_argument(name);
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) {
    throw Error("query", std::string("'") + name + "' must be a non-negative integer",
                name);
  }
  return v;
}

}  // namespace

void ServiceConfig::apply_environment() {
  if (const char* p = std::getenv("PORT")) port = static_cast<int>(parse_count(p, "PORT"));
  if (const char* c = std::getenv("CORS_ORIGIN")) {
    cors_origins.clear();
    std::stringstream ss(c);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cors_origins.push_back(item);
    }
  }
}

Service::Service(SessionState state) : state_(std::move(state)) {
  if (!state_.model) throw Error("service", "service needs a model");
  for (const auto& x : state_.sample) state_.model->check_instance(x);
  if (state_.model_digest.empty()) {
    state_.model_digest = state_.model->schema().digest();
  }
}

Service Service::from_files(const std::filesystem::path& model_path,
                            const std::filesystem::path& data_path,
                            const std::filesystem::path& schema_path,
                            ServiceConfig config) {
  auto model = std::make_shared<const LogisticModel>(load_model(model_path));
  if (!schema_path.empty()) {
    auto schema = load_schema(schema_path);
    if (schema->digest() != model->schema().digest()) {
      throw Error("service", "schema file does not match the model's schema",
                  "SCHEMA_PATH");
    }
  }
  std::vector<Instance> sample;
  if (!data_path.empty()) {
    auto data = load_dataset(data_path, model->schema_ptr());
    const std::size_t n = std::min(config.sample_limit, data.size());
    sample.assign(data.instances.begin(), data.instances.begin() + n);
  }
  const std::string digest = model_to_json(*model).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : digest) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return Service({std::move(model), std::move(sample), buf, std::move(config)});
}

bool Service::origin_allowed(const std::string& origin) const {
  if (origin.empty()) return false;
  if (!state_.config.cors_origins.empty()) {
    for (const auto& o : state_.config.cors_origins) {
      if (o == origin || o == "*") return true;
    }
    return false;
  }
  for (const char* prefix : {"http://localhost", "https://localhost",
                             "http://127.0.0.1", "https://127.0.0.1"}) {
    const std::string p = prefix;
    if (origin.compare(0, p.size(), p) == 0 &&
        (origin.size() == p.size() || origin[p.size()] == ':')) {
      return true;
    }
  }
  return false;
}

HttpResponse Service::handle(const HttpRequest& req) const {
  const LogisticModel& model = *state_.model;
  auto instance_arg = [&](const Json& body, const char* key) -> Instance {
    if (body.contains(key)) return instance_from_json(model.schema_ptr(), body[key]);
    if (body.contains("instance_id")) {
      const auto& id = body["instance_id"];
      if (!id.is_number_unsigned() || id.get<std::size_t>() >= state_.sample.size()) {
        throw Error("query", "instance_id out of range", "instance_id");
      }
      return state_.sample[id.get<std::size_t>()];
    }
    throw Error("query", std::string("request needs '") + key + "' or 'instance_id'", key);
  };
  auto query_arg = [&](Json body) {
    if (body.contains("query")) body = body["query"];
    if (!body.contains("x") && body.contains("instance_id")) {
      body["x"] = instance_to_json(instance_arg(body, "x"));
      body.erase("instance_id");
    }
    return query_from_json(model, body);
  };
  auto param = [&](const char* key) -> std::string {
    auto it = req.params.find(key);
    return it == req.params.end() ? std::string() : it->second;
  };

  try {
    const bool get = req.method == "GET";
    const bool post = req.method == "POST";
    if (get && req.path == "/schema") {
      return json_response(200, {{"schema", schema_to_json(model.schema())},
                                 {"schema_digest", model.schema().digest()},
                                 {"model_digest", state_.model_digest}});
    }
    if (get && req.path == "/openapi.json") {
      return {200, openapi_document(), "application/json"};
    }
    if (get && req.path == "/instances") {
      std::size_t limit = 20;
      if (!param("limit").empty()) limit = parse_count(param("limit"), "limit");
      limit = std::min(limit, state_.sample.size());
      Json list = Json::array();
      for (std::size_t i = 0; i < limit; ++i) {
        list.push_back({{"id", i}, {"values", instance_to_json(state_.sample[i])}});
      }
      return json_response(200, {{"instances", std::move(list)},
                                 {"total", state_.sample.size()}});
    }
    if (post && req.path == "/predict") {
      const Json body = parse_body(req);
      const Instance x = instance_arg(body, "instance");
      const double p = model.predict_proba(x);
      Json conf = Json::object();
      for (auto m : kAllMeasures) {
        conf[std::string(to_string(m))] = confidence_from_probability(p, m);
      }
      return json_response(200, {{"probability", p},
                                 {"class", model.label_text(model.class_of(p))},
                                 {"confidences", std::move(conf)}});
    }
    if (post && req.path == "/counterfactual") {
      const auto query = query_arg(parse_body(req));
      const auto result = solve(model, query);
      return json_response(result.feasible ? 200 : 422, result_to_json(result));
    }
    if ((get || post) && req.path == "/ice") {
      std::string feature, measure_text;
      std::optional<Instance> x;
      if (get) {
        feature = param("feature");
        measure_text = param("measure");
        if (param("instance_id").empty()) {
          throw Error("query", "GET /ice needs instance_id", "instance_id");
        }
        const std::size_t id = parse_count(param("instance_id"), "instance_id");
        if (id >= state_.sample.size()) {
          throw Error("query", "instance_id out of range", "instance_id");
        }
        x = state_.sample[id];
      } else {
        const Json body = parse_body(req);
        feature = body.value("feature", "");
        measure_text = body.value("measure", "");
        x = instance_arg(body, "instance");
      }
      if (feature.empty()) throw Error("query", "missing feature", "feature");
      const auto measure =
          measure_text.empty() ? ConfidenceMeasure::kMargin : parse_measure(measure_text);
      return json_response(200, profile_to_json(ice_profile(model, *x, feature, measure)));
    }
    if (post && req.path == "/explain") {
      const Json body = parse_body(req);
      const auto query = query_arg(body);
      ExplainOptions options;
      if (body.contains("alternatives")) {
        options.alternatives = body["alternatives"].get<std::size_t>();
      }
      auto outcome = explain(model, query, options);
      if (auto* report = std::get_if<InfeasibleReport>(&outcome)) {
        return json_response(422, infeasible_to_json(*report));
      }
      return json_response(200, bundle_to_json(std::get<ExplanationBundle>(outcome)));
    }
    if (post && req.path == "/study/generate") {
      const Json body = parse_body(req);
      GenerationSettings s;
      s.n = body.value("n", std::size_t{10});
      s.seed = body.value("seed", std::uint64_t{1});
      s.condition = parse_condition(body.value("condition", std::string("control")));
      s.min_gap = body.value("min_gap", 0.02);
      s.same_class = body.value("same_class", true);
      if (body.contains("measure")) s.measure = parse_measure(body["measure"].get<std::string>());
      const auto questions = generate_questions(model, s, state_.sample);
      return json_response(200, questions_to_json(questions, model.schema()));
    }
    if (post && req.path == "/study/score") {
      const Json body = parse_body(req);
      if (!body.contains("questions") || !body.contains("answers")) {
        throw Error("study", "request needs 'questions' and 'answers'", "answers");
      }
      const auto questions = questions_from_json(body["questions"]);
      AnswerSheet sheet{body.value("participant_id", std::string("participant")), {}};
      for (const auto& ja : body["answers"]) {
        Answer a{ja.at("question_id").get<std::string>(), std::nullopt,
                 ja.value("rationale", "")};
        const auto& choice = ja.at("choice");
        if (choice.is_number_unsigned()) {
          a.choice = choice.get<std::size_t>();
        } else if (!(choice.is_string() && choice.get<std::string>() == "dont_know")) {
          throw Error("study", "choice must be an index or \"dont_know\"", "choice");
        }
        sheet.answers.push_back(std::move(a));
      }
      Json out = score_to_json(score(sheet, questions));
      out["participant_id"] = sheet.participant_id;
      return json_response(200, out);
    }
    const bool known = req.path == "/schema" || req.path == "/instances" ||
                       req.path == "/predict" || req.path == "/counterfactual" ||
                       req.path == "/ice" || req.path == "/explain" ||
                       req.path == "/study/generate" || req.path == "/study/score" ||
                       req.path == "/openapi.json";
    if (known) {
      return error_response(405, "method", "method not allowed", "method");
    }
    return error_response(404, "not_found", "no route for " + req.path, "path");
  } catch (const Error& e) {
    return error_response(400, e.code(), e.what(), e.field());
  } catch (const nlohmann::json::exception& e) {
    return error_response(400, "json", e.what(), "body");
  }
}

std::string openapi_document() {
  const Json instance = {{"type", "object"},
                         {"additionalProperties", {{"oneOf", Json::array({{{"type", "string"}}, {{"type", "number"}}})}}}};
  auto post = [&](const std::string& summary) {
    return Json{{"post",
                 {{"summary", summary},
                  {"requestBody", {{"content", {{"application/json", {{"schema", {{"type", "object"}}}}}}}}},
                  {"responses",
                   {{"200", {{"description", "OK"}}},
                    {"400", {{"description", "Validation error {code, message, field}"}}}}}}}};
  };
  Json paths = {
      {"/schema", {{"get", {{"summary", "Dataset schema and digests"},
                            {"responses", {{"200", {{"description", "OK"}}}}}}}}},
      {"/instances",
       {{"get", {{"summary", "Sample instances by id"},
                 {"parameters", Json::array({{{"name", "limit"}, {"in", "query"}, {"schema", {{"type", "integer"}}}}})},
                 {"responses", {{"200", {{"description", "OK"}}}}}}}}},
      {"/predict", post("Probability, class and all four confidence measures")},
      {"/counterfactual", post("Confidence counterfactual; 422 when infeasible")},
      {"/ice",
       {{"get", {{"summary", "ICE-for-confidence profile of a sample instance"},
                 {"parameters", Json::array({{{"name", "feature"}, {"in", "query"}, {"required", true}, {"schema", {{"type", "string"}}}},
                                             {{"name", "measure"}, {"in", "query"}, {"schema", {{"type", "string"}}}},
                                             {{"name", "instance_id"}, {"in", "query"}, {"required", true}, {"schema", {{"type", "integer"}}}}})},
                 {"responses", {{"200", {{"description", "OK"}}}}}}},
        {"post", post("ICE profile of an instance passed by value")["post"]}}},
      {"/explain", post("Explanation bundle (sentence, table, SVG charts); 422 when infeasible")},
      {"/study/generate", post("Generate task-prediction questions")},
      {"/study/score", post("Score an answer sheet")},
  };
  paths["/counterfactual"]["post"]["responses"]["422"] = {{"description", "Infeasible report"}};
  paths["/explain"]["post"]["responses"]["422"] = {{"description", "Infeasible report"}};
  return Json{{"openapi", "3.0.3"},
              {"info", {{"title", "confcf service"}, {"version", "1.0.0"}}},
              {"components", {{"schemas", {{"Instance", instance}}}}},
              {"paths", std::move(paths)}}
      .dump(2);
}

struct HttpServer::Impl {
  const Service& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(const Service& s) : service(s) {
    // SO_REUSEADDR only, so a port held by another server fails to bind.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes),
                 sizeof(yes));
    });
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      HttpRequest r{req.method, req.path, {}, req.body};
      for (const auto& [k, v] : req.params) r.params.emplace(k, v);
      const auto origin = req.get_header_value("Origin");
      if (service.origin_allowed(origin)) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
      }
      if (req.method == "OPTIONS") {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
        return;
      }
      const auto out = service.handle(r);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    server.Get(R"(/.*)", dispatch);
    server.Post(R"(/.*)", dispatch);
    server.Options(R"(/.*)", dispatch);
  }
};

HttpServer::HttpServer(const Service& service)
    : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error("service", "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::listen(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("service", "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace confcf
