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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "confcf/cfsearch.h"
#include "confcf/dataset.h"
#include "confcf/explain.h"
#include "confcf/ice.h"
#include "confcf/json_io.h"
#include "confcf/model.h"
#include "confcf/service.h"
#include "confcf/study.h"

namespace {

using namespace confcf;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

// Inline JSON when it starts with '{', a file path otherwise.
Json read_json_arg(const std::string& arg) {
  const auto start = arg.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && arg[start] == '{') {
    try {
      return Json::parse(arg);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("json", std::string("malformed instance JSON: ") + e.what(),
                  "instance-json");
    }
  }
  return read_json_file(arg);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path, path);
  out << text;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

struct QueryFlags {
  std::string model;
  std::string instance;
  std::optional<double> threshold;
  std::string direction = "decrease";
  std::vector<std::string> mutables;
  std::size_t k = kDefaultMaxChanged;
  std::string measure = "margin";
  std::string format = "text";
};

void add_query_flags(CLI::App* cmd, QueryFlags& f, bool with_k) {
  cmd->add_option("--model", f.model, "Model JSON file")->required();
  cmd->add_option("--instance-json", f.instance, "Instance JSON (path or inline)")
      ->required();
  cmd->add_option("--threshold", f.threshold, "Confidence threshold T in [0, 1]");
  cmd->add_option("--direction", f.direction, "increase or decrease")
      ->check(CLI::IsMember({"increase", "decrease"}));
  cmd->add_option("--mutable", f.mutables,
                  "Mutable features (repeat or comma-separate; default all)");
  if (with_k) cmd->add_option("--k", f.k, "Maximum number of changed features");
  cmd->add_option("--measure", f.measure, "margin, least_confidence, ratio, entropy");
}

ConfidenceQuery build_query(const LogisticModel& model, const QueryFlags& f) {
  Instance x = instance_from_json(model.schema_ptr(), read_json_arg(f.instance));
  return make_query(model, std::move(x), f.threshold, parse_direction(f.direction),
                    split_list(f.mutables), f.k, parse_measure(f.measure));
}

int run_train(const std::string& data_path, const std::string& schema_path,
              const std::string& out_path) {
  auto schema = load_schema(schema_path);
  const auto data = load_dataset(data_path, schema);
  const auto trained = train(data);
  save_model(trained.model, out_path);
  for (const auto& w : trained.report.warnings) std::cerr << "warning: " << w << "\n";
  Json report = {{"rows", data.size()},
                 {"accuracy", accuracy(trained.model, data)},
                 {"iterations", trained.report.iterations},
                 {"converged", trained.report.converged},
                 {"final_loss", trained.report.final_loss},
                 {"gradient_norm", trained.report.gradient_norm},
                 {"model", out_path}};
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int run_predict(const std::string& model_path, const std::string& instance) {
  const auto model = load_model(model_path);
  const auto x = instance_from_json(model.schema_ptr(), read_json_arg(instance));
  const double p = model.predict_proba(x);
  Json conf = Json::object();
  for (auto m : kAllMeasures) conf[std::string(to_string(m))] = confidence_from_probability(p, m);
  std::cout << Json{{"probability", p},
                    {"class", model.label_text(model.class_of(p))},
                    {"confidences", conf}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int run_cf(const QueryFlags& f) {
  const auto model = load_model(f.model);
  const auto query = build_query(model, f);
  const auto result = solve(model, query);
  if (!result.feasible) {
    std::cout << result_to_json(result).dump(2) << "\n";
    if (f.format != "json") std::cerr << "infeasible: " << result.infeasibility->message << "\n";
    return kExitInfeasible;
  }
  if (f.format != "json" && !result.changed.empty()) {
    std::cout << render_sentence(result, query) << "\n";
  }
  std::cout << result_to_json(result).dump(2) << "\n";
  return kExitOk;
}

int run_ice(const std::string& model_path, const std::string& instance,
            const std::string& feature, const std::string& measure,
            const std::string& svg_path) {
  const auto model = load_model(model_path);
  const auto x = instance_from_json(model.schema_ptr(), read_json_arg(instance));
  const auto profile = ice_profile(model, x, feature, parse_measure(measure));
  if (!svg_path.empty()) {
    write_text(svg_path, render_profile_svg(profile, profile.predicted_label));
  }
  std::cout << profile_to_json(profile).dump(2) << "\n";
  return kExitOk;
}

int run_explain(const QueryFlags& f, std::size_t alternatives) {
  const auto model = load_model(f.model);
  const auto query = build_query(model, f);
  auto outcome = explain(model, query, {alternatives});
  if (auto* report = std::get_if<InfeasibleReport>(&outcome)) {
    std::cout << infeasible_to_json(*report).dump(2) << "\n";
    return kExitInfeasible;
  }
  const auto& bundle = std::get<ExplanationBundle>(outcome);
  if (f.format == "json") {
    std::cout << bundle_to_json(bundle).dump(2) << "\n";
  } else if (f.format == "svg") {
    for (const auto& p : bundle.profiles) std::cout << p.svg;
  } else {
    std::cout << bundle.sentence << "\n\n" << bundle.table.to_text();
    for (const auto& w : bundle.table.warnings) std::cerr << "warning: " << w << "\n";
  }
  return kExitOk;
}

int run_study_gen(const std::string& model_path, const std::string& data_path,
                  const GenerationSettings& settings, const std::string& out) {
  const auto model = load_model(model_path);
  std::vector<Instance> pool;
  if (!data_path.empty()) pool = load_dataset(data_path, model.schema_ptr()).instances;
  const auto questions = generate_questions(model, settings, pool);
  write_text(out, questions_to_json(questions, model.schema()).dump(2) + "\n");
  return kExitOk;
}

int run_study_score(const std::string& questions_path, const std::string& answers_path,
                    std::string participant, const std::string& out) {
  const auto questions = questions_from_json(read_json_file(questions_path));
  std::ifstream in(answers_path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + answers_path, "answers");
  if (participant.empty()) {
    participant = std::filesystem::path(answers_path).stem().string();
  }
  const auto sheet = read_answers(in, participant);
  const auto result = score(sheet, questions);
  if (!out.empty()) {
    const std::pair<std::string, ScoreResult> row{participant, result};
    write_text(out, write_scores_csv({&row, 1}));
  }
  Json j = score_to_json(result);
  j["participant_id"] = participant;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_serve(std::string model_path, std::string data_path, std::string schema_path,
              std::optional<int> port) {
  model_path = model_path.empty() ? env_or("MODEL_PATH", "") : model_path;
  data_path = data_path.empty() ? env_or("DATA_PATH", "") : data_path;
  schema_path = schema_path.empty() ? env_or("SCHEMA_PATH", "") : schema_path;
  if (model_path.empty()) {
    throw Error("usage", "serve needs --model or MODEL_PATH", "model");
  }
  ServiceConfig config;
  config.apply_environment();
  if (port) config.port = *port;
  const Service service = Service::from_files(model_path, data_path, schema_path, config);
  HttpServer server(service);
  std::cerr << "listening on http://" << config.host << ":" << config.port << "\n";
  server.listen(config.host, config.port);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence counterfactual explanations for logistic models", "confcf"};
  app.require_subcommand(1, 1);

  std::string data, schema, out_model;
  auto* train_cmd = app.add_subcommand("train", "Train a logistic model");
  train_cmd->add_option("--data", data, "Training CSV")->required();
  train_cmd->add_option("--schema", schema, "Schema JSON")->required();
  train_cmd->add_option("--out-model", out_model, "Output model JSON")->required();

  std::string model, instance;
  auto* predict_cmd = app.add_subcommand("predict", "Predict one instance");
  predict_cmd->add_option("--model", model, "Model JSON file")->required();
  predict_cmd->add_option("--instance-json", instance, "Instance JSON (path or inline)")
      ->required();

  QueryFlags cf_flags;
  auto* cf_cmd = app.add_subcommand("cf", "Confidence counterfactual search");
  add_query_flags(cf_cmd, cf_flags, true);
  cf_cmd->add_option("--format", cf_flags.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string feature, measure = "margin", svg;
  auto* ice_cmd = app.add_subcommand("ice", "Confidence profile of one feature");
  ice_cmd->add_option("--model", model, "Model JSON file")->required();
  ice_cmd->add_option("--instance-json", instance, "Instance JSON (path or inline)")
      ->required();
  ice_cmd->add_option("--feature", feature, "Feature to sweep")->required();
  ice_cmd->add_option("--measure", measure, "Confidence measure");
  ice_cmd->add_option("--svg", svg, "Also write the chart to this SVG file");

  QueryFlags ex_flags;
  ex_flags.format = "table";
  std::size_t alternatives = 2;
  auto* explain_cmd = app.add_subcommand("explain", "Sentence, table and charts");
  add_query_flags(explain_cmd, ex_flags, true);
  explain_cmd->add_option("--format", ex_flags.format, "json, table or svg")
      ->check(CLI::IsMember({"json", "table", "svg"}));
  explain_cmd->add_option("--alternatives", alternatives, "Table columns besides the original");

  auto* study_cmd = app.add_subcommand("study", "Task-prediction study harness");
  study_cmd->require_subcommand(1, 1);
  GenerationSettings gen;
  std::string condition = "control", gen_out, gen_measure = "margin";
  auto* gen_cmd = study_cmd->add_subcommand("gen", "Generate questions");
  gen_cmd->add_option("--model", model, "Model JSON file")->required();
  gen_cmd->add_option("--data", data, "Optional CSV of base instances");
  gen_cmd->add_option("--n", gen.n, "Number of questions");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--condition", condition, "control, example_based, visualisation_based")
      ->check(CLI::IsMember({"control", "example_based", "visualisation_based"}));
  gen_cmd->add_option("--min-gap", gen.min_gap, "Minimum pairwise confidence gap");
  gen_cmd->add_option("--measure", gen_measure, "Confidence measure");
  gen_cmd->add_option("--out", gen_out, "Output questions JSON (default stdout)");

  std::string questions, answers, participant, score_out;
  auto* score_cmd = study_cmd->add_subcommand("score", "Score an answer sheet");
  score_cmd->add_option("--questions", questions, "Questions JSON")->required();
  score_cmd->add_option("--answers", answers, "Answers CSV")->required();
  score_cmd->add_option("--participant", participant, "Participant id");
  score_cmd->add_option("--out", score_out, "Also write a scores CSV");

  std::optional<int> port;
  std::string serve_model, serve_data, serve_schema;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--port", port, "TCP port (default PORT or 8080)");
  serve_cmd->add_option("--model", serve_model, "Model JSON (default MODEL_PATH)");
  serve_cmd->add_option("--data", serve_data, "Dataset CSV (default DATA_PATH)");
  serve_cmd->add_option("--schema", serve_schema, "Schema JSON (default SCHEMA_PATH)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (*train_cmd) return run_train(data, schema, out_model);
    if (*predict_cmd) return run_predict(model, instance);
    if (*cf_cmd) return run_cf(cf_flags);
    if (*ice_cmd) return run_ice(model, instance, feature, measure, svg);
    if (*explain_cmd) return run_explain(ex_flags, alternatives);
    if (*gen_cmd) {
      gen.condition = parse_condition(condition);
      gen.measure = parse_measure(gen_measure);
      return run_study_gen(model, data, gen, gen_out);
    }
    if (*score_cmd) return run_study_score(questions, answers, participant, score_out);
    if (*serve_cmd) return run_serve(serve_model, serve_data, serve_schema, port);
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << (e.field().empty() ? "" : " " + e.field())
              << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
