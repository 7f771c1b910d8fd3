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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>
#include <variant>

#include "confcf/cfsearch.h"
#include "confcf/dataset.h"
#include "confcf/explain.h"
#include "confcf/ice.h"
#include "confcf/json_io.h"
#include "confcf/model.h"
#include "confcf/study.h"

namespace py = pybind11;

namespace {

using namespace confcf;

// Dicts cross the boundary as JSON text; the Python package decodes them.
class PyModel {
 public:
  explicit PyModel(LogisticModel model) : model_(std::move(model)) {}

  static PyModel load(const std::string& path) { return PyModel(load_model(path)); }
  static PyModel from_json(const std::string& text) {
    return PyModel(model_from_json(Json::parse(text)));
  }

  std::string to_json() const { return model_to_json(model_).dump(); }
  void save(const std::string& path) const { save_model(model_, path); }

  std::string predict(const std::string& instance) const {
    const auto x = instance_from_json(model_.schema_ptr(), Json::parse(instance));
    const double p = model_.predict_proba(x);
    Json conf = Json::object();
    for (auto m : kAllMeasures) {
      conf[std::string(to_string(m))] = confidence_from_probability(p, m);
    }
    return Json{{"probability", p},
                {"class", model_.label_text(model_.class_of(p))},
                {"confidences", conf}}
        .dump();
  }

  std::string counterfactual(const std::string& query, bool oracle) const {
    const auto q = query_from_json(model_, Json::parse(query));
    return result_to_json(oracle ? oracle_solve(model_, q) : solve(model_, q)).dump();
  }

  std::string sentence(const std::string& query) const {
    const auto q = query_from_json(model_, Json::parse(query));
    return render_sentence(solve(model_, q), q);
  }

  std::string ice(const std::string& instance, const std::string& feature,
                  const std::string& measure) const {
    const auto x = instance_from_json(model_.schema_ptr(), Json::parse(instance));
    return profile_to_json(ice_profile(model_, x, feature, parse_measure(measure))).dump();
  }

  std::string explain_query(const std::string& query, std::size_t alternatives) const {
    const auto q = query_from_json(model_, Json::parse(query));
    auto outcome = explain(model_, q, {alternatives});
    if (auto* report = std::get_if<InfeasibleReport>(&outcome)) {
      return infeasible_to_json(*report).dump();
    }
    return bundle_to_json(std::get<ExplanationBundle>(outcome)).dump();
  }

  std::string generate(std::size_t n, std::uint64_t seed, const std::string& condition,
                       double min_gap) const {
    GenerationSettings s;
    s.n = n;
    s.seed = seed;
    s.condition = parse_condition(condition);
    s.min_gap = min_gap;
    return questions_to_json(generate_questions(model_, s), model_.schema()).dump();
  }

  std::string schema() const { return schema_to_json(model_.schema()).dump(); }
  double decision_boundary() const { return model_.decision_boundary(); }

  const LogisticModel& model() const { return model_; }

 private:
  LogisticModel model_;
};

py::tuple train_csv(const std::string& data_path, const std::string& schema_path) {
  const auto schema = load_schema(schema_path);
  const auto data = load_dataset(data_path, schema);
  auto trained = train(data);
  const double acc = accuracy(trained.model, data);
  return py::make_tuple(PyModel(std::move(trained.model)), acc,
                        trained.report.iterations, trained.report.converged);
}

std::string score_answers(const std::string& questions, const std::string& answers_csv,
                          const std::string& participant) {
  const auto qs = questions_from_json(Json::parse(questions));
  std::istringstream in(answers_csv);
  return score_to_json(score(read_answers(in, participant), qs)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Confidence counterfactuals for logistic models";

  static py::exception<Error> error(m, "ConfcfError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (e.code() + ": " + e.what()).c_str());
    }
  });

  py::class_<PyModel>(m, "Model")
      .def_static("load", &PyModel::load, py::arg("path"))
      .def_static("from_json", &PyModel::from_json, py::arg("text"))
      .def("to_json", &PyModel::to_json)
      .def("save", &PyModel::save, py::arg("path"))
      .def("schema_json", &PyModel::schema)
      .def_property_readonly("decision_boundary", &PyModel::decision_boundary)
      .def("predict_json", &PyModel::predict, py::arg("instance"))
      .def("counterfactual_json", &PyModel::counterfactual, py::arg("query"),
           py::arg("oracle") = false)
      .def("sentence", &PyModel::sentence, py::arg("query"))
      .def("ice_json", &PyModel::ice, py::arg("instance"), py::arg("feature"),
           py::arg("measure") = "margin")
      .def("explain_json", &PyModel::explain_query, py::arg("query"),
           py::arg("alternatives") = 2)
      .def("generate_questions_json", &PyModel::generate, py::arg("n") = 10,
           py::arg("seed") = 1, py::arg("condition") = "control",
           py::arg("min_gap") = 0.02);

  m.def("train_csv", &train_csv, py::arg("data"), py::arg("schema"));
  m.def("score_answers_json", &score_answers, py::arg("questions"),
        py::arg("answers_csv"), py::arg("participant") = "participant");
  m.def("confidence", [](double p, const std::string& measure) {
    return confidence_from_probability(p, parse_measure(measure));
  }, py::arg("probability"), py::arg("measure") = "margin");
  m.def("format_percent", &format_percent, py::arg("confidence"));
  m.def("payout_cents", &payout_cents_for, py::arg("score"));
}
