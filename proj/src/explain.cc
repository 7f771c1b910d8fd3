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

#include "confcf/explain.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace confcf {
namespace {

// Tenths of a percent, rounded half to even. Values within 1e-6 of a tie
// are treated as exact decimal ties (0.0125 -> 1.2%).
long long tenths_of_percent(double confidence) {
  const double scaled = confidence * 1000.0;
  const double floor = std::floor(scaled);
  const double frac = scaled - floor;
  if (std::abs(frac - 0.5) < 1e-6) {
    const auto f = static_cast<long long>(floor);
    return f % 2 == 0 ? f : f + 1;
  }
  return std::llround(scaled);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_percent(double confidence) {
  const long long t = tenths_of_percent(confidence);
  return std::to_string(t / 10) + "." + std::to_string(t % 10) + "%";
}

std::string format_threshold_percent(double threshold) {
  const long long t = tenths_of_percent(threshold);
  if (t % 10 == 0) return std::to_string(t / 10) + "%";
  return std::to_string(t / 10) + "." + std::to_string(t % 10) + "%";
}

std::string render_sentence(const CounterfactualResult& result,
                            const ConfidenceQuery& query) {
  if (!result.feasible) {
    throw Error("explain", "cannot narrate an infeasible counterfactual");
  }
  if (result.changed.empty()) {
    throw Error("explain", "counterfactual changes no feature");
  }
  std::string out = "One way you could have got a confidence score of ";
  const std::string achieved = format_percent(result.confidence);
  if (achieved == format_percent(query.threshold)) {
    out += format_threshold_percent(query.threshold);
  } else {
    out += query.direction == Direction::kDecrease ? "less than " : "greater than ";
    out += format_threshold_percent(query.threshold) + " (" + achieved + ")";
  }
  out += " instead is if ";
  for (std::size_t i = 0; i < result.changed.size(); ++i) {
    const auto& c = result.changed[i];
    if (i) out += " and ";
    out += c.feature + " had taken value " + format_value(c.new_value) +
           " rather than " + format_value(c.old_value);
  }
  out += ".";
  return out;
}

std::string ExplanationTable::to_text() const {
  const std::size_t ncol = columns.size();
  std::vector<std::size_t> width(ncol, 0);
  auto widen = [&](std::size_t c, const std::string& s) {
    width[c] = std::max(width[c], s.size());
  };
  for (std::size_t c = 0; c < ncol; ++c) widen(c, columns[c]);
  for (const auto& r : rows) {
    widen(0, r.attribute);
    for (std::size_t c = 0; c < r.cells.size(); ++c) widen(c + 1, r.cells[c]);
  }
  widen(0, "Confidence score");
  widen(0, "AI prediction");
  for (std::size_t c = 0; c < confidence_row.size(); ++c) {
    widen(c + 1, confidence_row[c]);
  }
  auto span_width = [&] {
    std::size_t s = 0;
    for (std::size_t c = 1; c < ncol; ++c) s += width[c];
    return s + 3 * (ncol - 2);
  };
  if (span_width() < prediction.size()) {
    width[ncol - 1] += prediction.size() - span_width();
  }

  auto line = [&](const std::string& first, const std::vector<std::string>& rest) {
    std::string out = "| " + pad(first, width[0]);
    for (std::size_t c = 0; c < rest.size(); ++c) {
      out += " | " + pad(rest[c], width[c + 1]);
    }
    return out + " |\n";
  };
  auto rule = [&] {
    std::string out = "|";
    for (std::size_t c = 0; c < ncol; ++c) {
      out += std::string(width[c] + 2, '-') + "|";
    }
    return out + "\n";
  };

  std::string out = line(columns[0], {columns.begin() + 1, columns.end()});
  out += rule();
  for (const auto& r : rows) out += line(r.attribute, r.cells);
  out += rule();
  out += line("Confidence score", confidence_row);
  out += rule();
  out += "| " + pad("AI prediction", width[0]) + " | " +
         pad(prediction, span_width()) + " |\n";
  return out;
}

ExplanationTable render_table(const Instance& original, double original_confidence,
                              std::span<const CounterfactualResult> alternatives,
                              Label prediction) {
  if (alternatives.empty()) {
    throw Error("explain", "table needs at least one alternative");
  }
  const auto& schema = original.schema();
  ExplanationTable table;
  table.columns.push_back("Attribute");
  for (std::size_t a = 0; a < alternatives.size(); ++a) {
    const auto& alt = alternatives[a];
    if (!alt.feasible) throw Error("explain", "alternative is infeasible");
    if (alt.predicted_class != prediction) {
      throw Error("explain", "alternative " + std::to_string(a + 1) +
                                 " has a different predicted class");
    }
    if (alt.x_prime.slots().size() != original.size()) {
      throw Error("explain", "alternative does not match the original schema");
    }
    if (std::equal(alt.x_prime.slots().begin(), alt.x_prime.slots().end(),
                   original.slots().begin())) {
      table.warnings.push_back("alternative " + std::to_string(a + 1) +
                               " is identical to the original");
    }
    table.columns.push_back("Alternative " + std::to_string(a + 1));
  }
  table.columns.push_back("Original");

  for (std::size_t j = 0; j < schema.size(); ++j) {
    ExplanationTable::Row row{schema.features[j].name, {}};
    for (const auto& alt : alternatives) {
      row.cells.push_back(alt.x_prime.slot(j) == original.slot(j)
                              ? "-"
                              : alt.x_prime.display(j));
    }
    row.cells.push_back(original.display(j));
    table.rows.push_back(std::move(row));
  }
  for (const auto& alt : alternatives) {
    table.confidence_row.push_back(format_percent(alt.confidence));
  }
  table.confidence_row.push_back(format_percent(original_confidence));
  table.prediction = prediction == Label::kPositive ? schema.positive_label
                                                    : schema.negative_label;
  return table;
}

std::string render_profile_svg(const IceProfile& profile,
                               const std::string& title_prediction) {
  if (profile.points.empty()) throw Error("explain", "empty ICE profile");
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 80, kRight = 20, kTop = 50, kBottom = 70;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const bool bars = profile.kind == FeatureKind::kCategorical;
  const auto& pts = profile.points;

  double lo = pts[0].confidence, hi = pts[0].confidence;
  for (const auto& p : pts) {
    lo = std::min(lo, p.confidence);
    hi = std::max(hi, p.confidence);
  }
  const double pad_y = hi > lo ? 0.1 * (hi - lo) : 0.05;
  double y_min = bars ? 0.0 : std::max(0.0, lo - pad_y);
  double y_max = std::min(1.0, hi + pad_y);
  if (y_max <= y_min) y_max = std::min(1.0, y_min + 0.1), y_min = y_max - 0.1;
  auto y_of = [&](double c) {
    return kTop + plot_h * (1.0 - (c - y_min) / (y_max - y_min));
  };

  const std::size_t n = pts.size();
  double x_min = 0.0, x_max = 1.0;
  if (!bars) {
    x_min = pts.front().slot;
    x_max = pts.back().slot;
    if (x_max <= x_min) x_max = x_min + 1.0;
  }
  auto x_of_index = [&](std::size_t i) {
    return kLeft + plot_w * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  };
  auto x_of_value = [&](double v) {
    return kLeft + plot_w * (v - x_min) / (x_max - x_min);
  };

  const std::string title = title_prediction + " | " + profile.feature;
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
       "height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<title>" + escape_xml(title) + "</title>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"#ffffff\"/>\n";
  s += "<text class=\"title\" x=\"320\" y=\"28\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" +
       escape_xml(title) + "</text>\n";

  // Axes and y ticks.
  const std::string x0 = fixed(kLeft), x1 = fixed(kLeft + plot_w);
  const std::string y0 = fixed(kTop), y1 = fixed(kTop + plot_h);
  s += "<line class=\"axis\" x1=\"" + x0 + "\" y1=\"" + y1 + "\" x2=\"" + x1 +
       "\" y2=\"" + y1 + "\" stroke=\"#000000\"/>\n";
  s += "<line class=\"axis\" x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x0 +
       "\" y2=\"" + y1 + "\" stroke=\"#000000\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double c = y_min + (y_max - y_min) * t / 4.0;
    const std::string ty = fixed(y_of(c));
    s += "<line class=\"tick\" x1=\"" + fixed(kLeft - 5) + "\" y1=\"" + ty +
         "\" x2=\"" + x0 + "\" y2=\"" + ty + "\" stroke=\"#000000\"/>\n";
    s += "<text class=\"tick-label\" x=\"" + fixed(kLeft - 8) + "\" y=\"" +
         fixed(y_of(c) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         format_percent(c) + "</text>\n";
  }
  s += "<text class=\"y-label\" x=\"18\" y=\"" + fixed(kTop + plot_h / 2) +
       "\" transform=\"rotate(-90 18 " + fixed(kTop + plot_h / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"13\">Confidence score</text>\n";
  s += "<text class=\"x-label\" x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" +
       fixed(kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
       escape_xml(profile.feature) + "</text>\n";

  if (bars) {
    const double bar_w = 0.7 * plot_w / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool factual = i == profile.factual_index;
      const double top = y_of(pts[i].confidence);
      s += std::string("<rect class=\"bar") + (factual ? " factual" : "") +
           "\" x=\"" + fixed(x_of_index(i) - bar_w / 2) + "\" y=\"" + fixed(top) +
           "\" width=\"" + fixed(bar_w) + "\" height=\"" +
           fixed(kTop + plot_h - top) + "\" fill=\"" +
           (factual ? "#d95f02" : "#1b9e77") + "\"><title>" +
           escape_xml(format_value(pts[i].value)) + ": " +
           format_percent(pts[i].confidence) + "</title></rect>\n";
      s += "<text class=\"x-tick-label\" x=\"" + fixed(x_of_index(i)) +
           "\" y=\"" + fixed(kTop + plot_h + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           escape_xml(format_value(pts[i].value)) + "</text>\n";
    }
  } else {
    s += "<polyline class=\"profile\" fill=\"none\" stroke=\"#1b9e77\" "
         "stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s += " ";
      s += fixed(x_of_value(pts[i].slot)) + "," + fixed(y_of(pts[i].confidence));
    }
    s += "\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double v = x_min + (x_max - x_min) * t / 4.0;
      s += "<text class=\"x-tick-label\" x=\"" + fixed(x_of_value(v)) +
           "\" y=\"" + fixed(kTop + plot_h + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           format_number(v) + "</text>\n";
    }
    const auto& f = pts[profile.factual_index];
    s += "<circle class=\"factual\" cx=\"" + fixed(x_of_value(f.slot)) +
         "\" cy=\"" + fixed(y_of(f.confidence)) +
         "\" r=\"5\" fill=\"#d95f02\"><title>" + escape_xml(format_value(f.value)) +
         ": " + format_percent(f.confidence) + "</title></circle>\n";
  }
  s += "</svg>\n";
  return s;
}

std::variant<ExplanationBundle, InfeasibleReport> explain(
    const LogisticModel& model, const ConfidenceQuery& query,
    const ExplainOptions& options) {
  auto results = solve_top(model, query, std::max<std::size_t>(1, options.alternatives));
  if (!results.front().feasible) return *results.front().infeasibility;

  ExplanationBundle bundle;
  bundle.sentence = render_sentence(results.front(), query);
  const Label prediction = model.predict_class(query.x);
  bundle.table = render_table(query.x, model.confidence(query.x, query.measure),
                              results, prediction);
  std::set<std::size_t> features;
  for (const auto& r : results) {
    for (const auto& c : r.changed) {
      features.insert(model.schema().require_index(c.feature));
    }
  }
  for (std::size_t j : features) {
    auto profile = ice_profile(model, query.x, model.schema().features[j].name,
                               query.measure);
    std::string svg = render_profile_svg(profile, profile.predicted_label);
    bundle.profiles.push_back({std::move(profile), std::move(svg)});
  }
  bundle.alternatives = std::move(results);
  return bundle;
}

}  // namespace confcf
