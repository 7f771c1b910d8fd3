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

#include "confcf/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace confcf {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string row_prefix(std::size_t row) {
  return "row " + std::to_string(row) + ": ";
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  char c;
  auto end_row = [&] {
    if (cell_started || !row.empty() || !cell.empty()) {
      row.push_back(cell);
      rows.push_back(std::move(row));
    }
    row.clear();
    cell.clear();
    cell_started = false;
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        cell_started = true;
        break;
      case ',':
        row.push_back(cell);
        cell.clear();
        cell_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        cell.push_back(c);
        cell_started = true;
    }
  }
  if (quoted) throw Error("data", "unterminated quoted CSV cell");
  end_row();
  return rows;
}

std::vector<std::string> parse_csv_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  auto rows = parse_csv(in);
  if (rows.empty()) return {};
  if (rows.size() != 1) throw Error("data", "expected a single CSV row");
  return std::move(rows.front());
}

std::string format_csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    const auto& cell = cells[i];
    if (cell.find_first_of(",\"\r\n") == std::string::npos) {
      out += cell;
      continue;
    }
    out.push_back('"');
    for (char c : cell) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  return out;
}

std::string instance_to_csv_row(const Instance& x) {
  std::vector<std::string> cells;
  cells.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x.schema().features[j].is_categorical()) {
      cells.push_back(x.display(j));
    } else {
      // Round-trip exact: shortest representation that parses back equal.
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x.slot(j));
      cells.emplace_back(buf, ptr);
    }
  }
  return format_csv_row(cells);
}

Instance instance_from_csv_row(const SchemaPtr& schema, std::string_view row) {
  auto cells = parse_csv_line(row);
  if (cells.size() != schema->size()) {
    throw Error("data", "expected " + std::to_string(schema->size()) +
                            " cells, got " + std::to_string(cells.size()));
  }
  std::vector<double> slots;
  slots.reserve(cells.size());
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const auto& f = schema->features[j];
    if (f.is_categorical()) {
      slots.push_back(slot_for_value(f, cells[j]));
    } else {
      double v;
      if (!parse_double(trim(cells[j]), v)) {
        throw Error("data", "cannot parse '" + cells[j] + "' as a number",
                    f.name);
      }
      slots.push_back(slot_for_value(f, v));
    }
  }
  return Instance(schema, std::move(slots));
}

Dataset read_dataset(std::istream& in, const SchemaPtr& schema) {
  auto rows = parse_csv(in);
  if (rows.empty()) throw Error("data", "CSV has no header row");

  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < rows[0].size(); ++c) {
    column[trim(rows[0][c])] = c;
  }
  std::vector<std::size_t> feature_col;
  for (const auto& f : schema->features) {
    auto it = column.find(f.name);
    if (it == column.end()) {
      throw Error("data", "missing column '" + f.name + "'", f.name);
    }
    feature_col.push_back(it->second);
  }
  auto target_it = column.find(schema->target);
  if (target_it == column.end()) {
    throw Error("data", "missing target column '" + schema->target + "'",
                schema->target);
  }
  const std::size_t target_col = target_it->second;

  Dataset data;
  data.schema = schema;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::string prefix = row_prefix(r);
    if (cells.size() != rows[0].size()) {
      throw Error("data", prefix + "expected " + std::to_string(rows[0].size()) +
                              " cells, got " + std::to_string(cells.size()));
    }
    std::vector<double> slots;
    slots.reserve(schema->size());
    for (std::size_t j = 0; j < schema->size(); ++j) {
      const auto& f = schema->features[j];
      const std::string cell = trim(cells[feature_col[j]]);
      try {
        if (f.is_categorical()) {
          slots.push_back(slot_for_value(f, cell));
        } else {
          double v;
          if (!parse_double(cell, v)) {
            throw Error("data", "cannot parse '" + cell + "' as a number",
                        f.name);
          }
          slots.push_back(slot_for_value(f, v));
        }
      } catch (const Error& e) {
        throw Error("data", prefix + e.what(), f.name);
      }
    }
    const std::string label = trim(cells[target_col]);
    int y;
    if (label == schema->positive_label) {
      y = 1;
    } else if (label == schema->negative_label) {
      y = 0;
    } else {
      throw Error("data", prefix + "unknown target label '" + label + "'",
                  schema->target);
    }
    data.instances.emplace_back(schema, std::move(slots));
    data.labels.push_back(y);
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& csv_path,
                     const SchemaPtr& schema) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error("data", "cannot open " + csv_path.string());
  return read_dataset(in, schema);
}

}  // namespace confcf
