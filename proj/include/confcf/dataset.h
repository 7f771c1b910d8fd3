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

#ifndef CONFCF_DATASET_H_
#define CONFCF_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "confcf/schema.h"

namespace confcf {

// Labeled instances sharing one schema. labels[i] is 1 for the schema's
// positive label and 0 for the negative one.
struct Dataset {
  SchemaPtr schema;
  std::vector<Instance> instances;
  std::vector<int> labels;

  std::size_t size() const { return instances.size(); }
};

// Parses a CSV document (RFC 4180 quoting, first row is the header).
// Rows are returned without the header; quoted cells may contain commas,
// doubled quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
std::vector<std::string> parse_csv_line(std::string_view line);

// Quotes a cell only when it contains a comma, quote or line break.
std::string format_csv_row(const std::vector<std::string>& cells);

std::string instance_to_csv_row(const Instance& x);
Instance instance_from_csv_row(const SchemaPtr& schema, std::string_view row);

// Errors carry the 1-based data row number (header excluded) in the message.
Dataset read_dataset(std::istream& in, const SchemaPtr& schema);
Dataset load_dataset(const std::filesystem::path& csv_path,
                     const SchemaPtr& schema);

}  // namespace confcf

#endif  // CONFCF_DATASET_H_
