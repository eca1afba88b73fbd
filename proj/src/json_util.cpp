// Copyright 2026 the awarekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace awarekit::detail
{

namespace
{

std::string line_context(const std::string & text, std::size_t byte_offset)
{
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte_offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

nlohmann::json load_json_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ParseError(
      path.string() + " (" + line_context(text, e.byte) + "): " + e.what());
  }
}

const nlohmann::json & require_field(
  const nlohmann::json & j, const char * key, const std::string & context)
{
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(context + ": missing field \"" + key + "\"");
  }
  return *it;
}

double require_number(const nlohmann::json & j, const char * key, const std::string & context)
{
  const auto & field = require_field(j, key, context);
  if (!field.is_number()) {
    throw ParseError(context + ": field \"" + key + "\" must be a number");
  }
  return field.get<double>();
}

std::string require_string(const nlohmann::json & j, const char * key, const std::string & context)
{
  const auto & field = require_field(j, key, context);
  if (!field.is_string()) {
    throw ParseError(context + ": field \"" + key + "\" must be a string");
  }
  return field.get<std::string>();
}

}  // namespace awarekit::detail
