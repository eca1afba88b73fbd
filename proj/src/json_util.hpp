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

#ifndef AWAREKIT_SRC_JSON_UTIL_HPP_
#define AWAREKIT_SRC_JSON_UTIL_HPP_

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include "awarekit/errors.hpp"

namespace awarekit::detail
{

/// Reads and parses a JSON file; parse failures carry path plus line:column context.
nlohmann::json load_json_file(const std::filesystem::path & path);

/// Fetches a required field, throwing ParseError naming the field and context.
const nlohmann::json & require_field(
  const nlohmann::json & j, const char * key, const std::string & context);

double require_number(const nlohmann::json & j, const char * key, const std::string & context);
std::string require_string(const nlohmann::json & j, const char * key, const std::string & context);

}  // namespace awarekit::detail

#endif  // AWAREKIT_SRC_JSON_UTIL_HPP_
