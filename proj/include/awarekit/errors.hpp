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

#ifndef AWAREKIT_ERRORS_HPP_
#define AWAREKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace awarekit
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (bad JSON, missing or mistyped fields).
class ParseError : public Error
{
public:
  using Error::Error;
};

/// Structurally valid input violating a domain invariant.
class ValidationError : public Error
{
public:
  using Error::Error;
};

}  // namespace awarekit

#endif  // AWAREKIT_ERRORS_HPP_
