// Copyright 2026 The trajforge Authors
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

#ifndef TRAJFORGE__ERRORS_HPP_
#define TRAJFORGE__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace trajforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-contract input data (unsorted frames, NaN costs, ...).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// A configuration value violates a documented invariant. The CLI maps this to
// the usage exit code.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A file could not be parsed. Carries the location for the error message.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& field,
             const std::string& detail)
      : Error(file + ":" + std::to_string(line) + ": field '" + field + "': " + detail) {}
};

}  // namespace trajforge

#endif  // TRAJFORGE__ERRORS_HPP_
