/*
 * Copyright (c) 2026, pipeshard contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace pipeshard {

/// Caller handed us data that violates a precondition (bad node id,
/// inconsistent plan inputs, ...).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A text or binary stream could not be decoded. Carries the 1-based line
/// number when the source is line oriented (0 when it is not).
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(line > 0 ? what + " (line " + std::to_string(line) + ")"
                            : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A tunable (ps/dist/wpb) or hardware profile value is outside its legal
/// range, or a kernel cannot be hosted by the modeled hardware at all.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A launch plan is internally inconsistent (e.g. a warp references a
/// partition index that does not exist).
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace pipeshard
