// Copyright 2026 The ctxprobe Authors.
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

#ifndef CTXPROBE_ERRORS_H_
#define CTXPROBE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace ctxprobe {

// Malformed input record. line() is 1-based, 0 when not line oriented.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " +
                           message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed records that violate a cross-record invariant (dangling or
// duplicate ids, a target missing from its gold set).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct FieldError {
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<FieldError> errors)
      : std::runtime_error(Format(errors)), errors_(std::move(errors)) {}
  ConfigError(std::string field, std::string message)
      : ConfigError(std::vector<FieldError>{
            FieldError{std::move(field), std::move(message)}}) {}

  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  static std::string Format(const std::vector<FieldError>& errors) {
    std::string out = "invalid config";
    for (const auto& e : errors) out += "\n  " + e.field + ": " + e.message;
    return out;
  }

  std::vector<FieldError> errors_;
};

}  // namespace ctxprobe

#endif  // CTXPROBE_ERRORS_H_
