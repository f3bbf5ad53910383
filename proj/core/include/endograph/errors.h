// Copyright 2026 The Endograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENDOGRAPH_ERRORS_H_
#define ENDOGRAPH_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace endograph {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistical precondition or contract violation: bad dimensions, an
// invalid design probability, an unmet estimator assumption. The CLI maps
// these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration was requested beyond the configured cap.
class CapExceededError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// One of the lettered unbiasedness assumptions (a)-(f), or the unipartite
// zero-diagonal condition, does not hold.
class AssumptionError : public ValidationError {
 public:
  AssumptionError(std::string assumption, const std::string& detail,
                  std::vector<int> units = {})
      : ValidationError("assumption (" + assumption + "): " + detail),
        assumption_(std::move(assumption)),
        units_(std::move(units)) {}

  const std::string& assumption() const { return assumption_; }
  const std::vector<int>& units() const { return units_; }

 private:
  std::string assumption_;
  std::vector<int> units_;
};

// Malformed input file. `path` is a JSON pointer to the offending field, or
// a byte offset for syntax errors. The CLI maps these to exit code 2.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& detail)
      : Error(path + ": " + detail), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Unreadable or unwritable file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace endograph

#endif  // ENDOGRAPH_ERRORS_H_
