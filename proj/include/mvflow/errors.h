// Copyright 2026 The mvflow Authors
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

#ifndef MVFLOW_ERRORS_H_
#define MVFLOW_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mvflow {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input itself is bad: malformed dump, corrupt file, invalid geometry.
// The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// Inputs are individually well-formed but cannot be processed together
// (dimension mismatch, inconsistent category sets, ...). Exit code 2.
class ProcessingError : public Error {
 public:
  using Error::Error;
};

// A line-oriented parse failure. |line| is 1-based; 0 when not applicable.
class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& message)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + message
                            : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

class GeometryError : public ParseError {
 public:
  using ParseError::ParseError;
};

class FormatError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public ProcessingError {
 public:
  using ProcessingError::ProcessingError;
};

}  // namespace mvflow

#endif  // MVFLOW_ERRORS_H_
