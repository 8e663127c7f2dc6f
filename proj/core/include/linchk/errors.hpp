/*
 * Copyright 2026 The linchk Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linchk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (.aut files, model sources). Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column = 0);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// A model that parses but misbehaves: stuck location, domain overflow,
/// missing sequential specification.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Runtime fault inside an atomic step: out-of-domain store, bad index,
/// division by zero, empty-sequence access.
class ExecFault : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A configured ceiling (states, transitions, subset states) was exceeded.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& message, std::size_t frontier)
      : Error(message), frontier_(frontier) {}

  std::size_t frontier() const noexcept { return frontier_; }

 private:
  std::size_t frontier_;
};

}  // namespace linchk
