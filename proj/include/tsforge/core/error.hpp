//
// Copyright 2026 The TSForge Authors
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
//

#ifndef TSFORGE_CORE_ERROR_HPP_
#define TSFORGE_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tsforge {

// Base of every error raised by the library. The CLI maps NumericError to
// exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Shapes (N, T, D, layouts, parameter counts) do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A parameter lies outside its admissible domain (e.g. prior support).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Non-finite intermediate values, failed factorizations, no convergence.
class NumericError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace detail
}  // namespace tsforge

#endif  // TSFORGE_CORE_ERROR_HPP_
