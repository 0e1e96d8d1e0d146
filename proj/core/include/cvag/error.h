// Copyright 2026 The cvag Authors
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

#ifndef CVAG_ERROR_H_
#define CVAG_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cvag {

// Base class of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or text. Exit code 2.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation was violated (dimension mismatch, non-unit
// input, empty set, ...). Exit code 3.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Argument outside the supported numerical domain of a special function.
class DomainError : public ContractError {
 public:
  using ContractError::ContractError;
};

// The computation hit a degenerate configuration, e.g. an aggregated vector
// with zero norm or a rank-deficient training set. Exit code 4.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitContract = 3;
inline constexpr int kExitNumerical = 4;

}  // namespace cvag

#endif  // CVAG_ERROR_H_
