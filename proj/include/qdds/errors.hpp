// Copyright 2026 The qdds Authors.
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

#ifndef QDDS_ERRORS_HPP
#define QDDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdds {

// Argument outside the domain of a math routine (overflow guard, probe bounds).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The inverse map was asked for a delta it cannot reach inside the guard.
class UnsolvableInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-facing configuration (dimension mismatch, bad ranges, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdds

#endif  // QDDS_ERRORS_HPP
