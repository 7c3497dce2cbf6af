// Copyright 2026 The funnelkit Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace funnelkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

class SizingError : public Error {
 public:
  using Error::Error;
};

/// Tower or scenario configuration is invalid. `level()` names the offending
/// tower level when the error comes from the capacity rule, otherwise 0.
class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what, int level = 0)
      : Error(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

class CapacityError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class DegenerateExcitationError : public Error {
 public:
  using Error::Error;
};

class DegenerateSuperpositionError : public Error {
 public:
  using Error::Error;
};

class NotSameRayError : public Error {
 public:
  using Error::Error;
};

/// Raised when two states agree as functionals but their operators are not
/// ray-equal, which means the reference state failed to be generic.
class GenericityViolationError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class NotNullCombinationError : public Error {
 public:
  using Error::Error;
};

class CompletenessUnavailableError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::size_t suggested_budget)
      : Error(what), suggested_budget_(suggested_budget) {}
  std::size_t suggested_budget() const noexcept { return suggested_budget_; }

 private:
  std::size_t suggested_budget_;
};

class FaithfulnessFailureError : public Error {
 public:
  using Error::Error;
};

class TuningFailureError : public Error {
 public:
  TuningFailureError(const std::string& what, double best_epsilon)
      : Error(what), best_epsilon_(best_epsilon) {}
  double best_epsilon() const noexcept { return best_epsilon_; }

 private:
  double best_epsilon_;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class InternalInvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace funnelkit
