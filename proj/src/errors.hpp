// Copyright 2026 The Apportion Authors.
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

#ifndef APPORTION_ERRORS_HPP_
#define APPORTION_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace apportion {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kInvalidInstance,
  kDomain,
  kInfeasible,
  kRejected,
  kTimeout,
};

// Base of every exception thrown by the library. The kind maps one-to-one
// onto the status codes of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::kParse, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

class InvalidInstanceError : public Error {
 public:
  explicit InvalidInstanceError(const std::string& what)
      : Error(ErrorKind::kInvalidInstance, what) {}
};

// A step could not be completed by the method (no feasible allocation).
class InfeasibleStepError : public Error {
 public:
  explicit InfeasibleStepError(const std::string& what)
      : Error(ErrorKind::kInfeasible, what) {}
};

class RejectedInputError : public Error {
 public:
  explicit RejectedInputError(const std::string& what)
      : Error(ErrorKind::kRejected, what) {}
};

class TimeoutError : public Error {
 public:
  explicit TimeoutError(const std::string& what)
      : Error(ErrorKind::kTimeout, what) {}
};

}  // namespace apportion

#endif  // APPORTION_ERRORS_HPP_
