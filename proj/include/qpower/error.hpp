// Copyright 2026 The qpower Authors
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

#include <stdexcept>
#include <string>

namespace qpower {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested size exceeds a configured memory or enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Operand sizes disagree (qubit counts, matrix shapes, bitstring lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed value passed to a constructor or operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the domain of a mathematical function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// (eta*I - U) v vanished: v sits inside the eigenspace of eigenvalue eta.
class DegenerateIterateError : public Error {
 public:
  using Error::Error;
};

/// The measurement branch the engine must follow has zero probability.
class DeadBranchError : public Error {
 public:
  using Error::Error;
};

/// Objective is constant over all assignments, so no phase scaling exists.
class ConstantObjectiveError : public Error {
 public:
  using Error::Error;
};

/// Input file could not be parsed or failed schema checks.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpower
