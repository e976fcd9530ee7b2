// Copyright 2026 The probtable Authors
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

namespace probtable {

/// Base class for every domain error raised by the library. All of these
/// map to exit code 1 in the CLI; parse/input problems use ParseError
/// (exit code 2) instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input: unreadable files, invalid JSON/CSV, bad flag values.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EntryOutOfRange : public Error {
 public:
  EntryOutOfRange(std::size_t row, std::size_t col, const std::string& value)
      : Error("entry (" + std::to_string(row + 1) + "," +
              std::to_string(col + 1) + ") = " + value +
              " outside [0, 1]"),
        row_(row),
        col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_, col_;
};

class ColumnNotNormalized : public Error {
 public:
  ColumnNotNormalized(std::size_t intervention, std::size_t prep,
                      const std::string& sum)
      : Error("results of intervention " + std::to_string(intervention + 1) +
              " do not sum to 1 for preparation " + std::to_string(prep + 1) +
              " (sum = " + sum + ")"),
        intervention_(intervention),
        prep_(prep) {}
  std::size_t intervention() const { return intervention_; }
  std::size_t prep() const { return prep_; }

 private:
  std::size_t intervention_, prep_;
};

class EmptyCell : public Error {
 public:
  EmptyCell(std::size_t intervention, std::size_t prep)
      : Error("no trials recorded for intervention " +
              std::to_string(intervention + 1) + ", preparation " +
              std::to_string(prep + 1)),
        intervention_(intervention),
        prep_(prep) {}
  std::size_t intervention() const { return intervention_; }
  std::size_t prep() const { return prep_; }

 private:
  std::size_t intervention_, prep_;
};

/// No nonsingular pivot block of the computed rank could be extracted;
/// in floating mode this signals numerical inconsistency between the
/// rank estimate and the elimination pivots.
class DegenerateTable : public Error {
 public:
  using Error::Error;
};

class SingularBasisMatrix : public Error {
 public:
  using Error::Error;
};

/// Internal linear-algebra failure (singular system where a regular one
/// was required). Public operations translate this into a domain error.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class ResultsNotSameIntervention : public Error {
 public:
  using Error::Error;
};

class SameIntervention : public Error {
 public:
  using Error::Error;
};

class WeightsNotNormalized : public Error {
 public:
  using Error::Error;
};

class ZeroEvidence : public Error {
 public:
  using Error::Error;
};

class InsufficientCoverage : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class PurityOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidQuantumModel : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

}  // namespace probtable
