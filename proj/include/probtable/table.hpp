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

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "probtable/matrix.hpp"
#include "probtable/tolerances.hpp"

namespace probtable {

enum class ValueMode { Exact, Floating };

inline const char* mode_name(ValueMode m) {
  return m == ValueMode::Exact ? "exact" : "float";
}

/// One intervention: a name plus its mutually exclusive, exhaustive
/// result labels (at least one, unique within the intervention).
struct InterventionSpec {
  std::string name;
  std::vector<std::string> results;

  bool operator==(const InterventionSpec&) const = default;
};

constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

struct Finding {
  enum class Code {
    DimensionMismatch,
    EntryOutOfRange,
    ColumnNotNormalized,
    DuplicateLabel,
    EmptyResults,
    NonFiniteEntry,
    LowCount,
  };
  Code code;
  std::string message;
  // indices where applicable: row/prep/intervention, plus the offending
  // value rendered as text
  std::size_t row = kNoIndex;
  std::size_t prep = kNoIndex;
  std::size_t intervention = kNoIndex;
  std::string detail;
};

struct ValidationReport {
  std::vector<Finding> findings;
  std::vector<Finding> warnings;

  bool ok() const { return findings.empty(); }
  void fail(Finding f) { findings.push_back(std::move(f)); }
  void fail(Finding::Code code, std::string message) {
    Finding f;
    f.code = code;
    f.message = std::move(message);
    findings.push_back(std::move(f));
  }
  void warn(Finding::Code code, std::string message) {
    Finding f;
    f.code = code;
    f.message = std::move(message);
    warnings.push_back(std::move(f));
  }
};

template <class T>
std::string value_to_string(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return format_rational(v);
  } else {
    return std::to_string(v);
  }
}

/// Checks the raw pieces of a table before construction. Returns every
/// violation rather than stopping at the first.
template <class T>
ValidationReport validate_parts(const std::vector<std::string>& preparations,
                                const std::vector<InterventionSpec>& interventions,
                                const Matrix<T>& entries,
                                double tol_norm = Tolerances{}.norm) {
  ValidationReport report;
  if (preparations.empty())
    report.fail(Finding::Code::DimensionMismatch, "no preparations");
  if (interventions.empty())
    report.fail(Finding::Code::DimensionMismatch, "no interventions");

  std::unordered_set<std::string> seen_preps;
  for (const auto& p : preparations) {
    if (!seen_preps.insert(p).second)
      report.fail(Finding::Code::DuplicateLabel,
                  "duplicate preparation label '" + p + "'");
  }
  std::unordered_set<std::string> seen_interventions;
  std::size_t total_rows = 0;
  for (std::size_t k = 0; k < interventions.size(); ++k) {
    const auto& iv = interventions[k];
    if (!seen_interventions.insert(iv.name).second)
      report.fail(Finding::Code::DuplicateLabel,
                  "duplicate intervention name '" + iv.name + "'");
    if (iv.results.empty())
      report.fail(Finding::Code::EmptyResults,
                  "intervention '" + iv.name + "' has no results");
    std::unordered_set<std::string> seen_results;
    for (const auto& r : iv.results) {
      if (!seen_results.insert(r).second)
        report.fail(Finding::Code::DuplicateLabel,
                    "duplicate result label '" + r + "' in intervention '" +
                        iv.name + "'");
    }
    total_rows += iv.results.size();
  }

  if (entries.rows() != total_rows || entries.cols() != preparations.size()) {
    report.fail(Finding::Code::DimensionMismatch,
                "entry grid is " + std::to_string(entries.rows()) + "x" +
                    std::to_string(entries.cols()) + ", expected " +
                    std::to_string(total_rows) + "x" +
                    std::to_string(preparations.size()));
    return report;  // value checks below assume consistent shape
  }

  for (std::size_t i = 0; i < entries.rows(); ++i) {
    for (std::size_t j = 0; j < entries.cols(); ++j) {
      const T& v = entries(i, j);
      if constexpr (std::is_same_v<T, double>) {
        if (!std::isfinite(v)) {
          report.fail(Finding::Code::NonFiniteEntry,
                      "entry (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") is not finite");
          continue;
        }
      }
      if (v < T(0) || v > T(1))
        report.fail({Finding::Code::EntryOutOfRange,
                     "entry (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ") = " + value_to_string(v) +
                         " outside [0, 1]",
                     i, j, kNoIndex, value_to_string(v)});
    }
  }

  std::size_t row = 0;
  for (std::size_t k = 0; k < interventions.size(); ++k) {
    const std::size_t nres = interventions[k].results.size();
    for (std::size_t j = 0; j < preparations.size(); ++j) {
      T sum{};
      for (std::size_t i = 0; i < nres; ++i) sum += entries(row + i, j);
      const bool normalized = [&] {
        if constexpr (std::is_same_v<T, Rational>) {
          return sum == 1;
        } else {
          return std::isfinite(sum) && std::abs(sum - 1.0) <= tol_norm;
        }
      }();
      if (!normalized)
        report.fail({Finding::Code::ColumnNotNormalized,
                     "intervention '" + interventions[k].name +
                         "' column for preparation '" + preparations[j] +
                         "' sums to " + value_to_string(sum),
                     kNoIndex, j, k, value_to_string(sum)});
    }
    row += nres;
  }
  return report;
}

/// A probability table: one column per preparation, one group of rows per
/// intervention. Immutable after construction; all operations on it are
/// pure functions, so instances can be shared freely across threads.
template <class T>
class Table {
 public:
  static constexpr ValueMode mode() {
    return std::is_same_v<T, Rational> ? ValueMode::Exact
                                       : ValueMode::Floating;
  }

  /// Validating constructor; throws a typed error on the first violation.
  static Table build(std::vector<std::string> preparations,
                     std::vector<InterventionSpec> interventions,
                     Matrix<T> entries,
                     double tol_norm = Tolerances{}.norm) {
    auto report = validate_parts(preparations, interventions, entries, tol_norm);
    if (!report.ok()) throw_first(report);
    return Table(std::move(preparations), std::move(interventions),
                 std::move(entries));
  }

  /// Shape-checked but value-unchecked constructor, for building tables
  /// that validate() will then report on.
  static Table unchecked(std::vector<std::string> preparations,
                         std::vector<InterventionSpec> interventions,
                         Matrix<T> entries) {
    std::size_t total_rows = 0;
    for (const auto& iv : interventions) total_rows += iv.results.size();
    if (entries.rows() != total_rows || entries.cols() != preparations.size())
      throw DimensionMismatch("entry grid shape does not match the labels");
    return Table(std::move(preparations), std::move(interventions),
                 std::move(entries));
  }

  std::size_t num_rows() const { return entries_.rows(); }        // L
  std::size_t num_preps() const { return preparations_.size(); }  // M
  std::size_t num_interventions() const { return interventions_.size(); }

  const std::vector<std::string>& preparations() const { return preparations_; }
  const std::vector<InterventionSpec>& interventions() const {
    return interventions_;
  }
  const InterventionSpec& intervention(std::size_t k) const {
    return interventions_.at(k);
  }
  const Matrix<T>& entries() const { return entries_; }
  const T& entry(std::size_t row, std::size_t prep) const {
    return entries_(row, prep);
  }

  std::size_t row_offset(std::size_t k) const { return row_offsets_.at(k); }
  std::size_t num_results(std::size_t k) const {
    return interventions_.at(k).results.size();
  }
  std::size_t global_row(std::size_t k, std::size_t result) const {
    assert(result < num_results(k));
    return row_offset(k) + result;
  }
  std::size_t intervention_of_row(std::size_t row) const {
    assert(row < num_rows());
    std::size_t k = 0;
    while (k + 1 < interventions_.size() && row >= row_offsets_[k + 1]) ++k;
    return k;
  }

  std::optional<std::size_t> find_prep(const std::string& label) const {
    for (std::size_t j = 0; j < preparations_.size(); ++j)
      if (preparations_[j] == label) return j;
    return std::nullopt;
  }
  std::optional<std::size_t> find_intervention(const std::string& name) const {
    for (std::size_t k = 0; k < interventions_.size(); ++k)
      if (interventions_[k].name == name) return k;
    return std::nullopt;
  }
  std::optional<std::size_t> find_result(std::size_t k,
                                         const std::string& name) const {
    const auto& res = interventions_.at(k).results;
    for (std::size_t i = 0; i < res.size(); ++i)
      if (res[i] == name) return i;
    return std::nullopt;
  }

  bool operator==(const Table& other) const {
    return preparations_ == other.preparations_ &&
           interventions_ == other.interventions_ &&
           entries_ == other.entries_;
  }

 private:
  Table(std::vector<std::string> preparations,
        std::vector<InterventionSpec> interventions, Matrix<T> entries)
      : preparations_(std::move(preparations)),
        interventions_(std::move(interventions)),
        entries_(std::move(entries)) {
    row_offsets_.reserve(interventions_.size());
    std::size_t offset = 0;
    for (const auto& iv : interventions_) {
      row_offsets_.push_back(offset);
      offset += iv.results.size();
    }
  }

  [[noreturn]] static void throw_first(const ValidationReport& report) {
    const Finding& f = report.findings.front();
    switch (f.code) {
      case Finding::Code::DimensionMismatch:
        throw DimensionMismatch(f.message);
      case Finding::Code::EntryOutOfRange:
        throw EntryOutOfRange(f.row, f.prep, f.detail);
      case Finding::Code::ColumnNotNormalized:
        throw ColumnNotNormalized(f.intervention, f.prep, f.detail);
      default:
        throw Error(f.message);
    }
  }

  std::vector<std::string> preparations_;
  std::vector<InterventionSpec> interventions_;
  Matrix<T> entries_;
  std::vector<std::size_t> row_offsets_;
};

using TableQ = Table<Rational>;
using TableF = Table<double>;

template <class T>
ValidationReport validate(const Table<T>& table,
                          double tol_norm = Tolerances{}.norm) {
  return validate_parts(table.preparations(), table.interventions(),
                        table.entries(), tol_norm);
}

inline TableF to_float(const TableQ& table) {
  Matrix<double> entries(table.num_rows(), table.num_preps());
  for (std::size_t i = 0; i < table.num_rows(); ++i)
    for (std::size_t j = 0; j < table.num_preps(); ++j)
      entries(i, j) = to_double(table.entry(i, j));
  return TableF::build(table.preparations(), table.interventions(),
                       std::move(entries));
}

template <class T>
struct CountsResult {
  Table<T> table;
  ValidationReport report;  // LowCount warnings land here
};

/// Frequency estimation: entry = count / cell total. A cell is one
/// (intervention, preparation) pair; zero-trial cells are an error since
/// no smoothing rule is applied.
template <class T>
CountsResult<T> table_from_counts(const Matrix<std::int64_t>& counts,
                                  std::vector<std::string> preparations,
                                  std::vector<InterventionSpec> interventions,
                                  std::int64_t low_count_threshold = 10) {
  std::size_t total_rows = 0;
  for (const auto& iv : interventions) total_rows += iv.results.size();
  if (counts.rows() != total_rows || counts.cols() != preparations.size())
    throw DimensionMismatch("count grid shape does not match the labels");
  for (std::size_t i = 0; i < counts.rows(); ++i)
    for (std::size_t j = 0; j < counts.cols(); ++j)
      if (counts(i, j) < 0)
        throw Error("negative count at (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ")");

  ValidationReport report;
  Matrix<T> entries(total_rows, preparations.size());
  std::size_t row = 0;
  for (std::size_t k = 0; k < interventions.size(); ++k) {
    const std::size_t nres = interventions[k].results.size();
    for (std::size_t j = 0; j < preparations.size(); ++j) {
      std::int64_t total = 0;
      for (std::size_t i = 0; i < nres; ++i) total += counts(row + i, j);
      if (total == 0) throw EmptyCell(k, j);
      if (total < low_count_threshold)
        report.warn(Finding::Code::LowCount,
                    "only " + std::to_string(total) +
                        " trial(s) for intervention '" +
                        interventions[k].name + "', preparation '" +
                        preparations[j] + "'");
      for (std::size_t i = 0; i < nres; ++i) {
        if constexpr (std::is_same_v<T, Rational>) {
          entries(row + i, j) = Rational(counts(row + i, j), total);
        } else {
          entries(row + i, j) = static_cast<double>(counts(row + i, j)) /
                                static_cast<double>(total);
        }
      }
    }
    row += nres;
  }
  auto table = Table<T>::build(std::move(preparations),
                               std::move(interventions), std::move(entries));
  return {std::move(table), std::move(report)};
}

}  // namespace probtable
