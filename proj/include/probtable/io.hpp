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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "probtable/decompose.hpp"
#include "probtable/geometry.hpp"
#include "probtable/inference.hpp"
#include "probtable/quantum.hpp"
#include "probtable/table.hpp"

// File formats. All emitters are deterministic: fixed key order, rationals
// in canonical n/d form, doubles with up to 17 significant digits, so
// identical inputs give byte-identical files.
namespace probtable::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// "%.17g" with a finiteness check; NaN/Inf never reach output files.
std::string format_double(double v);

/// Streaming JSON emitter with explicit structure calls. Keys appear in
/// call order; no reordering or float reformatting happens downstream.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  std::string take();

 private:
  void pre_value();
  std::string out_;
  struct Frame {
    char kind;
    bool first = true;
  };
  std::vector<Frame> stack_;
  bool pending_key_ = false;
};

using AnyTable = std::variant<Table<Rational>, Table<double>>;
using AnyDecomposition =
    std::variant<Decomposition<Rational>, Decomposition<double>>;
using AnyMatrix = std::variant<Matrix<Rational>, Matrix<double>>;

inline ValueMode mode_of(const AnyTable& t) {
  return std::holds_alternative<Table<Rational>>(t) ? ValueMode::Exact
                                                    : ValueMode::Floating;
}

struct TableLoadResult {
  std::optional<AnyTable> table;  // absent when the shape itself is broken
  ValidationReport report;
};

// -- probability tables ------------------------------------------------------

TableLoadResult load_table_json(const std::string& path);
TableLoadResult load_table_csv(const std::string& path, ValueMode mode);

/// Dispatch on extension (.csv vs JSON) and throw on any finding.
AnyTable load_valid_table(const std::string& path,
                          ValueMode csv_mode = ValueMode::Exact,
                          double tol_norm = Tolerances{}.norm);

std::string to_json(const Table<Rational>& table);
std::string to_json(const Table<double>& table);
void save_table(const std::string& path, const AnyTable& table);

// -- decompositions ----------------------------------------------------------

std::string to_json(const Decomposition<Rational>& dec, const Tolerances& tol);
std::string to_json(const Decomposition<double>& dec, const Tolerances& tol);
void save_decomposition(const std::string& path, const AnyDecomposition& dec,
                        const Tolerances& tol);
AnyDecomposition load_decomposition(const std::string& path);

// -- observations and posterior reports --------------------------------------

std::string to_json(const ObservationSet& obs);
void save_observations(const std::string& path, const ObservationSet& obs);
ObservationSet load_observations(const std::string& path);

template <class T>
struct TomographyOutput {
  PosteriorReport<T> report;
  std::vector<std::vector<T>> predictions;  // one per intervention
  ObservationSet observations;
};

std::string to_json(const Table<Rational>& table,
                    const TomographyOutput<Rational>& out,
                    const Tolerances& tol);
std::string to_json(const Table<double>& table,
                    const TomographyOutput<double>& out, const Tolerances& tol);

// -- geometry ----------------------------------------------------------------

std::string geometry_to_json(const GeometryExport& geo, ValueMode mode,
                             const Tolerances& tol);

/// OFF export of one point family. Uses the raw coordinates when the
/// ambient dimension is at most 3, otherwise the intrinsic frame; either
/// way coordinates are padded to exactly three components.
std::string family_to_off(const PointFamily& family);

// -- quantum models ----------------------------------------------------------

quantum::QuantumModel load_quantum_model(const std::string& path);
std::string to_json(const quantum::QuantumModel& model);

// -- helpers for CLI inputs --------------------------------------------------

AnyMatrix load_matrix_json(const std::string& path, ValueMode mode);

struct CountsGrid {
  std::vector<std::string> preparations;
  std::vector<InterventionSpec> interventions;
  Matrix<std::int64_t> counts;
};
CountsGrid load_counts_grid(const std::string& path);

/// Prior weights keyed by preparation label; missing labels get weight 0.
template <class T>
std::vector<T> load_prior(const std::string& path, const Table<T>& table);

}  // namespace probtable::io
