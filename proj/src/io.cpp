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

#include "probtable/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace probtable::io {

using njson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

// ---------------------------------------------------------------------------
// JsonWriter
// ---------------------------------------------------------------------------

void JsonWriter::pre_value() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!stack_.empty()) {
    if (!stack_.back().first) out_ += ',';
    stack_.back().first = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  pre_value();
  out_ += '{';
  stack_.push_back({'o'});
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  stack_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  pre_value();
  out_ += '[';
  stack_.push_back({'a'});
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  stack_.pop_back();
  return *this;
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

JsonWriter& JsonWriter::key(std::string_view k) {
  if (!stack_.empty()) {
    if (!stack_.back().first) out_ += ',';
    stack_.back().first = false;
  }
  append_escaped(out_, k);
  out_ += ':';
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  pre_value();
  append_escaped(out_, v);
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  pre_value();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  pre_value();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  pre_value();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  pre_value();
  out_ += v ? "true" : "false";
  return *this;
}

std::string JsonWriter::take() {
  out_ += '\n';
  return std::move(out_);
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw Error("refusing to serialize a non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared parsing helpers
// ---------------------------------------------------------------------------

namespace {

njson parse_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return njson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

const njson& require(const njson& j, const char* field, const char* where) {
  auto it = j.find(field);
  if (it == j.end())
    throw ParseError(std::string(where) + ": missing field '" + field + "'");
  return *it;
}

std::string require_string(const njson& j, const char* field,
                           const char* where) {
  const njson& v = require(j, field, where);
  if (!v.is_string())
    throw ParseError(std::string(where) + ": field '" + field +
                     "' must be a string");
  return v.get<std::string>();
}

template <class T>
T parse_value(const njson& v, const char* where) {
  if constexpr (std::is_same_v<T, Rational>) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_float())
      throw ParseError(std::string(where) +
                       ": exact mode needs integers or rational strings, got "
                       "a floating-point literal");
    throw ParseError(std::string(where) + ": expected a number or a string");
  } else {
    if (v.is_number()) {
      const double d = v.get<double>();
      if (!std::isfinite(d))
        throw ParseError(std::string(where) + ": non-finite value");
      return d;
    }
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    throw ParseError(std::string(where) + ": expected a number or a string");
  }
}

template <class T>
Matrix<T> parse_matrix(const njson& rows, const char* where) {
  if (!rows.is_array())
    throw ParseError(std::string(where) + ": expected an array of rows");
  const std::size_t n_rows = rows.size();
  std::size_t n_cols = 0;
  if (n_rows > 0) {
    if (!rows[0].is_array())
      throw ParseError(std::string(where) + ": rows must be arrays");
    n_cols = rows[0].size();
  }
  Matrix<T> out(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n_cols)
      throw ParseError(std::string(where) + ": ragged row " +
                       std::to_string(i + 1));
    for (std::size_t j = 0; j < n_cols; ++j)
      out(i, j) = parse_value<T>(rows[i][j], where);
  }
  return out;
}

std::vector<InterventionSpec> parse_interventions(const njson& arr,
                                                  const char* where) {
  if (!arr.is_array())
    throw ParseError(std::string(where) +
                     ": 'interventions' must be an array");
  std::vector<InterventionSpec> out;
  for (const auto& item : arr) {
    InterventionSpec spec;
    spec.name = require_string(item, "name", where);
    const njson& res = require(item, "results", where);
    if (!res.is_array())
      throw ParseError(std::string(where) + ": 'results' must be an array");
    for (const auto& r : res) {
      if (!r.is_string())
        throw ParseError(std::string(where) + ": result labels must be strings");
      spec.results.push_back(r.get<std::string>());
    }
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<std::string> parse_labels(const njson& arr, const char* field,
                                      const char* where) {
  if (!arr.is_array())
    throw ParseError(std::string(where) + ": '" + field +
                     "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string())
      throw ParseError(std::string(where) + ": '" + field +
                       "' entries must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

ValueMode parse_mode(const njson& j, const char* where) {
  const std::string mode = require_string(j, "mode", where);
  if (mode == "exact") return ValueMode::Exact;
  if (mode == "float") return ValueMode::Floating;
  throw ParseError(std::string(where) + ": mode must be 'exact' or 'float'");
}

template <class T>
void write_value(JsonWriter& w, const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    w.value(format_rational(v));
  } else {
    w.value(v);
  }
}

template <class T>
void write_matrix(JsonWriter& w, const Matrix<T>& m) {
  w.begin_array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (std::size_t j = 0; j < m.cols(); ++j) write_value(w, m(i, j));
    w.end_array();
  }
  w.end_array();
}

template <class T>
void write_vector(JsonWriter& w, const std::vector<T>& v) {
  w.begin_array();
  for (const auto& x : v) write_value(w, x);
  w.end_array();
}

void write_tolerances(JsonWriter& w, const Tolerances& tol) {
  w.begin_object();
  w.key("norm").value(tol.norm);
  w.key("rec").value(tol.rec);
  w.key("geo").value(tol.geo);
  w.key("herm").value(tol.herm);
  w.key("psd").value(tol.psd);
  w.key("rank").value(tol.rank);
  w.key("pivot").value(tol.pivot);
  w.end_object();
}

}  // namespace

// ---------------------------------------------------------------------------
// Probability tables
// ---------------------------------------------------------------------------

namespace {

template <class T>
TableLoadResult build_table_result(std::vector<std::string> preps,
                                   std::vector<InterventionSpec> interventions,
                                   Matrix<T> entries) {
  TableLoadResult out;
  out.report = validate_parts(preps, interventions, entries);
  std::size_t total_rows = 0;
  for (const auto& iv : interventions) total_rows += iv.results.size();
  if (entries.rows() == total_rows && entries.cols() == preps.size() &&
      !preps.empty() && !interventions.empty()) {
    out.table = Table<T>::unchecked(std::move(preps), std::move(interventions),
                                    std::move(entries));
  }
  return out;
}

}  // namespace

TableLoadResult load_table_json(const std::string& path) {
  const njson j = parse_json(path);
  const char* where = "table";
  auto preps = parse_labels(require(j, "preparations", where), "preparations",
                            where);
  auto interventions =
      parse_interventions(require(j, "interventions", where), where);
  const ValueMode mode = parse_mode(j, where);
  const njson& entries = require(j, "entries", where);
  if (mode == ValueMode::Exact) {
    return build_table_result(std::move(preps), std::move(interventions),
                              parse_matrix<Rational>(entries, where));
  }
  return build_table_result(std::move(preps), std::move(interventions),
                            parse_matrix<double>(entries, where));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace

TableLoadResult load_table_csv(const std::string& path, ValueMode mode) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty CSV");
  const auto header = split_csv_line(line);
  if (header.size() < 3)
    throw ParseError(path + ": header needs intervention, result and at least "
                            "one preparation column");
  std::vector<std::string> preps(header.begin() + 2, header.end());

  std::vector<InterventionSpec> interventions;
  std::vector<std::vector<std::string>> raw_rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(path + ": row with " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(header.size()));
    if (interventions.empty() || interventions.back().name != fields[0])
      interventions.push_back({fields[0], {}});
    interventions.back().results.push_back(fields[1]);
    raw_rows.emplace_back(fields.begin() + 2, fields.end());
  }

  const auto parse_cell = [&](const std::string& cell) {
    try {
      return parse_rational(cell);
    } catch (const ParseError&) {
      throw ParseError(path + ": invalid value '" + cell + "'");
    }
  };

  if (mode == ValueMode::Exact) {
    Matrix<Rational> entries(raw_rows.size(), preps.size());
    for (std::size_t i = 0; i < raw_rows.size(); ++i)
      for (std::size_t j = 0; j < preps.size(); ++j)
        entries(i, j) = parse_cell(raw_rows[i][j]);
    return build_table_result(std::move(preps), std::move(interventions),
                              std::move(entries));
  }
  Matrix<double> entries(raw_rows.size(), preps.size());
  for (std::size_t i = 0; i < raw_rows.size(); ++i)
    for (std::size_t j = 0; j < preps.size(); ++j)
      entries(i, j) = to_double(parse_cell(raw_rows[i][j]));
  return build_table_result(std::move(preps), std::move(interventions),
                            std::move(entries));
}

AnyTable load_valid_table(const std::string& path, ValueMode csv_mode,
                          double tol_norm) {
  const bool is_csv =
      path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  TableLoadResult loaded =
      is_csv ? load_table_csv(path, csv_mode) : load_table_json(path);
  ValidationReport report =
      loaded.table ? std::visit(
                         [&](const auto& t) { return validate(t, tol_norm); },
                         *loaded.table)
                   : loaded.report;
  if (!report.ok()) throw Error(path + ": " + report.findings.front().message);
  return std::move(*loaded.table);
}

namespace {

template <class T>
std::string table_to_json_impl(const Table<T>& table) {
  JsonWriter w;
  w.begin_object();
  w.key("preparations");
  w.begin_array();
  for (const auto& p : table.preparations()) w.value(p);
  w.end_array();
  w.key("interventions");
  w.begin_array();
  for (const auto& iv : table.interventions()) {
    w.begin_object();
    w.key("name").value(iv.name);
    w.key("results");
    w.begin_array();
    for (const auto& r : iv.results) w.value(r);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("entries");
  write_matrix(w, table.entries());
  w.key("mode").value(mode_name(Table<T>::mode()));
  w.end_object();
  return w.take();
}

}  // namespace

std::string to_json(const Table<Rational>& table) {
  return table_to_json_impl(table);
}
std::string to_json(const Table<double>& table) {
  return table_to_json_impl(table);
}

void save_table(const std::string& path, const AnyTable& table) {
  std::visit([&](const auto& t) { write_file(path, to_json(t)); }, table);
}

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

namespace {

template <class T>
std::string decomposition_to_json_impl(const Decomposition<T>& dec,
                                       const Tolerances& tol) {
  JsonWriter w;
  w.begin_object();
  w.key("K").value(dec.rank);
  w.key("x");
  write_matrix(w, dec.basis_x);
  w.key("preparation_vectors");
  w.begin_object();
  for (std::size_t j = 0; j < dec.num_preps(); ++j) {
    w.key(dec.prep_labels[j]);
    write_vector(w, dec.prep_vectors[j]);
  }
  w.end_object();
  w.key("result_vectors");
  w.begin_object();
  std::size_t row = 0;
  for (const auto& iv : dec.interventions) {
    w.key(iv.name);
    w.begin_object();
    for (const auto& r : iv.results) {
      w.key(r);
      write_vector(w, dec.result_vectors[row++]);
    }
    w.end_object();
  }
  w.end_object();
  w.key("row_perm");
  w.begin_array();
  for (std::size_t i : dec.row_perm) w.value(i);
  w.end_array();
  w.key("col_perm");
  w.begin_array();
  for (std::size_t i : dec.col_perm) w.value(i);
  w.end_array();
  w.key("mode").value(mode_name(Decomposition<T>::mode()));
  w.key("meta");
  w.begin_object();
  w.key("tolerances");
  write_tolerances(w, tol);
  w.end_object();
  w.end_object();
  return w.take();
}

template <class T>
Decomposition<T> decomposition_from_json(const njson& j) {
  const char* where = "decomposition";
  Decomposition<T> dec;
  const njson& k = require(j, "K", where);
  if (!k.is_number_unsigned())
    throw ParseError("decomposition: 'K' must be a nonnegative integer");
  dec.rank = k.get<std::size_t>();
  dec.basis_x = parse_matrix<T>(require(j, "x", where), where);

  const njson& preps = require(j, "preparation_vectors", where);
  if (!preps.is_object())
    throw ParseError("decomposition: 'preparation_vectors' must be an object");
  for (const auto& [label, coords] : preps.items()) {
    dec.prep_labels.push_back(label);
    std::vector<T> v;
    for (const auto& c : coords) v.push_back(parse_value<T>(c, where));
    if (v.size() != dec.rank)
      throw ParseError("decomposition: vector '" + label +
                       "' has wrong length");
    dec.prep_vectors.push_back(std::move(v));
  }

  const njson& results = require(j, "result_vectors", where);
  if (!results.is_object())
    throw ParseError("decomposition: 'result_vectors' must be an object");
  for (const auto& [name, group] : results.items()) {
    InterventionSpec spec;
    spec.name = name;
    if (!group.is_object())
      throw ParseError("decomposition: result group '" + name +
                       "' must be an object");
    for (const auto& [rname, coords] : group.items()) {
      spec.results.push_back(rname);
      std::vector<T> v;
      for (const auto& c : coords) v.push_back(parse_value<T>(c, where));
      if (v.size() != dec.rank)
        throw ParseError("decomposition: vector '" + name + "/" + rname +
                         "' has wrong length");
      dec.result_vectors.push_back(std::move(v));
    }
    dec.interventions.push_back(std::move(spec));
  }

  for (const auto& idx : require(j, "row_perm", where))
    dec.row_perm.push_back(idx.get<std::size_t>());
  for (const auto& idx : require(j, "col_perm", where))
    dec.col_perm.push_back(idx.get<std::size_t>());
  return dec;
}

}  // namespace

std::string to_json(const Decomposition<Rational>& dec, const Tolerances& tol) {
  return decomposition_to_json_impl(dec, tol);
}
std::string to_json(const Decomposition<double>& dec, const Tolerances& tol) {
  return decomposition_to_json_impl(dec, tol);
}

void save_decomposition(const std::string& path, const AnyDecomposition& dec,
                        const Tolerances& tol) {
  std::visit([&](const auto& d) { write_file(path, to_json(d, tol)); }, dec);
}

AnyDecomposition load_decomposition(const std::string& path) {
  const njson j = parse_json(path);
  if (parse_mode(j, "decomposition") == ValueMode::Exact)
    return decomposition_from_json<Rational>(j);
  return decomposition_from_json<double>(j);
}

// ---------------------------------------------------------------------------
// Observations
// ---------------------------------------------------------------------------

std::string to_json(const ObservationSet& obs) {
  JsonWriter w;
  w.begin_object();
  w.key("counts");
  w.begin_array();
  for (const auto& e : obs.entries) {
    w.begin_object();
    w.key("intervention").value(e.intervention);
    w.key("result").value(e.result);
    w.key("n").value(static_cast<std::int64_t>(e.count));
    w.end_object();
  }
  w.end_array();
  if (obs.seed) w.key("seed").value(*obs.seed);
  if (obs.rng_algorithm) w.key("rng").value(*obs.rng_algorithm);
  if (obs.true_prep) w.key("true_prep").value(*obs.true_prep);
  w.end_object();
  return w.take();
}

void save_observations(const std::string& path, const ObservationSet& obs) {
  write_file(path, to_json(obs));
}

ObservationSet load_observations(const std::string& path) {
  const njson j = parse_json(path);
  const char* where = "observations";
  ObservationSet obs;
  const njson& counts = require(j, "counts", where);
  if (!counts.is_array())
    throw ParseError("observations: 'counts' must be an array");
  for (const auto& item : counts) {
    const std::string intervention = require_string(item, "intervention", where);
    const std::string result = require_string(item, "result", where);
    const njson& n = require(item, "n", where);
    if (!n.is_number_integer())
      throw ParseError("observations: 'n' must be an integer");
    obs.add(intervention, result, n.get<std::int64_t>());
  }
  if (j.contains("seed")) obs.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("rng")) obs.rng_algorithm = j["rng"].get<std::string>();
  if (j.contains("true_prep")) obs.true_prep = j["true_prep"].get<std::string>();
  return obs;
}

// ---------------------------------------------------------------------------
// Tomography reports
// ---------------------------------------------------------------------------

namespace {

template <class T>
std::string tomography_to_json_impl(const Table<T>& table,
                                    const TomographyOutput<T>& out,
                                    const Tolerances& tol) {
  JsonWriter w;
  w.begin_object();
  w.key("mode").value(mode_name(Table<T>::mode()));
  w.key("posterior");
  w.begin_object();
  for (std::size_t j = 0; j < table.num_preps(); ++j) {
    w.key(table.preparations()[j]);
    write_value(w, out.report.weights[j]);
  }
  w.end_object();
  w.key("log_evidence").value(out.report.log_evidence);
  if (out.report.effective) {
    w.key("s_new");
    write_vector(w, *out.report.effective);
  }
  w.key("predictions");
  w.begin_object();
  for (std::size_t k = 0; k < table.num_interventions(); ++k) {
    const auto& iv = table.intervention(k);
    w.key(iv.name);
    w.begin_object();
    for (std::size_t i = 0; i < iv.results.size(); ++i) {
      w.key(iv.results[i]);
      write_value(w, out.predictions[k][i]);
    }
    w.end_object();
  }
  w.end_object();
  w.key("observations");
  w.begin_array();
  for (const auto& e : out.observations.entries) {
    w.begin_object();
    w.key("intervention").value(e.intervention);
    w.key("result").value(e.result);
    w.key("n").value(static_cast<std::int64_t>(e.count));
    w.end_object();
  }
  w.end_array();
  w.key("meta");
  w.begin_object();
  if (out.observations.seed) w.key("seed").value(*out.observations.seed);
  if (out.observations.rng_algorithm)
    w.key("rng").value(*out.observations.rng_algorithm);
  if (out.observations.true_prep)
    w.key("true_prep").value(*out.observations.true_prep);
  w.key("tolerances");
  write_tolerances(w, tol);
  w.end_object();
  w.end_object();
  return w.take();
}

}  // namespace

std::string to_json(const Table<Rational>& table,
                    const TomographyOutput<Rational>& out,
                    const Tolerances& tol) {
  return tomography_to_json_impl(table, out, tol);
}
std::string to_json(const Table<double>& table,
                    const TomographyOutput<double>& out, const Tolerances& tol) {
  return tomography_to_json_impl(table, out, tol);
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

std::string geometry_to_json(const GeometryExport& geo, ValueMode mode,
                             const Tolerances& tol) {
  JsonWriter w;
  w.begin_object();
  w.key("mode").value(mode_name(mode));
  w.key("points");
  w.begin_array();
  const auto write_family_points = [&](const PointFamily& fam) {
    for (std::size_t i = 0; i < fam.labels.size(); ++i) {
      w.begin_object();
      w.key("label").value(fam.labels[i]);
      w.key("kind").value(fam.kind);
      w.key("coords");
      w.begin_array();
      for (double c : fam.coords[i]) w.value(c);
      w.end_array();
      w.key("intrinsic");
      w.begin_array();
      for (double c : fam.plane_coords[i]) w.value(c);
      w.end_array();
      w.end_object();
    }
  };
  write_family_points(geo.preps);
  write_family_points(geo.results);
  w.end_array();

  w.key("facets");
  w.begin_array();
  const auto write_family_facets = [&](const PointFamily& fam,
                                       std::size_t offset) {
    for (const auto& facet : fam.facets) {
      w.begin_array();
      for (std::size_t idx : facet) w.value(idx + offset);
      w.end_array();
    }
  };
  write_family_facets(geo.preps, 0);
  write_family_facets(geo.results, geo.preps.labels.size());
  w.end_array();

  if (geo.hyperplane_normal) {
    w.key("hyperplane");
    w.begin_object();
    w.key("normal");
    w.begin_array();
    for (double c : *geo.hyperplane_normal) w.value(c);
    w.end_array();
    w.key("offset").value(geo.hyperplane_offset);
    w.end_object();
  }

  w.key("affine_dims");
  w.begin_object();
  w.key("prep").value(geo.preps.affine_dim);
  w.key("result").value(geo.results.affine_dim);
  w.end_object();

  w.key("warnings");
  w.begin_array();
  for (const auto& warning : geo.warnings) w.value(warning);
  w.end_array();

  w.key("meta");
  w.begin_object();
  w.key("tolerances");
  write_tolerances(w, tol);
  w.end_object();
  w.end_object();
  return w.take();
}

std::string family_to_off(const PointFamily& family) {
  const bool use_raw =
      !family.coords.empty() && family.coords[0].size() <= 3;
  const auto& pts = use_raw ? family.coords : family.plane_coords;

  std::string out = "OFF\n";
  out += std::to_string(pts.size()) + " " +
         std::to_string(family.facets.size()) + " 0\n";
  for (const auto& p : pts) {
    for (std::size_t t = 0; t < 3; ++t) {
      if (t) out += ' ';
      out += format_double(t < p.size() ? p[t] : 0.0);
    }
    out += '\n';
  }
  for (const auto& facet : family.facets) {
    out += std::to_string(facet.size());
    for (std::size_t idx : facet) out += ' ' + std::to_string(idx);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantum models
// ---------------------------------------------------------------------------

namespace {

quantum::CMatrix parse_complex_matrix(const njson& j, const char* where) {
  const Matrix<double> re = parse_matrix<double>(require(j, "re", where), where);
  const Matrix<double> im = parse_matrix<double>(require(j, "im", where), where);
  if (re.rows() != im.rows() || re.cols() != im.cols())
    throw ParseError(std::string(where) + ": re/im shapes differ");
  quantum::CMatrix out(re.rows(), re.cols());
  for (std::size_t i = 0; i < re.rows(); ++i)
    for (std::size_t j2 = 0; j2 < re.cols(); ++j2)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j2)) = {
          re(i, j2), im(i, j2)};
  return out;
}

void write_complex_matrix(JsonWriter& w, const quantum::CMatrix& m) {
  w.key("re");
  w.begin_array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.value(m(i, j).real());
    w.end_array();
  }
  w.end_array();
  w.key("im");
  w.begin_array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.value(m(i, j).imag());
    w.end_array();
  }
  w.end_array();
}

}  // namespace

quantum::QuantumModel load_quantum_model(const std::string& path) {
  const njson j = parse_json(path);
  const char* where = "quantum model";
  quantum::QuantumModel model;
  const njson& dim = require(j, "dimension", where);
  if (!dim.is_number_integer())
    throw ParseError("quantum model: 'dimension' must be an integer");
  model.dim = dim.get<int>();

  const njson& states = require(j, "states", where);
  if (!states.is_array())
    throw ParseError("quantum model: 'states' must be an array");
  for (const auto& s : states) {
    model.state_labels.push_back(require_string(s, "label", where));
    model.states.push_back(parse_complex_matrix(s, where));
  }

  const njson& povms = require(j, "povms", where);
  if (!povms.is_array())
    throw ParseError("quantum model: 'povms' must be an array");
  for (const auto& p : povms) {
    quantum::Povm povm;
    povm.name = require_string(p, "name", where);
    const njson& elements = require(p, "elements", where);
    if (!elements.is_array())
      throw ParseError("quantum model: 'elements' must be an array");
    for (const auto& el : elements) {
      povm.results.push_back(require_string(el, "result", where));
      povm.elements.push_back(parse_complex_matrix(el, where));
    }
    model.povms.push_back(std::move(povm));
  }
  return model;
}

std::string to_json(const quantum::QuantumModel& model) {
  JsonWriter w;
  w.begin_object();
  w.key("dimension").value(static_cast<std::int64_t>(model.dim));
  w.key("states");
  w.begin_array();
  for (std::size_t j = 0; j < model.states.size(); ++j) {
    w.begin_object();
    w.key("label").value(model.state_labels[j]);
    write_complex_matrix(w, model.states[j]);
    w.end_object();
  }
  w.end_array();
  w.key("povms");
  w.begin_array();
  for (const auto& povm : model.povms) {
    w.begin_object();
    w.key("name").value(povm.name);
    w.key("elements");
    w.begin_array();
    for (std::size_t i = 0; i < povm.elements.size(); ++i) {
      w.begin_object();
      w.key("result").value(povm.results[i]);
      write_complex_matrix(w, povm.elements[i]);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

// ---------------------------------------------------------------------------
// CLI input helpers
// ---------------------------------------------------------------------------

AnyMatrix load_matrix_json(const std::string& path, ValueMode mode) {
  const njson j = parse_json(path);
  const njson& rows = j.is_object() ? require(j, "x", "matrix") : j;
  if (mode == ValueMode::Exact) return parse_matrix<Rational>(rows, "matrix");
  return parse_matrix<double>(rows, "matrix");
}

CountsGrid load_counts_grid(const std::string& path) {
  const njson j = parse_json(path);
  const char* where = "counts";
  CountsGrid out;
  out.preparations =
      parse_labels(require(j, "preparations", where), "preparations", where);
  out.interventions =
      parse_interventions(require(j, "interventions", where), where);
  const njson& counts = require(j, "counts", where);
  if (!counts.is_array())
    throw ParseError("counts: 'counts' must be an array of rows");
  const std::size_t n_rows = counts.size();
  const std::size_t n_cols = n_rows > 0 ? counts[0].size() : 0;
  out.counts = Matrix<std::int64_t>(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (!counts[i].is_array() || counts[i].size() != n_cols)
      throw ParseError("counts: ragged row " + std::to_string(i + 1));
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (!counts[i][c].is_number_integer())
        throw ParseError("counts: entries must be integers");
      out.counts(i, c) = counts[i][c].get<std::int64_t>();
    }
  }
  return out;
}

template <class T>
std::vector<T> load_prior(const std::string& path, const Table<T>& table) {
  const njson j = parse_json(path);
  if (!j.is_object()) throw ParseError("prior: expected an object of weights");
  std::vector<T> prior(table.num_preps(), T{});
  for (const auto& [label, weight] : j.items()) {
    auto idx = table.find_prep(label);
    if (!idx) throw ParseError("prior: unknown preparation '" + label + "'");
    prior[*idx] = parse_value<T>(weight, "prior");
  }
  return prior;
}

template std::vector<Rational> load_prior(const std::string&,
                                          const Table<Rational>&);
template std::vector<double> load_prior(const std::string&,
                                        const Table<double>&);

}  // namespace probtable::io
