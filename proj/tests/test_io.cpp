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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "probtable/io.hpp"

using namespace probtable;
using fixtures::q;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("probtable_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("rational text forms are canonical") {
  CHECK(format_rational(q(3, 4)) == "3/4");
  CHECK(format_rational(q(-1, 2)) == "-1/2");
  CHECK(format_rational(q(6, 8)) == "3/4");
  CHECK(format_rational(q(2)) == "2");
  CHECK(format_rational(q(0)) == "0");

  CHECK(parse_rational("3/4") == q(3, 4));
  CHECK(parse_rational("-3/4") == q(-3, 4));
  CHECK(parse_rational("12") == q(12));
  CHECK(parse_rational("0.75") == q(3, 4));
  CHECK(parse_rational("-0.5") == q(-1, 2));
  CHECK(parse_rational(".5") == q(1, 2));

  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("nan"), ParseError);
  CHECK_THROWS_AS(parse_rational("inf"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
}

TEST_CASE("doubles serialize with enough digits to round-trip") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(0.0) == "0");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(io::format_double(x)) == x);
  CHECK_THROWS_AS(io::format_double(std::nan("")), Error);
  CHECK_THROWS_AS(io::format_double(INFINITY), Error);
}

TEST_CASE("tables round-trip through JSON byte-identically") {
  TempDir tmp;
  const auto table = fixtures::example_table();
  const std::string path = tmp.file("table.json");
  io::save_table(path, table);

  const auto loaded = io::load_valid_table(path);
  REQUIRE(std::holds_alternative<Table<Rational>>(loaded));
  CHECK(std::get<Table<Rational>>(loaded) == table);

  // serializing the reloaded table reproduces the file exactly
  CHECK(io::to_json(std::get<Table<Rational>>(loaded)) == io::read_file(path));
}

TEST_CASE("float tables round-trip through JSON") {
  TempDir tmp;
  const auto table = to_float(fixtures::example_table());
  const std::string path = tmp.file("table_f.json");
  io::save_table(path, table);
  const auto loaded = io::load_valid_table(path);
  REQUIRE(std::holds_alternative<Table<double>>(loaded));
  CHECK(std::get<Table<double>>(loaded) == table);
}

TEST_CASE("CSV import matches the JSON fixture") {
  TempDir tmp;
  const std::string csv =
      "intervention,result,S_1,S_2,S_3,S_4,S_5,S_6,S_7\n"
      "M_1,R_1,1,1/2,0,1/2,3/4,1/2,3/4\n"
      "M_1,R_2,0,1/2,1,1/2,1/4,1/2,1/4\n"
      "M_2,R_3,1/2,1,1/2,0,3/4,1/2,1/2\n"
      "M_2,R_4,1/2,0,1/2,1,1/4,1/2,1/2\n"
      "M_3,R_5,1,1,1,1,1,1,1\n"
      "M_3,R_6,0,0,0,0,0,0,0\n";
  const std::string path = tmp.file("table.csv");
  io::write_file(path, csv);
  const auto loaded = io::load_valid_table(path, ValueMode::Exact);
  CHECK(std::get<Table<Rational>>(loaded) == fixtures::example_table());
}

TEST_CASE("CSV rejects non-finite values") {
  TempDir tmp;
  const std::string path = tmp.file("bad.csv");
  io::write_file(path, "i,r,S\nM,R,nan\n");
  CHECK_THROWS_AS(io::load_table_csv(path, ValueMode::Floating), ParseError);
}

TEST_CASE("malformed JSON fails with position information") {
  TempDir tmp;
  const std::string path = tmp.file("broken.json");
  io::write_file(path, "{\"preparations\": [\"S\", }");
  try {
    io::load_table_json(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string message = e.what();
    CHECK(message.find(path) != std::string::npos);
    // the parser reports where in the input it gave up
    CHECK(message.find("parse error at") != std::string::npos);
  }
}

TEST_CASE("shape problems surface as findings, value problems as reports") {
  TempDir tmp;
  const std::string path = tmp.file("denormalized.json");
  io::write_file(path,
                 R"({"preparations": ["S"],
                     "interventions": [{"name": "M", "results": ["a", "b"]}],
                     "entries": [["1/2"], ["1/4"]],
                     "mode": "exact"})");
  const auto result = io::load_table_json(path);
  REQUIRE(result.table.has_value());
  const auto report =
      validate(std::get<Table<Rational>>(*result.table));
  REQUIRE_FALSE(report.ok());
  CHECK(report.findings[0].code == Finding::Code::ColumnNotNormalized);
  CHECK_THROWS_AS(io::load_valid_table(path), Error);
}

TEST_CASE("exact mode rejects floating literals in entries") {
  TempDir tmp;
  const std::string path = tmp.file("mixed.json");
  io::write_file(path,
                 R"({"preparations": ["S"],
                     "interventions": [{"name": "M", "results": ["a", "b"]}],
                     "entries": [[0.5], [0.5]],
                     "mode": "exact"})");
  CHECK_THROWS_AS(io::load_table_json(path), ParseError);
}

TEST_CASE("decompositions round-trip with their labels and grouping") {
  TempDir tmp;
  const auto table = fixtures::example_table();
  const auto dec = decompose(table, fixtures::example_basis());
  const std::string path = tmp.file("dec.json");
  io::save_decomposition(path, dec, Tolerances{});

  const auto loaded_any = io::load_decomposition(path);
  REQUIRE(std::holds_alternative<Decomposition<Rational>>(loaded_any));
  const auto& loaded = std::get<Decomposition<Rational>>(loaded_any);
  CHECK(loaded.rank == 3);
  CHECK(loaded.basis_x == dec.basis_x);
  CHECK(loaded.prep_labels == dec.prep_labels);
  CHECK(loaded.prep_vectors == dec.prep_vectors);
  CHECK(loaded.result_vectors == dec.result_vectors);
  CHECK(loaded.interventions == dec.interventions);
  CHECK(loaded.row_perm == dec.row_perm);

  // a reloaded decomposition still reconstructs the original table
  CHECK(reconstruct(loaded) == table);

  // determinism: emitting twice gives identical bytes
  CHECK(io::to_json(dec, Tolerances{}) == io::to_json(dec, Tolerances{}));
}

TEST_CASE("observation sets round-trip with provenance") {
  TempDir tmp;
  const auto obs = simulate_observations(fixtures::example_table(), 4,
                                         {{"M_1", 100}, {"M_2", 50}}, 321);
  const std::string path = tmp.file("obs.json");
  io::save_observations(path, obs);
  const auto loaded = io::load_observations(path);
  REQUIRE(loaded.entries.size() == obs.entries.size());
  for (std::size_t i = 0; i < obs.entries.size(); ++i) {
    CHECK(loaded.entries[i].intervention == obs.entries[i].intervention);
    CHECK(loaded.entries[i].result == obs.entries[i].result);
    CHECK(loaded.entries[i].count == obs.entries[i].count);
  }
  CHECK(*loaded.seed == 321);
  CHECK(*loaded.rng_algorithm == kRngAlgorithm);
  CHECK(*loaded.true_prep == "S_5");
}

TEST_CASE("tomography reports serialize every section") {
  const auto table = fixtures::example_table();
  const auto dec = decompose(table, fixtures::example_basis());
  const auto obs = simulate_observations(table, 4, {{"M_1", 10}}, 1);
  io::TomographyOutput<Rational> out;
  out.report = posterior(table, dec, uniform_prior<Rational>(7), obs);
  for (std::size_t k = 0; k < 3; ++k)
    out.predictions.push_back(predict(table, out.report.weights, k));
  out.observations = obs;
  const std::string text = io::to_json(table, out, Tolerances{});
  CHECK(text.find("\"posterior\"") != std::string::npos);
  CHECK(text.find("\"s_new\"") != std::string::npos);
  CHECK(text.find("\"predictions\"") != std::string::npos);
  CHECK(text.find("\"log_evidence\"") != std::string::npos);
  CHECK(text.find("\"seed\"") != std::string::npos);
}

TEST_CASE("geometry exports emit JSON and OFF data") {
  const auto dec =
      decompose(fixtures::example_table(), fixtures::example_basis());
  const auto geo = build_geometry_export(dec);
  const std::string json = io::geometry_to_json(geo, ValueMode::Exact,
                                                Tolerances{});
  CHECK(json.find("\"points\"") != std::string::npos);
  CHECK(json.find("\"facets\"") != std::string::npos);
  CHECK(json.find("\"hyperplane\"") != std::string::npos);

  const std::string off = io::family_to_off(geo.results);
  CHECK(off.substr(0, 4) == "OFF\n");
  CHECK(off.find("6 8 0") != std::string::npos);  // 6 points, 8 triangles
}

TEST_CASE("quantum models round-trip through re/im blocks") {
  TempDir tmp;
  const auto model = quantum::qubit_ic_preset();
  const std::string path = tmp.file("model.json");
  io::write_file(path, io::to_json(model));
  const auto loaded = io::load_quantum_model(path);
  CHECK(loaded.dim == 2);
  REQUIRE(loaded.states.size() == model.states.size());
  for (std::size_t j = 0; j < model.states.size(); ++j)
    CHECK((loaded.states[j] - model.states[j]).cwiseAbs().maxCoeff() <= 1e-16);
  REQUIRE(loaded.povms.size() == 3);
  CHECK(loaded.povms[2].name == "M_RL");
  const auto table_a = quantum::quantum_table(model);
  const auto table_b = quantum::quantum_table(loaded);
  CHECK(table_a == table_b);
}

TEST_CASE("count grids load into frequency tables") {
  TempDir tmp;
  const std::string path = tmp.file("counts.json");
  io::write_file(path, R"({
    "preparations": ["S_1", "S_2"],
    "interventions": [{"name": "M_1", "results": ["R_1", "R_2"]}],
    "counts": [[75, 40], [25, 60]]
  })");
  const auto grid = io::load_counts_grid(path);
  const auto result = table_from_counts<Rational>(grid.counts,
                                                  grid.preparations,
                                                  grid.interventions);
  CHECK(result.table.entry(0, 0) == q(3, 4));
  CHECK(result.table.entry(1, 1) == q(3, 5));
}

TEST_CASE("priors load keyed by preparation label") {
  TempDir tmp;
  const std::string path = tmp.file("prior.json");
  io::write_file(path, R"({"S_1": "1/2", "S_5": "1/2"})");
  const auto prior =
      io::load_prior<Rational>(path, fixtures::example_table());
  CHECK(prior[0] == q(1, 2));
  CHECK(prior[4] == q(1, 2));
  CHECK(prior[1] == 0);

  io::write_file(path, R"({"S_unknown": 1})");
  CHECK_THROWS_AS(io::load_prior<Rational>(path, fixtures::example_table()),
                  ParseError);
}

TEST_CASE("basis matrices load from bare arrays or wrapped objects") {
  TempDir tmp;
  const std::string path = tmp.file("basis.json");
  io::write_file(path, R"([["1","1","1"],["1","0","-1"],["0","1","0"]])");
  const auto loaded = io::load_matrix_json(path, ValueMode::Exact);
  CHECK(std::get<Matrix<Rational>>(loaded) == fixtures::example_basis());

  io::write_file(path, R"({"x": [[1, 0], [0, 1]]})");
  const auto wrapped = io::load_matrix_json(path, ValueMode::Exact);
  CHECK(std::get<Matrix<Rational>>(wrapped) == Matrix<Rational>::identity(2));
}
