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

#include <vector>

#include "probtable/decompose.hpp"
#include "probtable/table.hpp"

// The bundled worked example: 3 two-result interventions over 7
// preparations, rank 3, with a reference basis whose vectors are known in
// closed form. Frozen here as the ground truth the suites check against.
namespace fixtures {

using probtable::InterventionSpec;
using probtable::Matrix;
using probtable::Rational;
using probtable::Table;

inline Rational q(long n, long d = 1) { return Rational(n, d); }

inline Table<Rational> example_table() {
  std::vector<std::string> preps{"S_1", "S_2", "S_3", "S_4",
                                 "S_5", "S_6", "S_7"};
  std::vector<InterventionSpec> interventions{
      {"M_1", {"R_1", "R_2"}},
      {"M_2", {"R_3", "R_4"}},
      {"M_3", {"R_5", "R_6"}},
  };
  Matrix<Rational> entries(6, 7);
  const long grid[6][7][2] = {
      {{1, 1}, {1, 2}, {0, 1}, {1, 2}, {3, 4}, {1, 2}, {3, 4}},
      {{0, 1}, {1, 2}, {1, 1}, {1, 2}, {1, 4}, {1, 2}, {1, 4}},
      {{1, 2}, {1, 1}, {1, 2}, {0, 1}, {3, 4}, {1, 2}, {1, 2}},
      {{1, 2}, {0, 1}, {1, 2}, {1, 1}, {1, 4}, {1, 2}, {1, 2}},
      {{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}},
      {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}},
  };
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      entries(i, j) = q(grid[i][j][0], grid[i][j][1]);
  return Table<Rational>::build(std::move(preps), std::move(interventions),
                                std::move(entries));
}

/// The reference basis x = ((1,1,1),(1,0,-1),(0,1,0)).
inline Matrix<Rational> example_basis() {
  Matrix<Rational> x(3, 3);
  x(0, 0) = 1;  x(0, 1) = 1;  x(0, 2) = 1;
  x(1, 0) = 1;  x(1, 1) = 0;  x(1, 2) = -1;
  x(2, 0) = 0;  x(2, 1) = 1;  x(2, 2) = 0;
  return x;
}

/// Preparation vectors in the reference basis, original column order.
inline std::vector<std::vector<Rational>> example_prep_vectors() {
  return {
      {q(1), q(1), q(0)},     {q(1), q(0), q(1)},      {q(1), q(-1), q(0)},
      {q(1), q(0), q(-1)},    {q(1), q(1, 2), q(1, 2)}, {q(1), q(0), q(0)},
      {q(1), q(1, 2), q(0)},
  };
}

/// Result vectors in the reference basis, original row order.
inline std::vector<std::vector<Rational>> example_result_vectors() {
  return {
      {q(1, 2), q(1, 2), q(0)}, {q(1, 2), q(-1, 2), q(0)},
      {q(1, 2), q(0), q(1, 2)}, {q(1, 2), q(0), q(-1, 2)},
      {q(1), q(0), q(0)},       {q(0), q(0), q(0)},
  };
}

/// The same table with one preparation column removed (for embedding
/// experiments that treat it as an unseen phenomenon).
inline Table<Rational> example_table_without(std::size_t drop_col) {
  const auto full = example_table();
  std::vector<std::string> preps;
  for (std::size_t j = 0; j < full.num_preps(); ++j)
    if (j != drop_col) preps.push_back(full.preparations()[j]);
  Matrix<Rational> entries(full.num_rows(), preps.size());
  std::size_t out_col = 0;
  for (std::size_t j = 0; j < full.num_preps(); ++j) {
    if (j == drop_col) continue;
    for (std::size_t i = 0; i < full.num_rows(); ++i)
      entries(i, out_col) = full.entry(i, j);
    ++out_col;
  }
  return Table<Rational>::build(std::move(preps), full.interventions(),
                                std::move(entries));
}

}  // namespace fixtures
