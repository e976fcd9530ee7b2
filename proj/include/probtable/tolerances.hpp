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

namespace probtable {

/// Numerical tolerances used by the floating-point mode. Exact-rational
/// computations ignore all of them. A zero `rank` or `pivot` means
/// "derive from the matrix": rank uses max(L,M) * sigma_max * eps,
/// pivot uses max(L,M) * eps * max|entry|.
struct Tolerances {
  double norm = 1e-9;   // column-normalization slack
  double rec = 1e-9;    // reconstruction error bound
  double geo = 1e-8;    // geometric comparisons (sum vectors, hulls)
  double herm = 1e-10;  // Hermiticity / trace / orthonormality slack
  double psd = 1e-10;   // eigenvalue negativity slack
  double rank = 0.0;    // singular-value threshold; 0 = automatic
  double pivot = 0.0;   // elimination pivot threshold; 0 = automatic
};

}  // namespace probtable
