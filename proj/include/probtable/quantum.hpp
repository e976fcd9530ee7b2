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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "probtable/table.hpp"
#include "probtable/tolerances.hpp"

namespace probtable::quantum {

using CMatrix = Eigen::MatrixXcd;

/// One positive-operator-valued measure: elements are Hermitian, PSD and
/// sum to the identity; each element is one intervention result.
struct Povm {
  std::string name;
  std::vector<std::string> results;
  std::vector<CMatrix> elements;
};

/// States (density matrices) plus POVMs over one Hilbert space. Only real
/// tables and vectors leave this module; complex arithmetic stays inside.
struct QuantumModel {
  int dim = 0;
  std::vector<std::string> state_labels;
  std::vector<CMatrix> states;
  std::vector<Povm> povms;
};

/// Orthonormal Hermitian operator basis, tr(B_k B_l) = delta_kl, in the
/// canonical order: identity / sqrt(N), then the symmetric and
/// antisymmetric off-diagonal families, then the diagonal family.
std::vector<CMatrix> hermitian_basis(int n);

/// Real expansion coefficients c_k = tr(op * B_k); sum_k c_k B_k
/// reconstructs the operator. Throws NotHermitian for non-Hermitian input.
std::vector<double> expand(const CMatrix& op, const std::vector<CMatrix>& basis,
                           double tol_herm = Tolerances{}.herm);

/// p = tr(effect * state), checked real and inside [-tol.psd, 1 + tol.psd],
/// then clamped to [0, 1].
double trace_probability(const CMatrix& effect, const CMatrix& state,
                         const Tolerances& tol = {});

struct ScalarProductCheck {
  double trace_value = 0.0;
  double dot_value = 0.0;
  bool agree = false;
};

/// Executable form of the trace-rule equivalence: expands both operators
/// in a shared orthonormal basis and compares tr(effect * state) with the
/// real scalar product of the coefficient vectors.
ScalarProductCheck scalar_product_check(const CMatrix& effect,
                                        const CMatrix& state,
                                        const std::vector<CMatrix>& basis,
                                        double tol_herm = Tolerances{}.herm);

/// Hermiticity / PSD / trace / completeness checks, one finding per
/// violation, naming the offending state or POVM.
ValidationReport validate_model(const QuantumModel& model,
                                const Tolerances& tol = {});

/// The probability table of a model: one intervention per POVM, one
/// column per state, entries tr(element * state). POVM completeness makes
/// every column normalized; the rank never exceeds dim^2.
Table<double> quantum_table(const QuantumModel& model,
                            const Tolerances& tol = {});

/// Linear-polarization photon model: states purity * |theta><theta| +
/// (1 - purity) * I/2, and per filter angle the POVM {out, abs} =
/// {|phi><phi|, I - |phi><phi|}. Angles are polarization angles in
/// degrees (Malus: p_out = cos^2(theta - phi) for pure states). Purities
/// broadcast when a single value is given; a zero-purity state is labeled
/// S_mixed.
QuantumModel qubit_polarization_preset(
    const std::vector<double>& prep_angles_deg,
    const std::vector<double>& purities,
    const std::vector<double>& filter_angles_deg);

/// Informationally complete qubit set: linear H/D states plus a circular
/// one and the fully mixed state, measured by the H/V, D/A and R/L
/// analyzers. Linear polarizers alone probe only a 3-dimensional operator
/// subspace; the circular analyzer is what raises the table rank to 4.
QuantumModel qubit_ic_preset();

/// Degenerate reference model for any dimension: computational-basis
/// states and the computational-basis POVM.
QuantumModel computational_basis_model(int n);

}  // namespace probtable::quantum
