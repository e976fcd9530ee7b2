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

#include "probtable/quantum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "probtable/errors.hpp"

namespace probtable::quantum {

namespace {

using Complex = std::complex<double>;

bool is_hermitian(const CMatrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(
      (m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::string format_angle(double deg) {
  std::ostringstream os;
  os << deg;
  return os.str();
}

CMatrix linear_polarization_projector(double angle_deg) {
  const double theta = angle_deg * std::numbers::pi / 180.0;
  Eigen::Vector2cd ket;
  ket << std::cos(theta), std::sin(theta);
  return ket * ket.adjoint();
}

}  // namespace

std::vector<CMatrix> hermitian_basis(int n) {
  if (n < 1) throw Error("Hilbert-space dimension must be >= 1");
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);

  basis.push_back(CMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      CMatrix sym = CMatrix::Zero(n, n);
      sym(r, c) = inv_sqrt2;
      sym(c, r) = inv_sqrt2;
      basis.push_back(sym);
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      CMatrix anti = CMatrix::Zero(n, n);
      anti(r, c) = Complex(0, -inv_sqrt2);
      anti(c, r) = Complex(0, inv_sqrt2);
      basis.push_back(anti);
    }
  }
  for (int l = 1; l < n; ++l) {
    CMatrix diag = CMatrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(diag);
  }
  return basis;
}

std::vector<double> expand(const CMatrix& op, const std::vector<CMatrix>& basis,
                           double tol_herm) {
  if (basis.empty() || op.rows() != basis[0].rows() || op.rows() != op.cols())
    throw DimensionMismatch("operator and basis dimensions differ");
  if (!is_hermitian(op, tol_herm))
    throw NotHermitian("operator is not Hermitian within tolerance");
  std::vector<double> coeffs(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Complex tr = (op * basis[k]).trace();
    if (std::abs(tr.imag()) > tol_herm)
      throw NotHermitian("expansion coefficient has an imaginary part");
    coeffs[k] = tr.real();
  }
  return coeffs;
}

double trace_probability(const CMatrix& effect, const CMatrix& state,
                         const Tolerances& tol) {
  if (effect.rows() != state.rows() || effect.cols() != state.cols() ||
      effect.rows() != effect.cols())
    throw DimensionMismatch("effect and state dimensions differ");
  const Complex tr = (effect * state).trace();
  if (std::abs(tr.imag()) > tol.herm)
    throw NotHermitian("trace probability has an imaginary part");
  const double p = tr.real();
  if (p < -tol.psd || p > 1.0 + tol.psd)
    throw Error("trace probability " + std::to_string(p) +
                " is outside [0, 1] beyond tolerance");
  return std::min(1.0, std::max(0.0, p));
}

ScalarProductCheck scalar_product_check(const CMatrix& effect,
                                        const CMatrix& state,
                                        const std::vector<CMatrix>& basis,
                                        double tol_herm) {
  ScalarProductCheck out;
  out.trace_value = (effect * state).trace().real();
  const auto r = expand(effect, basis, tol_herm);
  const auto s = expand(state, basis, tol_herm);
  for (std::size_t k = 0; k < r.size(); ++k) out.dot_value += r[k] * s[k];
  out.agree = std::abs(out.trace_value - out.dot_value) <= tol_herm;
  return out;
}

ValidationReport validate_model(const QuantumModel& model,
                                const Tolerances& tol) {
  ValidationReport report;
  const int n = model.dim;
  if (n < 1)
    report.fail(Finding::Code::DimensionMismatch, "dimension must be >= 1");
  if (model.states.size() != model.state_labels.size())
    report.fail(Finding::Code::DimensionMismatch,
                "state labels and states differ in number");

  for (std::size_t j = 0; j < model.states.size(); ++j) {
    const auto& rho = model.states[j];
    const std::string who = "state '" + model.state_labels[j] + "'";
    if (rho.rows() != n || rho.cols() != n) {
      report.fail(Finding::Code::DimensionMismatch, who + " has wrong shape");
      continue;
    }
    if (!is_hermitian(rho, tol.herm))
      report.fail(Finding::Code::EntryOutOfRange, who + " is not Hermitian");
    else if (min_eigenvalue(rho) < -tol.psd)
      report.fail(Finding::Code::EntryOutOfRange,
                  who + " is not positive semidefinite");
    if (std::abs(rho.trace().real() - 1.0) > tol.herm ||
        std::abs(rho.trace().imag()) > tol.herm)
      report.fail(Finding::Code::ColumnNotNormalized, who + " has trace != 1");
  }

  for (const auto& povm : model.povms) {
    const std::string who = "POVM '" + povm.name + "'";
    if (povm.elements.size() != povm.results.size() || povm.elements.empty()) {
      report.fail(Finding::Code::DimensionMismatch,
                  who + " has mismatched or empty element list");
      continue;
    }
    CMatrix sum = CMatrix::Zero(n, n);
    bool shapes_ok = true;
    for (std::size_t i = 0; i < povm.elements.size(); ++i) {
      const auto& el = povm.elements[i];
      const std::string which =
          who + " element '" + povm.results[i] + "'";
      if (el.rows() != n || el.cols() != n) {
        report.fail(Finding::Code::DimensionMismatch, which + " has wrong shape");
        shapes_ok = false;
        continue;
      }
      if (!is_hermitian(el, tol.herm))
        report.fail(Finding::Code::EntryOutOfRange, which + " is not Hermitian");
      else if (min_eigenvalue(el) < -tol.psd)
        report.fail(Finding::Code::EntryOutOfRange,
                    which + " is not positive semidefinite");
      sum += el;
    }
    if (shapes_ok &&
        (sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol.herm)
      report.fail(Finding::Code::ColumnNotNormalized,
                  who + " does not sum to the identity");
  }
  return report;
}

Table<double> quantum_table(const QuantumModel& model, const Tolerances& tol) {
  if (model.states.empty() || model.povms.empty())
    throw InvalidQuantumModel("model needs at least one state and one POVM");
  const auto report = validate_model(model, tol);
  if (!report.ok())
    throw InvalidQuantumModel(report.findings.front().message);

  std::vector<InterventionSpec> interventions;
  std::size_t total_rows = 0;
  for (const auto& povm : model.povms) {
    interventions.push_back({povm.name, povm.results});
    total_rows += povm.elements.size();
  }

  Matrix<double> entries(total_rows, model.states.size());
  std::size_t row = 0;
  for (const auto& povm : model.povms) {
    for (const auto& element : povm.elements) {
      for (std::size_t j = 0; j < model.states.size(); ++j)
        entries(row, j) = trace_probability(element, model.states[j], tol);
      ++row;
    }
  }
  return Table<double>::build(model.state_labels, std::move(interventions),
                              std::move(entries), tol.norm);
}

QuantumModel qubit_polarization_preset(
    const std::vector<double>& prep_angles_deg,
    const std::vector<double>& purities,
    const std::vector<double>& filter_angles_deg) {
  if (prep_angles_deg.empty() || filter_angles_deg.empty())
    throw InvalidQuantumModel("preset needs at least one state and one filter");
  if (purities.size() != 1 && purities.size() != prep_angles_deg.size())
    throw DimensionMismatch("purities must be one value or one per angle");
  for (double q : purities)
    if (!(q >= 0.0 && q <= 1.0))
      throw PurityOutOfRange("purity " + std::to_string(q) +
                             " is outside [0, 1]");

  QuantumModel model;
  model.dim = 2;
  const CMatrix half_identity = CMatrix::Identity(2, 2) / 2.0;
  for (std::size_t j = 0; j < prep_angles_deg.size(); ++j) {
    const double purity = purities.size() == 1 ? purities[0] : purities[j];
    const CMatrix pure = linear_polarization_projector(prep_angles_deg[j]);
    model.states.push_back(purity * pure + (1.0 - purity) * half_identity);
    std::string label = purity == 0.0
                            ? std::string("S_mixed")
                            : "S_" + format_angle(prep_angles_deg[j]);
    if (purity != 0.0 && purity != 1.0)
      label += "_p" + format_angle(purity);
    model.state_labels.push_back(label);
  }
  for (double phi : filter_angles_deg) {
    Povm povm;
    povm.name = "M_" + format_angle(phi);
    povm.results = {"out", "abs"};
    const CMatrix proj = linear_polarization_projector(phi);
    povm.elements = {proj, CMatrix::Identity(2, 2) - proj};
    model.povms.push_back(std::move(povm));
  }
  return model;
}

QuantumModel qubit_ic_preset() {
  QuantumModel model;
  model.dim = 2;
  const Complex i(0, 1);

  Eigen::Vector2cd h, v, d, a, r, l;
  h << 1, 0;
  v << 0, 1;
  d << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  a << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  r << 1.0 / std::sqrt(2.0), i / std::sqrt(2.0);
  l << 1.0 / std::sqrt(2.0), -i / std::sqrt(2.0);

  const auto proj = [](const Eigen::Vector2cd& ket) -> CMatrix {
    return ket * ket.adjoint();
  };

  model.state_labels = {"S_H", "S_D", "S_R", "S_mixed"};
  model.states = {proj(h), proj(d), proj(r), CMatrix::Identity(2, 2) / 2.0};

  model.povms.push_back({"M_HV", {"H", "V"}, {proj(h), proj(v)}});
  model.povms.push_back({"M_DA", {"D", "A"}, {proj(d), proj(a)}});
  model.povms.push_back({"M_RL", {"R", "L"}, {proj(r), proj(l)}});
  return model;
}

QuantumModel computational_basis_model(int n) {
  if (n < 1) throw Error("dimension must be >= 1");
  QuantumModel model;
  model.dim = n;
  Povm povm;
  povm.name = "M_basis";
  for (int j = 0; j < n; ++j) {
    CMatrix proj = CMatrix::Zero(n, n);
    proj(j, j) = 1.0;
    model.states.push_back(proj);
    model.state_labels.push_back("S_" + std::to_string(j));
    povm.results.push_back(std::to_string(j));
    povm.elements.push_back(proj);
  }
  model.povms.push_back(std::move(povm));
  return model;
}

}  // namespace probtable::quantum
