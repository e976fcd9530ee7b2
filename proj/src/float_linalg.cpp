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

#include "probtable/float_linalg.hpp"

#include <Eigen/Dense>

namespace probtable {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

std::vector<double> singular_values(const Matrix<double>& m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  return from_eigen(svd.singularValues());
}

std::size_t svd_rank(const Matrix<double>& m, double tol_rank) {
  const auto sv = singular_values(m);
  if (sv.empty()) return 0;
  const double sigma_max = sv.front();
  if (tol_rank <= 0.0)
    tol_rank = static_cast<double>(std::max(m.rows(), m.cols())) * sigma_max *
               std::numeric_limits<double>::epsilon();
  std::size_t rank = 0;
  for (double s : sv)
    if (s > tol_rank) ++rank;
  return rank;
}

std::vector<double> least_squares(const Matrix<double>& a,
                                  const std::vector<double>& b) {
  if (a.rows() != b.size())
    throw DimensionMismatch("least_squares shape mismatch");
  Eigen::VectorXd x = to_eigen(a).colPivHouseholderQr().solve(to_eigen(b));
  return from_eigen(x);
}

std::vector<double> least_squares_on_hyperplane(const Matrix<double>& a,
                                                const std::vector<double>& b,
                                                const std::vector<double>& n,
                                                double offset) {
  if (a.cols() != n.size())
    throw DimensionMismatch("hyperplane normal dimension mismatch");
  const Eigen::MatrixXd ea = to_eigen(a);
  const Eigen::VectorXd eb = to_eigen(b);
  const Eigen::VectorXd en = to_eigen(n);
  const double nn = en.squaredNorm();
  if (nn == 0.0) return least_squares(a, b);

  // particular point on the hyperplane, plus an orthonormal basis of the
  // normal's complement (columns 1.. of the Householder Q of en)
  const Eigen::VectorXd x0 = en * (offset / nn);
  const Eigen::Index k = en.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(en);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd null_basis = q.rightCols(k - 1);

  const Eigen::VectorXd t = (ea * null_basis)
                                .colPivHouseholderQr()
                                .solve(eb - ea * x0);
  return from_eigen(x0 + null_basis * t);
}

}  // namespace probtable
