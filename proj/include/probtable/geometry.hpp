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
#include <vector>

#include "probtable/decompose.hpp"

namespace probtable {

/// Per-intervention sums of result vectors. Normalization forces every
/// intervention's results to sum to one and the same covector e, which
/// pins all preparation vectors to the hyperplane e . s = 1.
template <class T>
struct GeometryReport {
  std::vector<std::vector<T>> sum_vectors;  // one per intervention
  std::optional<std::vector<T>> common_sum;
};

namespace detail {

template <class T>
bool vectors_agree(const std::vector<T>& a, const std::vector<T>& b,
                   double tol_geo) {
  for (std::size_t t = 0; t < a.size(); ++t)
    if (!is_zero(T(a[t] - b[t]), tol_geo)) return false;
  return true;
}

}  // namespace detail

template <class T>
GeometryReport<T> intervention_sum_vectors(const Decomposition<T>& dec,
                                           double tol_geo = Tolerances{}.geo) {
  GeometryReport<T> report;
  std::size_t row = 0;
  for (const auto& iv : dec.interventions) {
    std::vector<T> sum(dec.rank, T{});
    for (std::size_t i = 0; i < iv.results.size(); ++i, ++row)
      for (std::size_t t = 0; t < dec.rank; ++t)
        sum[t] += dec.result_vectors[row][t];
    report.sum_vectors.push_back(std::move(sum));
  }
  bool all_agree = true;
  for (std::size_t k = 1; k < report.sum_vectors.size(); ++k)
    all_agree = all_agree && detail::vectors_agree(report.sum_vectors[0],
                                                   report.sum_vectors[k],
                                                   tol_geo);
  if (all_agree && !report.sum_vectors.empty())
    report.common_sum = report.sum_vectors[0];
  return report;
}

/// Affine dimension of a point set: rank of the differences to the first
/// point. Exact for rational vectors, singular-value based for doubles.
template <class T>
std::size_t affine_dimension(const std::vector<std::vector<T>>& points,
                             double tol_rank = 0.0) {
  if (points.size() <= 1) return 0;
  const std::size_t dim = points[0].size();
  Matrix<T> diffs(points.size() - 1, dim);
  for (std::size_t i = 1; i < points.size(); ++i)
    for (std::size_t t = 0; t < dim; ++t)
      diffs(i - 1, t) = points[i][t] - points[0][t];
  return matrix_rank(diffs, tol_rank);
}

template <class T>
std::size_t prep_affine_dimension(const Decomposition<T>& dec,
                                  double tol_rank = 0.0) {
  return affine_dimension(dec.prep_vectors, tol_rank);
}

// ---------------------------------------------------------------------------
// Plot-data export (double precision throughout; hulls are plot artifacts)
// ---------------------------------------------------------------------------

struct PointFamily {
  std::string kind;  // "prep" or "result"
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coords;        // raw K-dimensional
  std::size_t affine_dim = 0;
  std::vector<std::vector<double>> plane_coords;  // intrinsic affine frame
  std::vector<std::vector<std::size_t>> facets;   // indices into this family
  bool hull_available = false;
};

struct GeometryExport {
  PointFamily preps, results;
  std::optional<std::vector<double>> hyperplane_normal;
  double hyperplane_offset = 1.0;
  std::vector<std::string> warnings;
};

/// Orthonormal affine frame of a point set (Gram-Schmidt on doubles);
/// returns per-point intrinsic coordinates, one row of length *out_dim.
std::vector<std::vector<double>> intrinsic_coordinates(
    const std::vector<std::vector<double>>& points, double tol_geo,
    std::size_t* out_dim);

/// Convex-hull facets of a full-dimensional point set with dim in [0, 3].
/// dim 1 yields one segment, dim 2 one polygon cycle, dim 3 triangles.
std::vector<std::vector<std::size_t>> convex_hull_facets(
    const std::vector<std::vector<double>>& points, std::size_t dim,
    double tol_geo);

namespace detail {

template <class T>
PointFamily build_family(const char* kind,
                         const std::vector<std::string>& labels,
                         const std::vector<std::vector<T>>& vectors,
                         const Tolerances& tol,
                         std::vector<std::string>& warnings) {
  PointFamily fam;
  fam.kind = kind;
  fam.labels = labels;
  for (const auto& v : vectors) {
    std::vector<double> coords(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) coords[t] = to_double(v[t]);
    fam.coords.push_back(std::move(coords));
  }
  fam.plane_coords = intrinsic_coordinates(fam.coords, tol.geo, &fam.affine_dim);
  if (fam.affine_dim <= 3) {
    fam.facets = convex_hull_facets(fam.plane_coords, fam.affine_dim, tol.geo);
    fam.hull_available = true;
  } else {
    warnings.push_back(std::string("DimensionTooHigh: ") + kind +
                       " points span affine dimension " +
                       std::to_string(fam.affine_dim) +
                       " > 3; exported without hull facets");
  }
  return fam;
}

}  // namespace detail

template <class T>
GeometryExport build_geometry_export(const Decomposition<T>& dec,
                                     const Tolerances& tol = {}) {
  GeometryExport out;

  std::vector<std::string> result_labels;
  for (const auto& iv : dec.interventions)
    for (const auto& r : iv.results) result_labels.push_back(iv.name + "/" + r);

  out.preps = detail::build_family("prep", dec.prep_labels, dec.prep_vectors,
                                   tol, out.warnings);
  out.results = detail::build_family("result", result_labels,
                                     dec.result_vectors, tol, out.warnings);

  if (dec.rank > 3)
    out.warnings.push_back(
        "DimensionTooHigh: ambient dimension K = " + std::to_string(dec.rank) +
        " > 3; facets refer to the per-family intrinsic coordinates");

  auto sums = intervention_sum_vectors(dec, tol.geo);
  if (sums.common_sum) {
    std::vector<double> normal(sums.common_sum->size());
    for (std::size_t t = 0; t < normal.size(); ++t)
      normal[t] = to_double((*sums.common_sum)[t]);
    out.hyperplane_normal = std::move(normal);
    out.hyperplane_offset = 1.0;
  }
  return out;
}

}  // namespace probtable
