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

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "probtable/geometry.hpp"

namespace probtable {

namespace {

double point_scale(const std::vector<std::vector<double>>& pts) {
  double scale = 1.0;
  for (const auto& p : pts)
    for (double c : p) scale = std::max(scale, std::abs(c));
  return scale;
}

std::array<double, 3> as3(const std::vector<double>& p) {
  std::array<double, 3> out{0, 0, 0};
  for (std::size_t t = 0; t < std::min<std::size_t>(3, p.size()); ++t)
    out[t] = p[t];
  return out;
}

std::array<double, 3> sub(const std::array<double, 3>& a,
                          const std::array<double, 3>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

std::array<double, 3> cross(const std::array<double, 3>& a,
                            const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

struct Face {
  std::size_t a, b, c;
};

double signed_dist(const Face& f, const std::vector<std::array<double, 3>>& p,
                   const std::array<double, 3>& q) {
  const auto n = cross(sub(p[f.b], p[f.a]), sub(p[f.c], p[f.a]));
  const double len = std::sqrt(dot3(n, n));
  if (len == 0.0) return 0.0;
  return dot3(n, sub(q, p[f.a])) / len;
}

// Incremental 3D hull; expects a genuinely 3-dimensional point set.
std::vector<std::vector<std::size_t>> hull3(
    const std::vector<std::vector<double>>& pts, double eps) {
  const std::size_t n = pts.size();
  std::vector<std::array<double, 3>> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = as3(pts[i]);

  // initial simplex: spread-out seed points
  std::size_t i0 = 0, i1 = 0;
  double best = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto d = sub(p[i], p[i0]);
    if (dot3(d, d) > best) {
      best = dot3(d, d);
      i1 = i;
    }
  }
  std::size_t i2 = 0;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = cross(sub(p[i1], p[i0]), sub(p[i], p[i0]));
    const double area = dot3(c, c);
    if (area > best) {
      best = area;
      i2 = i;
    }
  }
  std::size_t i3 = 0;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double vol =
        std::abs(signed_dist({i0, i1, i2}, p, p[i]));
    if (vol > best) {
      best = vol;
      i3 = i;
    }
  }

  std::vector<Face> faces;
  const auto add_oriented = [&](std::size_t a, std::size_t b, std::size_t c,
                                const std::array<double, 3>& inside) {
    Face f{a, b, c};
    if (signed_dist(f, p, inside) > 0) std::swap(f.b, f.c);
    faces.push_back(f);
  };
  const std::array<double, 3> centroid{
      (p[i0][0] + p[i1][0] + p[i2][0] + p[i3][0]) / 4.0,
      (p[i0][1] + p[i1][1] + p[i2][1] + p[i3][1]) / 4.0,
      (p[i0][2] + p[i1][2] + p[i2][2] + p[i3][2]) / 4.0};
  add_oriented(i0, i1, i2, centroid);
  add_oriented(i0, i1, i3, centroid);
  add_oriented(i0, i2, i3, centroid);
  add_oriented(i1, i2, i3, centroid);

  for (std::size_t q = 0; q < n; ++q) {
    if (q == i0 || q == i1 || q == i2 || q == i3) continue;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (signed_dist(faces[f], p, p[q]) > eps) visible.push_back(f);
    if (visible.empty()) continue;

    // horizon = directed edges of visible faces whose twin is not visible
    std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
    for (std::size_t f : visible) {
      const Face& fc = faces[f];
      const std::array<std::pair<std::size_t, std::size_t>, 3> edges{
          std::make_pair(fc.a, fc.b), std::make_pair(fc.b, fc.c),
          std::make_pair(fc.c, fc.a)};
      for (const auto& e : edges) {
        ++edge_count[e];
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> horizon;
    for (const auto& [e, cnt] : edge_count) {
      (void)cnt;
      if (!edge_count.count({e.second, e.first})) horizon.push_back(e);
    }
    std::vector<Face> kept;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (std::find(visible.begin(), visible.end(), f) == visible.end())
        kept.push_back(faces[f]);
    faces = std::move(kept);
    for (const auto& e : horizon) faces.push_back({e.first, e.second, q});
  }

  std::vector<std::vector<std::size_t>> out;
  for (const Face& f : faces) out.push_back({f.a, f.b, f.c});
  return out;
}

// Andrew monotone chain; strictly convex turns only, so collinear
// boundary points are not reported as vertices.
std::vector<std::vector<std::size_t>> hull2(
    const std::vector<std::vector<double>>& pts, double eps) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    if (pts[a][1] != pts[b][1]) return pts[a][1] < pts[b][1];
    return a < b;
  });
  const auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
           (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  std::vector<std::size_t> hull;
  for (std::size_t idx = 0; idx < n; ++idx) {  // lower chain
    const std::size_t i = order[idx];
    while (hull.size() >= 2 &&
           turn(hull[hull.size() - 2], hull.back(), i) <= eps)
      hull.pop_back();
    hull.push_back(i);
  }
  const std::size_t lower_size = hull.size() + 1;
  for (std::size_t idx = n - 1; idx-- > 0;) {  // upper chain
    const std::size_t i = order[idx];
    while (hull.size() >= lower_size &&
           turn(hull[hull.size() - 2], hull.back(), i) <= eps)
      hull.pop_back();
    hull.push_back(i);
  }
  hull.pop_back();  // closing point repeats the start
  if (hull.size() < 3) return {};  // degenerate: handled by dim-1 path
  return {hull};
}

}  // namespace

std::vector<std::vector<double>> intrinsic_coordinates(
    const std::vector<std::vector<double>>& points, double tol_geo,
    std::size_t* out_dim) {
  if (points.empty()) {
    if (out_dim) *out_dim = 0;
    return {};
  }
  const std::size_t ambient = points[0].size();
  const double scale = point_scale(points);
  const double eps = tol_geo * scale;

  std::vector<std::vector<double>> basis;
  const auto& origin = points[0];
  for (const auto& pt : points) {
    std::vector<double> v(ambient);
    for (std::size_t t = 0; t < ambient; ++t) v[t] = pt[t] - origin[t];
    for (const auto& b : basis) {
      double proj = 0.0;
      for (std::size_t t = 0; t < ambient; ++t) proj += v[t] * b[t];
      for (std::size_t t = 0; t < ambient; ++t) v[t] -= proj * b[t];
    }
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (norm > eps) {
      for (double& c : v) c /= norm;
      basis.push_back(std::move(v));
    }
  }

  std::vector<std::vector<double>> coords(points.size(),
                                          std::vector<double>(basis.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t r = 0; r < basis.size(); ++r) {
      double proj = 0.0;
      for (std::size_t t = 0; t < ambient; ++t)
        proj += (points[i][t] - origin[t]) * basis[r][t];
      coords[i][r] = proj;
    }
  if (out_dim) *out_dim = basis.size();
  return coords;
}

std::vector<std::vector<std::size_t>> convex_hull_facets(
    const std::vector<std::vector<double>>& points, std::size_t dim,
    double tol_geo) {
  if (dim > 3)
    throw Error("convex hull limited to affine dimension <= 3");
  if (dim == 0 || points.size() < 2) return {};
  const double eps = tol_geo * point_scale(points);
  if (dim == 1) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i][0] < points[lo][0]) lo = i;
      if (points[i][0] > points[hi][0]) hi = i;
    }
    if (lo == hi) return {};
    return {{lo, hi}};
  }
  if (dim == 2) return hull2(points, eps);
  return hull3(points, eps);
}

}  // namespace probtable
