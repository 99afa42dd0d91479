#pragma once

// Convex hulls in the plane (monotone chain) and in space (incremental).
// Both drop points that are within a relative tolerance of lying on the
// hull of the others, so the output keeps extreme points only.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"

namespace lpsantalo {

inline constexpr double kHullTolerance = 1e-10;

namespace detail {

inline double bbox_diameter(const std::vector<Vec>& pts) {
  if (pts.empty()) return 0.0;
  Vec lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

}  // namespace detail

/// Counter-clockwise hull vertices of a planar point set.
/// Throws DegenerateBody when the points are collinear.
inline std::vector<Vec> convex_hull_2d(std::vector<Vec> pts) {
  const double diam = detail::bbox_diameter(pts);
  if (pts.size() < 3 || diam == 0.0) throw Error(ErrorCode::DegenerateBody, "fewer than three distinct planar points");
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  const double eps = kHullTolerance * diam * diam;
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && detail::cross2(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && detail::cross2(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw Error(ErrorCode::DegenerateBody, "planar points are collinear");
  return hull;
}

struct Hull3 {
  std::vector<Vec> vertices;                  // extreme points only
  std::vector<std::array<int, 3>> facets;     // outward-oriented triangles into `vertices`
};

/// Incremental 3-D hull. Throws DegenerateBody for coplanar input.
inline Hull3 convex_hull_3d(const std::vector<Vec>& pts) {
  const double diam = detail::bbox_diameter(pts);
  if (pts.size() < 4 || diam == 0.0) throw Error(ErrorCode::DegenerateBody, "fewer than four distinct points");
  const double eps = kHullTolerance * diam;
  auto p3 = [&](int i) -> Eigen::Vector3d { return pts[static_cast<std::size_t>(i)].head<3>(); };
  const int np = static_cast<int>(pts.size());

  // Initial tetrahedron from extreme choices.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = 0.0;
  for (int i = 1; i < np; ++i) {
    const double d = (p3(i) - p3(i0)).norm();
    if (d > best) best = d, i1 = i;
  }
  if (i1 < 0 || best <= eps) throw Error(ErrorCode::DegenerateBody, "points coincide");
  best = 0.0;
  for (int i = 0; i < np; ++i) {
    const double d = (p3(i) - p3(i0)).cross(p3(i1) - p3(i0)).norm() / (p3(i1) - p3(i0)).norm();
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0 || best <= eps) throw Error(ErrorCode::DegenerateBody, "points are collinear");
  const Eigen::Vector3d n012 = (p3(i1) - p3(i0)).cross(p3(i2) - p3(i0)).normalized();
  best = 0.0;
  for (int i = 0; i < np; ++i) {
    const double d = std::abs(n012.dot(p3(i) - p3(i0)));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0 || best <= eps) throw Error(ErrorCode::DegenerateBody, "points are coplanar");

  const Eigen::Vector3d interior = 0.25 * (p3(i0) + p3(i1) + p3(i2) + p3(i3));
  struct Face {
    std::array<int, 3> v;
    Eigen::Vector3d normal;
    double offset;
  };
  std::vector<Face> faces;
  auto make_face = [&](int a, int b, int c) {
    Eigen::Vector3d nrm = (p3(b) - p3(a)).cross(p3(c) - p3(a));
    if (nrm.dot(interior - p3(a)) > 0) {
      std::swap(b, c);
      nrm = -nrm;
    }
    nrm.normalize();
    faces.push_back({{a, b, c}, nrm, nrm.dot(p3(a))});
  };
  make_face(i0, i1, i2);
  make_face(i0, i1, i3);
  make_face(i0, i2, i3);
  make_face(i1, i2, i3);

  for (int pi = 0; pi < np; ++pi) {
    if (pi == i0 || pi == i1 || pi == i2 || pi == i3) continue;
    const Eigen::Vector3d p = p3(pi);
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].normal.dot(p) - faces[f].offset > eps) visible[f] = 1, any = true;
    }
    if (!any) continue;
    std::map<std::pair<int, int>, int> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) edges[{v[e], v[(e + 1) % 3]}]++;
    }
    std::vector<Face> kept;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) kept.push_back(faces[f]);
    faces = std::move(kept);
    for (const auto& [e, count] : edges) {
      if (edges.count({e.second, e.first})) continue;  // interior edge of the visible region
      Eigen::Vector3d nrm = (p3(e.second) - p3(e.first)).cross(p - p3(e.first));
      if (nrm.norm() == 0.0) continue;
      nrm.normalize();
      faces.push_back({{e.first, e.second, pi}, nrm, nrm.dot(p3(e.first))});
    }
  }

  Hull3 out;
  std::map<int, int> remap;
  for (const auto& f : faces) {
    std::array<int, 3> tri{};
    for (int e = 0; e < 3; ++e) {
      auto it = remap.find(f.v[e]);
      if (it == remap.end()) {
        it = remap.emplace(f.v[e], static_cast<int>(out.vertices.size())).first;
        out.vertices.push_back(pts[static_cast<std::size_t>(f.v[e])].head(3));
      }
      tri[e] = it->second;
    }
    out.facets.push_back(tri);
  }
  return out;
}

/// Polygon area by the shoelace formula over CCW vertices.
inline double polygon_area(const std::vector<Vec>& ccw) {
  double a = 0.0;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const auto& p = ccw[i];
    const auto& q = ccw[(i + 1) % ccw.size()];
    a += p(0) * q(1) - q(0) * p(1);
  }
  return 0.5 * a;
}

/// Volume of the convex hull of a point set in dimension 1..3; zero when degenerate.
inline double hull_volume(const std::vector<Vec>& pts, int n) {
  if (pts.empty()) return 0.0;
  if (n == 1) {
    double lo = pts[0](0), hi = pts[0](0);
    for (const auto& p : pts) lo = std::min(lo, p(0)), hi = std::max(hi, p(0));
    return hi - lo;
  }
  try {
    if (n == 2) return polygon_area(convex_hull_2d(pts));
    if (n == 3) {
      const Hull3 h = convex_hull_3d(pts);
      const Eigen::Vector3d c = h.vertices.front();
      double v = 0.0;
      for (const auto& f : h.facets) {
        const Eigen::Vector3d a = h.vertices[static_cast<std::size_t>(f[0])].head<3>() - c;
        const Eigen::Vector3d b = h.vertices[static_cast<std::size_t>(f[1])].head<3>() - c;
        const Eigen::Vector3d d = h.vertices[static_cast<std::size_t>(f[2])].head<3>() - c;
        v += a.dot(b.cross(d)) / 6.0;
      }
      return std::abs(v);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateBody) return 0.0;
    throw;
  }
  throw Error(ErrorCode::UnsupportedDimension, "hull volume needs n <= 3");
}

}  // namespace lpsantalo
