#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "hull.hpp"
#include "linalg.hpp"

namespace lpsantalo {

/// Unit vector defining the hyperplane u^perp and the half-spaces <x,u> >= 0 / <= 0.
class Direction {
 public:
  explicit Direction(Vec u) : u_(std::move(u)) {
    const double nrm = u_.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw Error(ErrorCode::InvalidArgument, "direction must be nonzero");
    u_ /= nrm;
  }

  static Direction axis(int n, int i) { return Direction(Vec::Unit(n, i)); }

  const Vec& vector() const { return u_; }
  int dim() const { return static_cast<int>(u_.size()); }
  Direction flipped() const { return Direction(-u_); }

  double height(const Vec& x) const { return u_.dot(x); }
  Vec project(const Vec& x) const { return x - u_.dot(x) * u_; }
  Vec reflect(const Vec& x) const { return x - 2.0 * u_.dot(x) * u_; }

 private:
  Vec u_;
};

struct Simplex {
  std::vector<Vec> vertices;  // n+1 points in R^n

  int dim() const { return static_cast<int>(vertices.front().size()); }

  double signed_volume() const {
    const int n = dim();
    Mat e(n, n);
    for (int i = 0; i < n; ++i) e.col(i) = vertices[static_cast<std::size_t>(i + 1)] - vertices[0];
    return e.determinant() / factorial(n);
  }
  double volume() const { return std::abs(signed_volume()); }

  Vec centroid() const {
    Vec c = Vec::Zero(vertices.front().size());
    for (const auto& v : vertices) c += v;
    return c / static_cast<double>(vertices.size());
  }
};

/// Outward facet normal and offset: the body satisfies <normal, x> <= offset.
struct Halfspace {
  Vec normal;
  double offset;
};

struct VPolytope {
  std::vector<Vec> vertices;                // extreme points; CCW in the plane
  std::vector<std::array<int, 3>> facets;   // triangulated boundary, n == 3 only
  std::vector<Halfspace> halfspaces;        // derived facet inequalities, n <= 3
};

struct Ball {
  Vec center;
  double radius;
};

class ConvexBody;

struct AffineImage {
  std::shared_ptr<const ConvexBody> base;
  Mat matrix;
  Vec shift;
};

enum class BodyKind { VPolytope, Ball, AffineImage };

class ConvexBody {
 public:
  /// Convex hull of the given points. Dimensions 1-3 are canonicalized to
  /// extreme points; higher dimensions keep the deduplicated point set.
  static ConvexBody polytope(std::vector<Vec> points);
  static ConvexBody ball(Vec center, double radius);
  static ConvexBody affine_image(ConvexBody base, Mat matrix, Vec shift);

  int dim() const { return dim_; }
  BodyKind kind() const { return static_cast<BodyKind>(rep_.index()); }

  const VPolytope& as_polytope() const { return std::get<VPolytope>(rep_); }
  const Ball& as_ball() const { return std::get<Ball>(rep_); }
  const AffineImage& as_affine() const { return std::get<AffineImage>(rep_); }

 private:
  ConvexBody(int dim, std::variant<VPolytope, Ball, AffineImage> rep) : dim_(dim), rep_(std::move(rep)) {}

  int dim_;
  std::variant<VPolytope, Ball, AffineImage> rep_;
};

namespace detail {

inline std::vector<Halfspace> halfspaces_2d(const std::vector<Vec>& ccw) {
  std::vector<Halfspace> out;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Vec& a = ccw[i];
    const Vec& b = ccw[(i + 1) % ccw.size()];
    Vec nrm(2);
    nrm << b(1) - a(1), a(0) - b(0);
    nrm.normalize();
    out.push_back({nrm, nrm.dot(a)});
  }
  return out;
}

inline std::vector<Halfspace> halfspaces_3d(const Hull3& h) {
  std::vector<Halfspace> out;
  for (const auto& f : h.facets) {
    const Eigen::Vector3d a = h.vertices[static_cast<std::size_t>(f[0])];
    const Eigen::Vector3d b = h.vertices[static_cast<std::size_t>(f[1])];
    const Eigen::Vector3d c = h.vertices[static_cast<std::size_t>(f[2])];
    Eigen::Vector3d nrm = (b - a).cross(c - a);
    if (nrm.norm() == 0.0) continue;
    nrm.normalize();
    out.push_back({Vec(nrm), nrm.dot(a)});
  }
  return out;
}

}  // namespace detail

inline ConvexBody ConvexBody::polytope(std::vector<Vec> points) {
  if (points.empty()) throw Error(ErrorCode::DegenerateBody, "empty vertex list");
  const auto n = static_cast<int>(points.front().size());
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  for (const auto& p : points) {
    if (p.size() != n) throw Error(ErrorCode::InvalidArgument, "inconsistent vertex dimensions");
    if (!p.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite vertex coordinate");
  }
  VPolytope poly;
  if (n == 1) {
    double lo = points[0](0), hi = points[0](0);
    for (const auto& p : points) lo = std::min(lo, p(0)), hi = std::max(hi, p(0));
    if (!(hi - lo > kHullTolerance * std::max(1.0, std::abs(hi) + std::abs(lo))))
      throw Error(ErrorCode::DegenerateBody, "segment has zero length");
    poly.vertices = {Vec::Constant(1, lo), Vec::Constant(1, hi)};
    poly.halfspaces = {{Vec::Constant(1, -1.0), -lo}, {Vec::Constant(1, 1.0), hi}};
  } else if (n == 2) {
    poly.vertices = convex_hull_2d(std::move(points));
    poly.halfspaces = detail::halfspaces_2d(poly.vertices);
  } else if (n == 3) {
    Hull3 h = convex_hull_3d(points);
    poly.vertices = std::move(h.vertices);
    poly.facets = std::move(h.facets);
    h.vertices = poly.vertices;
    h.facets = poly.facets;
    poly.halfspaces = detail::halfspaces_3d(h);
  } else {
    const double diam = detail::bbox_diameter(points);
    std::vector<Vec> unique;
    for (const auto& p : points) {
      bool dup = false;
      for (const auto& q : unique)
        if ((p - q).norm() <= kHullTolerance * diam) dup = true;
      if (!dup) unique.push_back(p);
    }
    if (affine_rank(unique) < n) throw Error(ErrorCode::DegenerateBody, "vertices do not span R^n");
    poly.vertices = std::move(unique);
  }
  return ConvexBody(n, std::move(poly));
}

inline ConvexBody ConvexBody::ball(Vec center, double radius) {
  if (center.size() < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::DegenerateBody, "ball radius must be positive");
  if (!center.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite ball center");
  const int n = static_cast<int>(center.size());
  return ConvexBody(n, Ball{std::move(center), radius});
}

inline ConvexBody ConvexBody::affine_image(ConvexBody base, Mat matrix, Vec shift) {
  const int n = base.dim();
  if (matrix.rows() != n || matrix.cols() != n || shift.size() != n)
    throw Error(ErrorCode::InvalidArgument, "affine map dimension mismatch");
  const double det = matrix.determinant();
  const double scale = std::pow(std::max(matrix.norm(), 1e-300), n);
  if (!(std::abs(det) > 1e-14 * scale)) throw Error(ErrorCode::NonInvertible, "affine matrix is singular");
  return ConvexBody(n, AffineImage{std::make_shared<const ConvexBody>(std::move(base)), std::move(matrix), std::move(shift)});
}

/// Undirected edges of a 3-D hull's triangulated boundary.
inline std::vector<std::pair<int, int>> hull_edges(const VPolytope& poly) {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : poly.facets)
    for (int e = 0; e < 3; ++e) {
      int a = f[e], b = f[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return {edges.begin(), edges.end()};
}

}  // namespace lpsantalo
