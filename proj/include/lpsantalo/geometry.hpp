#pragma once

// Volumes, barycenters, triangulations, fibers and Steiner symmetrization
// of convex bodies. V-polytopes are handled exactly in dimensions 1-3;
// balls are kept symbolic.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "body.hpp"
#include "error.hpp"
#include "gauss_kronrod.hpp"
#include "hull.hpp"
#include "linalg.hpp"
#include "lp_simplex.hpp"

namespace lpsantalo {

/// Chord of a body along a line: { t : p + t w in K } = [lower, upper].
struct Fiber {
  double lower;
  double upper;
  double length() const { return upper - lower; }
};

inline double diameter(const ConvexBody& k);
inline ConvexBody materialize(const ConvexBody& k);

// ---------------------------------------------------------------------------
// Triangulation, volume, barycenter

inline std::vector<Simplex> triangulate(const ConvexBody& k) {
  if (k.kind() == BodyKind::AffineImage) return triangulate(materialize(k));
  if (k.kind() != BodyKind::VPolytope) throw Error(ErrorCode::UnsupportedKind, "triangulation needs a V-polytope");
  const auto& poly = k.as_polytope();
  const int n = k.dim();
  std::vector<Simplex> out;
  if (n == 1) {
    out.push_back({{poly.vertices[0], poly.vertices[1]}});
  } else if (n == 2) {
    for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i)
      out.push_back({{poly.vertices[0], poly.vertices[i], poly.vertices[i + 1]}});
  } else if (n == 3) {
    const double d = diameter(k);
    const double floor = 1e-14 * d * d * d;
    for (const auto& f : poly.facets) {
      if (f[0] == 0 || f[1] == 0 || f[2] == 0) continue;
      Simplex s{{poly.vertices[0], poly.vertices[static_cast<std::size_t>(f[0])],
                 poly.vertices[static_cast<std::size_t>(f[1])], poly.vertices[static_cast<std::size_t>(f[2])]}};
      if (s.volume() > floor) out.push_back(std::move(s));
    }
  } else {
    throw Error(ErrorCode::UnsupportedDimension, "exact triangulation is limited to n <= 3");
  }
  return out;
}

namespace detail {

/// Volume of { y in unit ball of R^n : <y, w> >= d } for unit w.
inline double unit_ball_cap(int n, double d) {
  if (d >= 1.0) return 0.0;
  if (d <= -1.0) return unit_ball_volume(n);
  switch (n) {
    case 1: return 1.0 - d;
    case 2: return std::acos(d) - d * std::sqrt(1.0 - d * d);
    case 3: return std::numbers::pi * (1.0 - d) * (1.0 - d) * (2.0 + d) / 3.0;
    default: break;
  }
  AdaptiveOptions opts;
  opts.rel_tol = 1e-13;
  const double phi = std::acos(d);
  const double integral = integrate_scalar([n](double t) { return std::pow(std::sin(t), n); }, {0.0, phi}, opts);
  return unit_ball_volume(n - 1) * integral;
}

}  // namespace detail

/// Lebesgue volume. Throws UnsupportedDimension for polytopes with n >= 4
/// (see monte_carlo_volume).
inline double volume(const ConvexBody& k) {
  switch (k.kind()) {
    case BodyKind::Ball: return unit_ball_volume(k.dim()) * std::pow(k.as_ball().radius, k.dim());
    case BodyKind::AffineImage: return std::abs(k.as_affine().matrix.determinant()) * volume(*k.as_affine().base);
    case BodyKind::VPolytope: break;
  }
  double v = 0.0;
  for (const auto& s : triangulate(k)) v += s.volume();
  if (!(v > 0.0)) throw Error(ErrorCode::DegenerateBody, "zero volume");
  return v;
}

inline Vec barycenter(const ConvexBody& k) {
  switch (k.kind()) {
    case BodyKind::Ball: return k.as_ball().center;
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      return a.matrix * barycenter(*a.base) + a.shift;
    }
    case BodyKind::VPolytope: break;
  }
  Vec c = Vec::Zero(k.dim());
  double v = 0.0;
  for (const auto& s : triangulate(k)) {
    const double w = s.volume();
    c += w * s.centroid();
    v += w;
  }
  if (!(v > 0.0)) throw Error(ErrorCode::DegenerateBody, "zero volume");
  return c / v;
}

/// Classical support function h_K(y) = sup_{x in K} <x, y>.
inline double support(const ConvexBody& k, const Vec& y) {
  switch (k.kind()) {
    case BodyKind::Ball: return k.as_ball().center.dot(y) + k.as_ball().radius * y.norm();
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      return support(*a.base, a.matrix.transpose() * y) + a.shift.dot(y);
    }
    case BodyKind::VPolytope: break;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : k.as_polytope().vertices) best = std::max(best, v.dot(y));
  return best;
}

inline double diameter(const ConvexBody& k) {
  switch (k.kind()) {
    case BodyKind::Ball: return 2.0 * k.as_ball().radius;
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      Eigen::JacobiSVD<Mat> svd(a.matrix);
      return svd.singularValues()(0) * diameter(*a.base);
    }
    case BodyKind::VPolytope: break;
  }
  return detail::bbox_diameter(k.as_polytope().vertices);
}

// ---------------------------------------------------------------------------
// Affine maps

inline ConvexBody translate(const ConvexBody& k, const Vec& shift) {
  switch (k.kind()) {
    case BodyKind::Ball: return ConvexBody::ball(k.as_ball().center + shift, k.as_ball().radius);
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      return ConvexBody::affine_image(*a.base, a.matrix, a.shift + shift);
    }
    case BodyKind::VPolytope: break;
  }
  std::vector<Vec> pts = k.as_polytope().vertices;
  for (auto& p : pts) p += shift;
  return ConvexBody::polytope(std::move(pts));
}

/// Image of K under x -> A x + shift. Balls map to balls only when A is a
/// scaled orthogonal matrix; use ConvexBody::affine_image for ellipsoids.
inline ConvexBody transform(const ConvexBody& k, const Mat& a, const Vec& shift) {
  const int n = k.dim();
  if (a.rows() != n || a.cols() != n || shift.size() != n)
    throw Error(ErrorCode::InvalidArgument, "transform dimension mismatch");
  const double scale = std::pow(std::max(a.norm(), 1e-300), n);
  if (!(std::abs(a.determinant()) > 1e-14 * scale)) throw Error(ErrorCode::NonInvertible, "matrix is singular");
  switch (k.kind()) {
    case BodyKind::Ball: {
      const Mat ata = a.transpose() * a;
      const double s2 = ata.trace() / n;
      if ((ata - s2 * Mat::Identity(n, n)).norm() > 1e-10 * s2)
        throw Error(ErrorCode::BallNonOrthogonal, "ball image under a non-conformal map is not a ball");
      return ConvexBody::ball(a * k.as_ball().center + shift, std::sqrt(s2) * k.as_ball().radius);
    }
    case BodyKind::AffineImage: {
      const auto& ai = k.as_affine();
      if (ai.base->kind() == BodyKind::VPolytope) return transform(materialize(k), a, shift);
      return ConvexBody::affine_image(*ai.base, a * ai.matrix, a * ai.shift + shift);
    }
    case BodyKind::VPolytope: break;
  }
  std::vector<Vec> pts = k.as_polytope().vertices;
  for (auto& p : pts) p = a * p + shift;
  return ConvexBody::polytope(std::move(pts));
}

/// Reflection across the hyperplane u^perp.
inline ConvexBody reflect(const ConvexBody& k, const Direction& u) {
  const int n = k.dim();
  const Mat r = Mat::Identity(n, n) - 2.0 * u.vector() * u.vector().transpose();
  return transform(k, r, Vec::Zero(n));
}

/// Affine images of polytopes become polytopes; other kinds are returned as is
/// unless they are affine images of balls, which cannot be materialized exactly.
inline ConvexBody materialize(const ConvexBody& k) {
  if (k.kind() != BodyKind::AffineImage) return k;
  const auto& a = k.as_affine();
  const ConvexBody base = materialize(*a.base);
  if (base.kind() == BodyKind::VPolytope) return transform(base, a.matrix, a.shift);
  if (base.kind() == BodyKind::Ball) {
    const Mat ata = a.matrix.transpose() * a.matrix;
    const double s2 = ata.trace() / k.dim();
    if ((ata - s2 * Mat::Identity(k.dim(), k.dim())).norm() <= 1e-10 * s2) return transform(base, a.matrix, a.shift);
  }
  throw Error(ErrorCode::UnsupportedKind, "ellipsoid has no exact polytope form; use polytope_approximation");
}

/// Inscribed polytope approximation with `m` boundary points (regular m-gon in
/// the plane, Fibonacci points in space). Exact for polytopes.
inline ConvexBody polytope_approximation(const ConvexBody& k, int m) {
  if (k.kind() == BodyKind::VPolytope) return k;
  const int n = k.dim();
  auto unit_points = [&]() {
    std::vector<Vec> pts;
    if (n == 1) {
      pts = {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
    } else if (n == 2) {
      for (int i = 0; i < m; ++i) {
        const double t = 2.0 * std::numbers::pi * i / m;
        pts.push_back((Vec(2) << std::cos(t), std::sin(t)).finished());
      }
    } else if (n == 3) {
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < m; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / m;
        const double r = std::sqrt(1.0 - z * z);
        pts.push_back((Vec(3) << r * std::cos(golden * i), r * std::sin(golden * i), z).finished());
      }
    } else {
      throw Error(ErrorCode::UnsupportedDimension, "polytope approximation limited to n <= 3");
    }
    return pts;
  };
  if (k.kind() == BodyKind::Ball) {
    auto pts = unit_points();
    for (auto& p : pts) p = k.as_ball().center + k.as_ball().radius * p;
    return ConvexBody::polytope(std::move(pts));
  }
  const auto& a = k.as_affine();
  const ConvexBody base = polytope_approximation(*a.base, m);
  return transform(base, a.matrix, a.shift);
}

// ---------------------------------------------------------------------------
// Membership and fibers

/// Extent of K along the line p + t w (w need not be unit).
inline std::optional<Fiber> line_extent(const ConvexBody& k, const Vec& p, const Vec& w) {
  const int n = k.dim();
  switch (k.kind()) {
    case BodyKind::Ball: {
      const auto& b = k.as_ball();
      const Vec d = p - b.center;
      const double qa = w.squaredNorm();
      const double qb = 2.0 * d.dot(w);
      const double qc = d.squaredNorm() - b.radius * b.radius;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc < 0.0) return std::nullopt;
      const double sq = std::sqrt(disc);
      return Fiber{(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)};
    }
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      if (a.base->kind() == BodyKind::VPolytope) return line_extent(materialize(k), p, w);
      const Eigen::PartialPivLU<Mat> lu(a.matrix);
      return line_extent(*a.base, lu.solve(p - a.shift), lu.solve(w));
    }
    case BodyKind::VPolytope: break;
  }
  const auto& verts = k.as_polytope().vertices;
  const double wn = w.norm();
  const Vec wu = w / wn;
  const auto m = static_cast<Eigen::Index>(verts.size());
  const Mat q = n > 1 ? orthonormal_complement(wu) : Mat(1, 0);
  Mat a(n, m);
  Vec rhs(n);
  Vec c(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec& v = verts[static_cast<std::size_t>(i)];
    if (n > 1) a.col(i).head(n - 1) = q.transpose() * (v - p);
    a(n - 1, i) = 1.0;
    c(i) = wu.dot(v - p) / wn;
  }
  rhs.setZero();
  rhs(n - 1) = 1.0;
  const auto hi = solve_lp(a, rhs, c);
  if (!hi) return std::nullopt;
  const auto lo = solve_lp(a, rhs, -c);
  if (!lo) return std::nullopt;
  return Fiber{-lo->value, hi->value};
}

/// Chord of K through x (expected in u^perp) along u:
/// g = min{t : x + t u in K}, f = max{t : x + t u in K}; nullopt when x is
/// outside the projection of K.
inline std::optional<Fiber> fiber_extent(const ConvexBody& k, const Direction& u, const Vec& x) {
  return line_extent(k, x, u.vector());
}

inline bool contains(const ConvexBody& k, const Vec& x, double tol = 1e-12) {
  switch (k.kind()) {
    case BodyKind::Ball: return (x - k.as_ball().center).norm() <= k.as_ball().radius * (1.0 + tol);
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      return contains(*a.base, a.matrix.partialPivLu().solve(x - a.shift), tol);
    }
    case BodyKind::VPolytope: break;
  }
  const auto& poly = k.as_polytope();
  const double scale = tol * std::max(1.0, diameter(k));
  if (!poly.halfspaces.empty()) {
    for (const auto& h : poly.halfspaces)
      if (h.normal.dot(x) > h.offset + scale) return false;
    return true;
  }
  const int n = k.dim();
  const auto m = static_cast<Eigen::Index>(poly.vertices.size());
  Mat a(n + 1, m);
  Vec rhs(n + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    a.col(i).head(n) = poly.vertices[static_cast<std::size_t>(i)];
    a(n, i) = 1.0;
  }
  rhs.head(n) = x;
  rhs(n) = 1.0;
  return solve_lp(a, rhs, Vec::Zero(m)).has_value();
}

/// Positive lower estimate of the distance from x to the boundary when x is
/// interior; nonpositive otherwise.
inline double interior_margin(const ConvexBody& k, const Vec& x) {
  if (k.kind() == BodyKind::Ball) return k.as_ball().radius - (x - k.as_ball().center).norm();
  if (k.kind() == BodyKind::VPolytope && !k.as_polytope().halfspaces.empty()) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& h : k.as_polytope().halfspaces) m = std::min(m, h.offset - h.normal.dot(x));
    return m;
  }
  // Generic: shortest half-chord through x along coordinate axes.
  if (!contains(k, x, 0.0)) return -1.0;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k.dim(); ++i) {
    const auto f = line_extent(k, x, Vec::Unit(k.dim(), i));
    if (!f) return -1.0;
    m = std::min({m, f->upper, -f->lower});
  }
  if (k.kind() == BodyKind::VPolytope) m /= std::sqrt(static_cast<double>(k.dim()));
  return m;
}

inline bool contains_in_interior(const ConvexBody& k, const Vec& x, double rel_tol = 1e-12) {
  return interior_margin(k, x) > rel_tol * diameter(k);
}

// ---------------------------------------------------------------------------
// Steiner symmetrization

namespace detail {

inline std::vector<Vec> projected_edge_crossings(const VPolytope& poly, const Mat& q) {
  std::vector<Eigen::Vector2d> pv;
  for (const auto& v : poly.vertices) pv.push_back(q.transpose() * v);
  const auto edges = hull_edges(poly);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Eigen::Vector2d a = pv[static_cast<std::size_t>(edges[i].first)];
    const Eigen::Vector2d b = pv[static_cast<std::size_t>(edges[i].second)];
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Eigen::Vector2d c = pv[static_cast<std::size_t>(edges[j].first)];
      const Eigen::Vector2d d = pv[static_cast<std::size_t>(edges[j].second)];
      const Eigen::Vector2d r = b - a, s = d - c;
      const double den = r.x() * s.y() - r.y() * s.x();
      if (std::abs(den) <= 1e-14 * (r.norm() * s.norm())) continue;
      const Eigen::Vector2d ac = c - a;
      const double t = (ac.x() * s.y() - ac.y() * s.x()) / den;
      const double w = (ac.x() * r.y() - ac.y() * r.x()) / den;
      if (t <= 0.0 || t >= 1.0 || w <= 0.0 || w >= 1.0) continue;
      out.push_back(q * (a + t * r));
    }
  }
  return out;
}

}  // namespace detail

/// Steiner symmetral sigma_u K: every chord parallel to u is recentred on u^perp.
inline ConvexBody steiner_symmetral(const ConvexBody& k, const Direction& u) {
  if (k.dim() != u.dim()) throw Error(ErrorCode::InvalidArgument, "direction dimension mismatch");
  if (k.kind() == BodyKind::Ball) return ConvexBody::ball(u.project(k.as_ball().center), k.as_ball().radius);
  if (k.kind() == BodyKind::AffineImage)
    throw Error(ErrorCode::UnsupportedKind, "materialize affine images before symmetrizing");
  const int n = k.dim();
  if (n > 3) throw Error(ErrorCode::UnsupportedDimension, "exact Steiner symmetrization limited to n <= 3");
  const auto& poly = k.as_polytope();

  std::vector<Vec> candidates;
  for (const auto& v : poly.vertices) candidates.push_back(u.project(v));
  if (n == 3) {
    const auto crossings = detail::projected_edge_crossings(poly, orthonormal_complement(u.vector()));
    candidates.insert(candidates.end(), crossings.begin(), crossings.end());
  }
  std::vector<Vec> out;
  for (const auto& x : candidates) {
    const auto f = fiber_extent(k, u, x);
    if (!f) continue;
    const double half = 0.5 * std::max(0.0, f->length());
    out.push_back(x + half * u.vector());
    if (half > 0.0) out.push_back(x - half * u.vector());
  }
  return ConvexBody::polytope(std::move(out));
}

// ---------------------------------------------------------------------------
// Half-space splits

struct SplitVolume {
  double plus;
  double minus;
};

namespace detail {

inline double clipped_simplex_volume(const Simplex& s, const Vec& u) {
  const int n = s.dim();
  std::vector<Vec> pts;
  std::vector<double> h;
  for (const auto& v : s.vertices) h.push_back(u.dot(v));
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    if (h[i] >= 0.0) pts.push_back(s.vertices[i]);
    for (std::size_t j = i + 1; j < s.vertices.size(); ++j) {
      if ((h[i] > 0.0 && h[j] < 0.0) || (h[i] < 0.0 && h[j] > 0.0)) {
        const double t = h[i] / (h[i] - h[j]);
        pts.push_back(s.vertices[i] + t * (s.vertices[j] - s.vertices[i]));
      }
    }
  }
  if (static_cast<int>(pts.size()) < n + 1) return 0.0;
  return hull_volume(pts, n);
}

}  // namespace detail

/// Volumes of K intersected with the closed half-spaces <x,u> >= 0 and <= 0.
inline SplitVolume halfspace_split_volume(const ConvexBody& k, const Direction& u) {
  const int n = k.dim();
  switch (k.kind()) {
    case BodyKind::Ball: {
      const auto& b = k.as_ball();
      const double d = -u.vector().dot(b.center) / b.radius;
      const double scale = std::pow(b.radius, n);
      return {scale * detail::unit_ball_cap(n, d), scale * detail::unit_ball_cap(n, -d)};
    }
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      if (a.base->kind() == BodyKind::VPolytope) return halfspace_split_volume(materialize(k), u);
      if (a.base->kind() != BodyKind::Ball) return halfspace_split_volume(materialize(k), u);
      const auto& b = a.base->as_ball();
      const Vec w = a.matrix.transpose() * u.vector();
      const double wn = w.norm();
      // <A y + s, u> >= 0  <=>  <y, w/|w|> >= -<s,u>/|w|
      const double h = -a.shift.dot(u.vector()) / wn;
      const double d = (h - b.center.dot(w) / wn) / b.radius;
      const double scale = std::abs(a.matrix.determinant()) * std::pow(b.radius, n);
      return {scale * detail::unit_ball_cap(n, d), scale * detail::unit_ball_cap(n, -d)};
    }
    case BodyKind::VPolytope: break;
  }
  SplitVolume out{0.0, 0.0};
  for (const auto& s : triangulate(k)) {
    out.plus += detail::clipped_simplex_volume(s, u.vector());
    out.minus += detail::clipped_simplex_volume(s, -u.vector());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparisons

/// Hull equality for polytopes (vertex sets match within tol * diameter);
/// parameter equality for balls.
inline bool same_body(const ConvexBody& a, const ConvexBody& b, double tol = 1e-9) {
  if (a.dim() != b.dim()) return false;
  if (a.kind() == BodyKind::Ball && b.kind() == BodyKind::Ball) {
    const double s = tol * std::max(1.0, a.as_ball().radius);
    return (a.as_ball().center - b.as_ball().center).norm() <= s &&
           std::abs(a.as_ball().radius - b.as_ball().radius) <= s;
  }
  const ConvexBody pa = materialize(a);
  const ConvexBody pb = materialize(b);
  if (pa.kind() != BodyKind::VPolytope || pb.kind() != BodyKind::VPolytope) return false;
  const double s = tol * std::max(1.0, diameter(pa));
  // With facets at hand, compare by mutual containment so that a vertex kept
  // by one hull and dropped as nearly-flat by the other does not matter.
  if (!pa.as_polytope().halfspaces.empty() && !pb.as_polytope().halfspaces.empty()) {
    const double slack = std::max(s, 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, diameter(pa)));
    auto inside = [slack](const std::vector<Vec>& xs, const ConvexBody& k) {
      for (const auto& x : xs)
        if (interior_margin(k, x) < -slack) return false;
      return true;
    };
    return inside(pa.as_polytope().vertices, pb) && inside(pb.as_polytope().vertices, pa);
  }
  auto covered = [s](const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
    for (const auto& x : xs) {
      bool hit = false;
      for (const auto& y : ys)
        if ((x - y).norm() <= s) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  };
  return covered(pa.as_polytope().vertices, pb.as_polytope().vertices) &&
         covered(pb.as_polytope().vertices, pa.as_polytope().vertices);
}

/// Symmetry with respect to the hyperplane u^perp.
inline bool is_symmetric_about(const ConvexBody& k, const Direction& u, double tol = 1e-9) {
  return same_body(k, reflect(k, u), tol);
}

// ---------------------------------------------------------------------------
// Monte Carlo fallback for n >= 4

struct McEstimate {
  double value;
  double standard_error;
};

/// Uniform samples from K by rejection from its bounding box.
inline std::vector<Vec> uniform_samples(const ConvexBody& k, int count, std::uint64_t seed, double* acceptance = nullptr) {
  const int n = k.dim();
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo(i) = -support(k, -Vec::Unit(n, i));
    hi(i) = support(k, Vec::Unit(n, i));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> out;
  long long tries = 0;
  while (static_cast<int>(out.size()) < count) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * unif(rng);
    ++tries;
    if (contains(k, x, 0.0)) out.push_back(std::move(x));
    if (tries > 1000LL * count + 1000) throw Error(ErrorCode::DegenerateBody, "rejection sampler starved");
  }
  if (acceptance) *acceptance = static_cast<double>(count) / static_cast<double>(tries);
  return out;
}

inline McEstimate monte_carlo_volume(const ConvexBody& k, int samples, std::uint64_t seed) {
  const int n = k.dim();
  double box = 1.0;
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo(i) = -support(k, -Vec::Unit(n, i));
    hi(i) = support(k, Vec::Unit(n, i));
    box *= hi(i) - lo(i);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * unif(rng);
    if (contains(k, x, 0.0)) ++hits;
  }
  const double f = static_cast<double>(hits) / samples;
  return {box * f, box * std::sqrt(f * (1.0 - f) / samples)};
}

}  // namespace lpsantalo
