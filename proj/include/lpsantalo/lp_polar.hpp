#pragma once

// Lp-support functions, the near-norm of the Lp-polar body, polar volumes
// and the exponential moments of e^{-h_{p,K-x}}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "body.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "lp_simplex.hpp"
#include "quadrature.hpp"

namespace lpsantalo {

/// p in (0, inf].
class PExponent {
 public:
  static PExponent finite(double p) {
    if (!(p > 0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "p must be a positive real");
    return PExponent(p);
  }
  static PExponent infinity() { return PExponent(std::numeric_limits<double>::infinity()); }

  /// Accepts a decimal number or "inf".
  static PExponent parse(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") return infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "cannot parse p value '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorCode::ParseError, "cannot parse p value '" + s + "'");
    if (std::isinf(v) && v > 0) return infinity();
    try {
      return finite(v);
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, "p must be positive: '" + s + "'");
    }
  }

  bool is_infinite() const { return std::isinf(p_); }
  double value() const { return p_; }

  std::string str() const {
    if (is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p_);
    return buf;
  }

  bool operator==(const PExponent& o) const { return p_ == o.p_; }

 private:
  explicit PExponent(double p) : p_(p) {}
  double p_;
};

/// A value that is either finite with an error estimate, or +infinity.
struct Measured {
  double value = 0.0;
  double error = 0.0;
  bool infinite = false;

  static Measured inf() { return {std::numeric_limits<double>::infinity(), 0.0, true}; }
  double relative_error() const { return infinite ? 0.0 : error / std::abs(value); }
};

namespace detail {

/// log of Gamma(n/2+1) (2/z)^{n/2} I_{n/2}(z), the normalized exponential
/// average of z<x,e> over the unit ball of R^n.
inline double ball_profile_log(int n, double z) {
  z = std::abs(z);
  if (z == 0.0) return 0.0;
  const double nu = 0.5 * n;
  if (z <= 25.0) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 400; ++k) {
      term *= q / ((k + 1.0) * (nu + 1.0 + k));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::log(sum);
  }
  // Hankel expansion of I_nu for large argument.
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * z);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::lgamma(nu + 1.0) + nu * std::log(2.0 / z) + z - 0.5 * std::log(2.0 * std::numbers::pi * z) +
         std::log(sum);
}

}  // namespace detail

/// Evaluates h_{p,K} and h_K. Affine images are flattened to a single map over
/// a polytope, point-cloud or ball base.
class LpSupportEvaluator {
 public:
  LpSupportEvaluator(const ConvexBody& k, PExponent p, const QuadratureSpec& spec = {})
      : body_(std::make_shared<const ConvexBody>(k)), p_(p), n_(k.dim()) {
    map_ = Mat::Identity(n_, n_);
    shift_ = Vec::Zero(n_);
    const ConvexBody* base = &k;
    while (base->kind() == BodyKind::AffineImage) {
      const auto& a = base->as_affine();
      shift_ = map_ * a.shift + shift_;
      map_ = map_ * a.matrix;
      base = a.base.get();
    }
    has_map_ = !(map_.isIdentity(0.0) && shift_.isZero(0.0));
    log_det_ = std::log(std::abs(map_.determinant()));
    if (base->kind() == BodyKind::Ball) {
      kind_ = Kind::Ball;
      center_ = base->as_ball().center;
      radius_ = base->as_ball().radius;
      log_volume_ = std::log(unit_ball_volume(n_)) + n_ * std::log(radius_) + log_det_;
      return;
    }
    const auto& poly = base->as_polytope();
    for (const auto& v : poly.vertices) vertices_.push_back(v);
    if (n_ <= 3) {
      kind_ = Kind::Polytope;
      const auto simplices = triangulate(*base);
      double total = 0.0;
      for (const auto& s : simplices) total += s.volume();
      simplex_vertices_ = Mat(n_, static_cast<Eigen::Index>(simplices.size() * static_cast<std::size_t>(n_ + 1)));
      Eigen::Index col = 0;
      for (const auto& s : simplices) {
        weights_.push_back(factorial(n_) * s.volume() / total);
        for (const auto& v : s.vertices) simplex_vertices_.col(col++) = v;
      }
      log_volume_ = std::log(total) + log_det_;
      if (n_ == 2)
        for (const auto& h : poly.halfspaces) base_normals_.push_back(h.normal);
    } else {
      kind_ = Kind::Cloud;
      monte_carlo_ = true;
      const McEstimate mc = monte_carlo_volume(*base, spec.mc_samples, spec.mc_seed);
      const auto pts = uniform_samples(*base, spec.mc_samples, spec.mc_seed ^ 0x9e3779b97f4a7c15ull);
      cloud_ = Mat(n_, static_cast<Eigen::Index>(pts.size()));
      for (std::size_t i = 0; i < pts.size(); ++i) cloud_.col(static_cast<Eigen::Index>(i)) = pts[i];
      log_volume_ = std::log(mc.value) + log_det_;
    }
  }

  /// h along a ray r -> h(r theta), with per-direction projections cached.
  class Ray {
   public:
    double operator()(double r) const {
      if (r == 0.0) return 0.0;
      const LpSupportEvaluator& e = *ev_;
      if (e.p_.is_infinite()) return r * (linear_ + max_proj_);
      const double p = e.p_.value();
      double base = 0.0;
      switch (e.kind_) {
        case Kind::Ball: base = r * center_proj_ + detail::ball_profile_log(e.n_, p * r * e.radius_ * wnorm_) / p; break;
        case Kind::Polytope: {
          const int m = e.n_ + 1;
          const double top = p * r * max_proj_;
          double sum = 0.0;
          std::array<double, 8> z{};
          for (std::size_t j = 0; j < e.weights_.size(); ++j) {
            for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(i)] = p * r * proj_[j * static_cast<std::size_t>(m) + static_cast<std::size_t>(i)] - top;
            sum += e.weights_[j] * detail::exp_dd(z.data(), m);
          }
          // p r |K| so large that the average of e^{z - top} underflows.
          if (!(sum > 0.0)) throw Error(ErrorCode::RangeExceeded, "exp average underflows; p too large for doubles");
          base = (top + std::log(sum)) / p;
          break;
        }
        case Kind::Cloud: {
          const double top = p * r * max_proj_;
          double sum = 0.0;
          for (double a : proj_) sum += std::exp(p * r * a - top);
          base = (top + std::log(sum / static_cast<double>(proj_.size()))) / p;
          break;
        }
      }
      return r * linear_ + base;
    }

   private:
    friend class LpSupportEvaluator;
    const LpSupportEvaluator* ev_ = nullptr;
    std::vector<double> proj_;
    double max_proj_ = 0.0;
    double linear_ = 0.0;
    double center_proj_ = 0.0;
    double wnorm_ = 0.0;
  };

  Ray ray(const Vec& theta) const {
    Ray r;
    r.ev_ = this;
    const Vec w = has_map_ ? Vec(map_.transpose() * theta) : theta;
    r.linear_ = has_map_ ? shift_.dot(theta) : 0.0;
    switch (kind_) {
      case Kind::Ball:
        r.center_proj_ = center_.dot(w);
        r.wnorm_ = w.norm();
        r.max_proj_ = r.center_proj_ + radius_ * r.wnorm_;
        break;
      case Kind::Polytope: {
        const Vec a = simplex_vertices_.transpose() * w;
        r.proj_.assign(a.data(), a.data() + a.size());
        r.max_proj_ = a.maxCoeff();
        break;
      }
      case Kind::Cloud: {
        const Vec a = cloud_.transpose() * w;
        r.proj_.assign(a.data(), a.data() + a.size());
        r.max_proj_ = a.maxCoeff();
        // h_K itself comes from the vertices, not the cloud.
        break;
      }
    }
    if (kind_ == Kind::Cloud && p_.is_infinite()) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& v : vertices_) best = std::max(best, v.dot(w));
      r.max_proj_ = best;
    }
    return r;
  }

  /// h_{p,K}(y); h_K(y) when p is infinite.
  double h(const Vec& y) const { return ray(y)(1.0); }

  /// Classical support function h_K(y).
  double support(const Vec& y) const {
    const Vec w = has_map_ ? Vec(map_.transpose() * y) : y;
    double base = 0.0;
    if (kind_ == Kind::Ball) {
      base = center_.dot(w) + radius_ * w.norm();
    } else {
      base = -std::numeric_limits<double>::infinity();
      for (const auto& v : vertices_) base = std::max(base, v.dot(w));
    }
    return base + (has_map_ ? shift_.dot(y) : 0.0);
  }

  /// Angles in the plane where h_K has kinks (outer facet normals).
  std::vector<double> kink_angles() const {
    std::vector<double> out;
    if (n_ != 2) return out;
    const Mat inv_t = map_.inverse().transpose();
    for (const auto& nrm : base_normals_) {
      const Vec d = inv_t * nrm;
      out.push_back(std::atan2(d(1), d(0)));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  int dim() const { return n_; }
  PExponent p() const { return p_; }
  const ConvexBody& body() const { return *body_; }
  double log_volume() const { return log_volume_; }
  double volume() const { return std::exp(log_volume_); }
  bool monte_carlo() const { return monte_carlo_; }

 private:
  enum class Kind { Polytope, Cloud, Ball };

  std::shared_ptr<const ConvexBody> body_;
  PExponent p_;
  int n_;
  Kind kind_ = Kind::Polytope;
  Mat map_;
  Vec shift_;
  bool has_map_ = false;
  double log_det_ = 0.0;
  double log_volume_ = 0.0;
  bool monte_carlo_ = false;
  // ball base
  Vec center_;
  double radius_ = 0.0;
  // polytope base
  std::vector<Vec> vertices_;
  Mat simplex_vertices_;
  std::vector<double> weights_;  // n! vol(S_j) / |K|
  std::vector<Vec> base_normals_;
  Mat cloud_;
};

inline double h_p(const LpSupportEvaluator& ev, const Vec& y) { return ev.h(y); }

/// The near-norm and moments of e^{-h_{p,K-x}}: the polar of K - x.
struct PolarFunctional {
  std::shared_ptr<const LpSupportEvaluator> evaluator;
  Vec x;

  PolarFunctional(std::shared_ptr<const LpSupportEvaluator> ev, Vec shift)
      : evaluator(std::move(ev)), x(std::move(shift)) {
    if (x.size() != evaluator->dim()) throw Error(ErrorCode::InvalidArgument, "translation dimension mismatch");
  }
  PolarFunctional(const ConvexBody& k, PExponent p, const QuadratureSpec& spec = {})
      : PolarFunctional(std::make_shared<const LpSupportEvaluator>(k, p, spec), Vec::Zero(k.dim())) {}

  PolarFunctional translated(const Vec& shift) const { return PolarFunctional(evaluator, shift); }

  int dim() const { return evaluator->dim(); }
  const ConvexBody& body() const { return evaluator->body(); }
  PExponent p() const { return evaluator->p(); }

  /// h_{p,K-x}(y) = h_{p,K}(y) - <x,y>.
  double exponent(const Vec& y) const { return evaluator->h(y) - x.dot(y); }
  double shifted_support(const Vec& y) const { return evaluator->support(y) - x.dot(y); }
  bool finite() const { return contains_in_interior(body(), x); }
};

/// Moments int_0^inf r^{n-1+k} e^{-h_{p,K-x}(r theta)} dr, k < count.
inline RadialResult direction_moments(const PolarFunctional& pf, const Vec& theta, int count, const QuadratureSpec& spec) {
  const int n = pf.dim();
  const double s = pf.shifted_support(theta);
  if (!(s > 0)) throw Error(ErrorCode::NonIntegrable, "direction with nonpositive support: origin not interior");
  if (pf.p().is_infinite()) {
    RadialResult r;
    r.value = SmallVec(count);
    r.error = SmallVec::Zero(count);
    for (int k = 0; k < count; ++k) r.value(k) = std::exp(std::lgamma(n + k) - (n + k) * std::log(s));
    return r;
  }
  const auto ray = pf.evaluator->ray(theta);
  const double lin = pf.x.dot(theta);
  return radial_moments([&](double r) { return ray(r) - r * lin; }, n, count, s, spec.radial);
}

/// ||y||_{(K-x)^{o,p}}; error is relative.
inline Measured polar_norm(const PolarFunctional& pf, const Vec& y, const QuadratureSpec& spec = {}) {
  if (y.norm() == 0.0) return {0.0, 0.0, false};
  const int n = pf.dim();
  if (pf.p().is_infinite()) {
    const double s = pf.shifted_support(y);
    if (!(s > 0)) throw Error(ErrorCode::NonIntegrable, "origin not interior to K - x");
    return {s, 0.0, false};
  }
  const RadialResult r = direction_moments(pf, y, 1, spec);
  const double value = std::pow(r.value(0) / factorial(n - 1), -1.0 / n);
  return {value, value * r.error(0) / (n * r.value(0)), false};
}

namespace detail {

/// Whether the polar of K - x is unbounded on the closed side sign*<theta,u> >= 0,
/// i.e. some nonzero theta with h_{K-x}(theta) <= 0 lies there.
inline bool polar_side_unbounded(const ConvexBody& k, const Vec& x, const Vec& u, int sign) {
  const int n = k.dim();
  switch (k.kind()) {
    case BodyKind::AffineImage: {
      const auto& a = k.as_affine();
      const Eigen::PartialPivLU<Mat> lu(a.matrix);
      return polar_side_unbounded(*a.base, lu.solve(x - a.shift), lu.solve(u), sign);
    }
    case BodyKind::Ball: {
      const auto& b = k.as_ball();
      const Vec axis = x - b.center;  // the cone is around this axis
      const double d = axis.norm();
      if (d < b.radius * (1.0 - 1e-12)) return false;
      const double half = std::acos(std::min(1.0, b.radius / d));
      const double angle = std::acos(std::clamp(sign * axis.dot(u) / (d * u.norm()), -1.0, 1.0));
      return angle <= 0.5 * std::numbers::pi + half + 1e-12;
    }
    case BodyKind::VPolytope: break;
  }
  // LP over theta = a - b with a, b >= 0:
  //   <v_i - x, theta> + s_i = 0, sign<u, theta> - t = 0, <x - c, theta> = 1.
  const auto& verts = k.as_polytope().vertices;
  const auto m = static_cast<Eigen::Index>(verts.size());
  const Vec c = barycenter(k);
  const Eigen::Index cols = 2 * n + m + 1;
  Mat a = Mat::Zero(m + 2, cols);
  Vec rhs = Vec::Zero(m + 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec d = verts[static_cast<std::size_t>(i)] - x;
    a.row(i).head(n) = d.transpose();
    a.row(i).segment(n, n) = -d.transpose();
    a(i, 2 * n + i) = 1.0;
  }
  a.row(m).head(n) = sign * u.transpose();
  a.row(m).segment(n, n) = -sign * u.transpose();
  a(m, 2 * n + m) = -1.0;
  const Vec g = x - c;
  a.row(m + 1).head(n) = g.transpose();
  a.row(m + 1).segment(n, n) = -g.transpose();
  rhs(m + 1) = 1.0;
  return solve_lp(a, rhs, Vec::Zero(cols)).has_value();
}

inline SphereIntegral polar_sphere_integral(const PolarFunctional& pf, const QuadratureSpec& spec, const Vec& u,
                                            SphereSides sides) {
  const int n = pf.dim();
  auto f = [&](const Vec& theta) {
    const RadialResult r = direction_moments(pf, theta, 1, spec);
    SmallVec v(2);
    v << r.value(0), r.error(0);
    return v;
  };
  return integrate_sphere(n, f, spec, u, pf.evaluator->kink_angles(), sides, 1);
}

}  // namespace detail

/// |(K-x)^{o,p}| = (1/n) int_S ||theta||^{-n} = int_S M_0(theta) / n!.
inline Measured polar_volume(const PolarFunctional& pf, const QuadratureSpec& spec = {}) {
  if (!pf.finite()) return Measured::inf();
  const int n = pf.dim();
  const SphereIntegral s = detail::polar_sphere_integral(pf, spec, Vec::Unit(n, n - 1), {});
  const SmallVec t = s.total(), e = s.total_error();
  return {t(0) / factorial(n), (e(0) + t(1)) / factorial(n), false};
}

struct HalfspaceVolumes {
  Measured plus;
  Measured minus;
};

/// Volumes of (K-x)^{o,p} on either side of u^perp. A side that reaches
/// the unbounded part of the polar is reported as infinite.
inline HalfspaceVolumes polar_halfspace_volumes(const PolarFunctional& pf, const Direction& u,
                                                const QuadratureSpec& spec = {}) {
  const int n = pf.dim();
  HalfspaceVolumes out;
  SphereSides sides;
  if (!pf.finite()) {
    sides.plus = !detail::polar_side_unbounded(pf.body(), pf.x, u.vector(), 1);
    sides.minus = !detail::polar_side_unbounded(pf.body(), pf.x, u.vector(), -1);
  }
  if (sides.plus || sides.minus) {
    const SphereIntegral s = detail::polar_sphere_integral(pf, spec, u.vector(), sides);
    if (sides.plus) out.plus = {s.plus(0) / factorial(n), (s.plus_error(0) + s.plus(1)) / factorial(n), false};
    if (sides.minus) out.minus = {s.minus(0) / factorial(n), (s.minus_error(0) + s.minus(1)) / factorial(n), false};
  }
  if (!sides.plus) out.plus = Measured::inf();
  if (!sides.minus) out.minus = Measured::inf();
  return out;
}

/// M_p(K - x) = n! |K| |(K-x)^{o,p}|, or infinite when x is not interior.
inline Measured mahler_volume(const PolarFunctional& pf, const QuadratureSpec& spec = {}) {
  const Measured v = polar_volume(pf, spec);
  if (v.infinite) return v;
  const double scale = factorial(pf.dim()) * pf.evaluator->volume();
  return {scale * v.value, scale * v.error, false};
}

inline Measured mahler_volume(const ConvexBody& k, PExponent p, const Vec& x, const QuadratureSpec& spec = {}) {
  return mahler_volume(PolarFunctional(k, p, spec).translated(x), spec);
}

/// V, barycenter and covariance of the density e^{-h_{p,K-x}} / V.
struct ExpMoments {
  double V = 0.0;
  Vec b;
  Mat cov;
  double V_error = 0.0;
  double b_error = 0.0;  // bound on the Euclidean error of b
  double cov_error = 0.0;
  bool monte_carlo = false;
};

inline ExpMoments exp_moment(const PolarFunctional& pf, const QuadratureSpec& spec = {}) {
  if (!pf.finite()) throw Error(ErrorCode::NonIntegrable, "origin not interior to K - x");
  const int n = pf.dim();
  const int nb = n, nc = n * (n + 1) / 2;
  const int control = 1 + nb + nc;
  auto f = [&](const Vec& theta) {
    const RadialResult r = direction_moments(pf, theta, 3, spec);
    SmallVec v(control + 3);
    v(0) = r.value(0);
    for (int i = 0; i < n; ++i) v(1 + i) = r.value(1) * theta(i);
    int idx = 1 + nb;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) v(idx++) = r.value(2) * theta(i) * theta(j);
    v(control) = r.error(0);
    v(control + 1) = r.error(1);
    v(control + 2) = r.error(2);
    return v;
  };
  const SphereIntegral s = integrate_sphere(n, f, spec, Vec::Unit(n, n - 1), pf.evaluator->kink_angles(), {}, control);
  const SmallVec t = s.total(), e = s.total_error();
  ExpMoments m;
  m.monte_carlo = s.monte_carlo || pf.evaluator->monte_carlo();
  m.V = t(0);
  m.V_error = e(0) + t(control);
  m.b = t.segment(1, n) / m.V;
  Mat second(n, n);
  int idx = 1 + nb;
  double second_err = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      second(i, j) = second(j, i) = t(idx) / m.V;
      second_err = std::max(second_err, e(idx));
      ++idx;
    }
  m.cov = second - m.b * m.b.transpose();
  double berr = 0.0;
  for (int i = 0; i < n; ++i) berr += e(1 + i) * e(1 + i);
  m.b_error = (std::sqrt(berr) + t(control + 1)) / m.V + m.b.norm() * m.V_error / m.V;
  m.cov_error = (second_err + t(control + 2)) / m.V + 2.0 * m.b.norm() * m.b_error;
  return m;
}

/// V(h_{p,K-x}) by iterated one-dimensional integrals in Cartesian
/// coordinates (n <= 2), or by the alternative sphere rule (n == 3).
/// Independent of the spherical discretization used by polar_volume.
inline Measured exp_volume_cartesian(const PolarFunctional& pf, const QuadratureSpec& spec = {}) {
  if (!pf.finite()) return Measured::inf();
  const int n = pf.dim();
  if (n == 3) {
    QuadratureSpec alt = spec;
    alt.sphere = SphereRule::fibonacci(spec.sphere.kind == SphereRuleKind::Fibonacci ? 20000 : 8000);
    if (detail::resolve_rule(3, spec) == SphereRuleKind::Fibonacci) alt.sphere = SphereRule::gauss_product(8000);
    const Measured v = polar_volume(pf, alt);
    return {v.value * factorial(n), v.error * factorial(n), false};
  }
  if (n > 3) throw Error(ErrorCode::UnsupportedDimension, "Cartesian route limited to n <= 3");
  RadialRule inner = spec.radial;
  if (n == 1) {
    double total = 0.0, err = 0.0;
    for (double sgn : {1.0, -1.0}) {
      const Vec e = Vec::Constant(1, sgn);
      const double s = pf.shifted_support(e);
      if (pf.p().is_infinite()) {
        total += 1.0 / s;
        continue;
      }
      const RadialResult r = radial_moments([&](double t) { return pf.exponent(Vec::Constant(1, sgn * t)); }, 1, 1, s, inner);
      total += r.value(0);
      err += r.error(0);
    }
    return {total, err, false};
  }
  // n == 2: G(y2) = int e^{-phi(y1, y2)} dy1, then int G(y2) dy2.
  double inner_err = 0.0;
  auto line = [&](double y2) {
    double g = 0.0;
    for (double sgn : {1.0, -1.0}) {
      const double s = pf.shifted_support(Vec::Unit(2, 0) * sgn);
      Vec y(2);
      const RadialResult r = radial_moments(
          [&](double t) {
            y << sgn * t, y2;
            return pf.exponent(y);
          },
          1, 1, s, inner);
      g += r.value(0);
      inner_err = std::max(inner_err, r.error(0) / r.value(0));
    }
    return g;
  };
  double total = 0.0, err = 0.0;
  for (double sgn : {1.0, -1.0}) {
    const double s = pf.shifted_support(Vec::Unit(2, 1) * sgn);
    const RadialResult r = radial_moments(
        [&](double t) {
          const double g = line(sgn * t);
          return g > 0 ? -std::log(g) : std::numeric_limits<double>::infinity();
        },
        1, 1, s, spec.radial);
    total += r.value(0);
    err += r.error(0);
  }
  return {total, err + inner_err * total, false};
}

struct TransformCheck {
  double lhs;
  double rhs;
};

/// (||y||_{(AK)^{o,p}}, ||A^T y||_{K^{o,p}}).
inline TransformCheck lp_polar_transform_check(const ConvexBody& k, const Mat& a, PExponent p, const Vec& y,
                                               const QuadratureSpec& spec = {}) {
  const int n = k.dim();
  ConvexBody image = [&] {
    try {
      return transform(k, a, Vec::Zero(n));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BallNonOrthogonal) throw;
      return ConvexBody::affine_image(k, a, Vec::Zero(n));
    }
  }();
  const PolarFunctional lhs(image, p, spec);
  const PolarFunctional rhs(k, p, spec);
  return {polar_norm(lhs, y, spec).value, polar_norm(rhs, a.transpose() * y, spec).value};
}

}  // namespace lpsantalo
