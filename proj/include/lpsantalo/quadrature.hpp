#pragma once

// Exponential integrals over simplices, sphere rules and semi-infinite
// radial integrals.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "body.hpp"
#include "error.hpp"
#include "gauss_kronrod.hpp"
#include "linalg.hpp"

namespace lpsantalo {

// ---------------------------------------------------------------------------
// Quadrature specification

enum class SphereRuleKind { Auto, AdaptiveArc, UniformAngle, Fibonacci, GaussProduct, MonteCarlo };

inline const char* to_string(SphereRuleKind k) {
  switch (k) {
    case SphereRuleKind::Auto: return "auto";
    case SphereRuleKind::AdaptiveArc: return "adaptive_arc";
    case SphereRuleKind::UniformAngle: return "uniform_angle";
    case SphereRuleKind::Fibonacci: return "fibonacci";
    case SphereRuleKind::GaussProduct: return "gauss_product";
    case SphereRuleKind::MonteCarlo: return "monte_carlo";
  }
  return "auto";
}

inline SphereRuleKind sphere_rule_from_string(const std::string& s) {
  for (auto k : {SphereRuleKind::Auto, SphereRuleKind::AdaptiveArc, SphereRuleKind::UniformAngle,
                 SphereRuleKind::Fibonacci, SphereRuleKind::GaussProduct, SphereRuleKind::MonteCarlo})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::ParseError, "unknown sphere rule '" + s + "'");
}

struct SphereRule {
  SphereRuleKind kind = SphereRuleKind::Auto;
  int nodes = 0;  // 0 selects the per-rule default

  static SphereRule uniform_angle(int m) { return {SphereRuleKind::UniformAngle, m}; }
  static SphereRule fibonacci(int m) { return {SphereRuleKind::Fibonacci, m}; }
  static SphereRule gauss_product(int m) { return {SphereRuleKind::GaussProduct, m}; }
  static SphereRule monte_carlo(int m) { return {SphereRuleKind::MonteCarlo, m}; }
  static SphereRule adaptive_arc() { return {SphereRuleKind::AdaptiveArc, 0}; }
};

struct RadialRule {
  double rel_tol = 1e-11;
  double abs_tol = 1e-250;
  int max_subdivisions = 400;
};

struct QuadratureSpec {
  SphereRule sphere;
  RadialRule radial;
  double angular_rel_tol = 1e-10;
  double angular_abs_tol = 1e-250;
  int max_arcs = 4000;
  std::uint64_t mc_seed = 20240601;
  int mc_samples = 4096;

  void validate() const {
    if (!(radial.rel_tol > 0) || !(radial.abs_tol > 0) || !(angular_rel_tol > 0) || !(angular_abs_tol > 0))
      throw Error(ErrorCode::InvalidArgument, "quadrature tolerances must be positive");
    if (radial.max_subdivisions < 1 || max_arcs < 1 || mc_samples < 1 || sphere.nodes < 0)
      throw Error(ErrorCode::InvalidArgument, "quadrature counts must be positive");
  }
};

inline nlohmann::json to_json(const QuadratureSpec& s) {
  return {{"sphere_rule", to_string(s.sphere.kind)},
          {"sphere_nodes", s.sphere.nodes},
          {"radial", {{"rel_tol", s.radial.rel_tol}, {"abs_tol", s.radial.abs_tol}, {"max_subdivisions", s.radial.max_subdivisions}}},
          {"angular_rel_tol", s.angular_rel_tol},
          {"angular_abs_tol", s.angular_abs_tol},
          {"max_arcs", s.max_arcs},
          {"mc_seed", s.mc_seed},
          {"mc_samples", s.mc_samples}};
}

inline QuadratureSpec quadrature_spec_from_json(const nlohmann::json& j) {
  QuadratureSpec s;
  s.sphere.kind = sphere_rule_from_string(j.value("sphere_rule", std::string("auto")));
  s.sphere.nodes = j.value("sphere_nodes", 0);
  if (j.contains("radial")) {
    const auto& r = j.at("radial");
    s.radial.rel_tol = r.value("rel_tol", s.radial.rel_tol);
    s.radial.abs_tol = r.value("abs_tol", s.radial.abs_tol);
    s.radial.max_subdivisions = r.value("max_subdivisions", s.radial.max_subdivisions);
  }
  s.angular_rel_tol = j.value("angular_rel_tol", s.angular_rel_tol);
  s.angular_abs_tol = j.value("angular_abs_tol", s.angular_abs_tol);
  s.max_arcs = j.value("max_arcs", s.max_arcs);
  s.mc_seed = j.value("mc_seed", s.mc_seed);
  s.mc_samples = j.value("mc_samples", s.mc_samples);
  s.validate();
  return s;
}

/// Stable 16-hex-digit fingerprint of a spec, embedded in every report row.
inline std::string spec_hash(const QuadratureSpec& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(s).dump())));
  return buf;
}

// ---------------------------------------------------------------------------
// Divided differences of exp

namespace detail {

inline constexpr int kMaxFactorial = 64;

inline const std::array<double, kMaxFactorial + 1>& inverse_factorials() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxFactorial; ++i) t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] / i;
    return t;
  }();
  return table;
}

/// exp[z_0..z_k] for a tight cluster, by the expansion around the mean:
/// e^c * sum_m h_m(z - c) / (k + m)!, h_m the complete homogeneous polynomials.
inline double exp_dd_series(const double* z, int count) {
  const int k = count - 1;
  double c = 0.0;
  for (int i = 0; i < count; ++i) c += z[i];
  c /= count;
  double rho = 0.0;
  for (int i = 0; i < count; ++i) rho = std::max(rho, std::abs(z[i] - c));
  int terms = 1;
  for (double bound = 1.0; terms < 40; ++terms) {
    bound *= rho / terms;
    if (bound < 1e-18) break;
  }
  std::array<double, 48> h{};
  h[0] = 1.0;
  for (int i = 0; i < count; ++i) {
    const double w = z[i] - c;
    for (int m = 1; m <= terms; ++m) h[static_cast<std::size_t>(m)] += w * h[static_cast<std::size_t>(m - 1)];
  }
  const auto& inv = inverse_factorials();
  double sum = 0.0;
  for (int m = terms; m >= 0; --m) sum += h[static_cast<std::size_t>(m)] * inv[static_cast<std::size_t>(k + m)];
  return std::exp(c) * sum;
}

// Node spread below which a cluster is summed by series rather than recursion.
inline constexpr double kSeriesSpread = 1.0;

/// Full table D(i, j) = exp[z_i..z_j] over sorted nodes, stored row-major in d.
inline void exp_dd_table(const double* z, int count, double* d) {
  for (int i = 0; i < count; ++i) d[i * count + i] = std::exp(z[i]);
  for (int len = 1; len < count; ++len)
    for (int i = 0; i + len < count; ++i) {
      const int j = i + len;
      const double spread = z[j] - z[i];
      d[i * count + j] = spread <= kSeriesSpread
                             ? exp_dd_series(z + i, len + 1)
                             : (d[(i + 1) * count + j] - d[i * count + j - 1]) / spread;
    }
}

/// exp[z_0..z_k] for at most 8 nodes; z is sorted in place.
inline double exp_dd(double* z, int count) {
  std::sort(z, z + count);
  if (z[count - 1] - z[0] <= kSeriesSpread) return exp_dd_series(z, count);
  std::array<double, 64> d{};
  exp_dd_table(z, count, d.data());
  return d[static_cast<std::size_t>(count - 1)];
}

}  // namespace detail

/// Divided differences of t -> e^t on a node set.
class DividedDifferenceTable {
 public:
  explicit DividedDifferenceTable(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw Error(ErrorCode::InvalidArgument, "divided differences need at least one node");
    for (double a : nodes_)
      if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "non-finite node");
    sorted_ = nodes_;
    std::sort(sorted_.begin(), sorted_.end());
    shift_ = sorted_.back();
    std::vector<double> z(sorted_.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = sorted_[i] - shift_;
    table_.assign(z.size() * z.size(), 0.0);
    detail::exp_dd_table(z.data(), static_cast<int>(z.size()), table_.data());
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& sorted_nodes() const { return sorted_; }

  /// exp[a_0..a_n] over all nodes.
  double value() const { return std::exp(log_value()); }
  double log_value() const { return shift_ + std::log(entry_scaled(0, size() - 1)); }

  /// exp[s_i..s_j] over the sorted nodes s.
  double entry(int i, int j) const { return std::exp(shift_) * entry_scaled(i, j); }

  int size() const { return static_cast<int>(sorted_.size()); }

 private:
  double entry_scaled(int i, int j) const {
    if (i < 0 || j >= size() || i > j) throw Error(ErrorCode::InvalidArgument, "divided difference index out of range");
    return table_[static_cast<std::size_t>(i * size() + j)];
  }

  std::vector<double> nodes_;
  std::vector<double> sorted_;
  double shift_ = 0.0;
  std::vector<double> table_;
};

/// log of the integral of e^{<x,y>} over a simplex.
inline double log_exp_integral_simplex(const Simplex& s, const Vec& y) {
  const int n = s.dim();
  const double vol = s.volume();
  double scale = 0.0;
  for (const auto& v : s.vertices) scale = std::max(scale, v.norm());
  if (!(vol > 1e-300) || !(vol > 1e-14 * std::pow(std::max(scale, 1e-300), n)))
    throw Error(ErrorCode::DegenerateBody, "simplex has zero volume");
  std::vector<double> a;
  for (const auto& v : s.vertices) a.push_back(v.dot(y));
  return std::log(factorial(n) * vol) + DividedDifferenceTable(std::move(a)).log_value();
}

inline double exp_integral_simplex(const Simplex& s, const Vec& y) { return std::exp(log_exp_integral_simplex(s, y)); }

// ---------------------------------------------------------------------------
// Sphere rules

struct SphereNode {
  Vec theta;
  double weight;
};

struct SphereNodes {
  std::vector<SphereNode> nodes;
  bool monte_carlo = false;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(m), 0.0);
  w.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0, p1 = z;
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    if (m == 1) z = 0.0, dp = 1.0;
    const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(m - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(m - 1 - i)] = (m == 1 ? 2.0 : wt);
  }
}

namespace detail {

inline int default_nodes(SphereRuleKind k, const QuadratureSpec& spec) {
  if (spec.sphere.nodes > 0) return spec.sphere.nodes;
  switch (k) {
    case SphereRuleKind::UniformAngle: return 2048;
    case SphereRuleKind::Fibonacci: return 4000;
    case SphereRuleKind::GaussProduct: return 2048;
    case SphereRuleKind::MonteCarlo: return spec.mc_samples;
    default: return 2048;
  }
}

inline SphereRuleKind resolve_rule(int n, const QuadratureSpec& spec) {
  SphereRuleKind k = spec.sphere.kind;
  if (n == 1) return SphereRuleKind::Auto;
  if (n >= 4) return SphereRuleKind::MonteCarlo;
  if (k == SphereRuleKind::Auto) return n == 2 ? SphereRuleKind::AdaptiveArc : SphereRuleKind::GaussProduct;
  if (n == 2 && k != SphereRuleKind::AdaptiveArc) return SphereRuleKind::UniformAngle;
  if (n == 3 && k != SphereRuleKind::Fibonacci && k != SphereRuleKind::GaussProduct) return SphereRuleKind::GaussProduct;
  return k;
}

/// Gauss product rule in a frame whose pole is `pole`: Legendre in the
/// height coordinate on each hemisphere, trapezoid in azimuth.
inline std::vector<SphereNode> gauss_product_nodes(int m, const Vec& pole, int& azimuth) {
  const int nz = std::max(2, static_cast<int>(std::lround(std::sqrt(m / 2.0)) / 2 * 2));
  azimuth = std::max(4, 2 * nz);
  if (azimuth % 2) ++azimuth;
  std::vector<double> gx, gw;
  gauss_legendre(nz / 2, gx, gw);
  const Mat q = orthonormal_complement(pole);
  std::vector<SphereNode> out;
  for (int hemi : {1, -1})
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double z = hemi * 0.5 * (gx[i] + 1.0);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < azimuth; ++j) {
        const double phi = 2.0 * std::numbers::pi * (j + 0.5 * (i % 2)) / azimuth;
        Vec t = z * pole + rho * (std::cos(phi) * q.col(0) + std::sin(phi) * q.col(1));
        out.push_back({t, 0.5 * gw[i] * 2.0 * std::numbers::pi / azimuth});
      }
    }
  return out;
}

inline std::vector<SphereNode> fibonacci_nodes(int m) {
  std::vector<SphereNode> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < m; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / m;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec t(3);
    t << rho * std::cos(golden * i), rho * std::sin(golden * i), z;
    out.push_back({t, 4.0 * std::numbers::pi / m});
  }
  return out;
}

inline std::vector<SphereNode> monte_carlo_nodes(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<SphereNode> out;
  const double w = sphere_area(n) / m;
  for (int i = 0; i < m; ++i) {
    Vec t(n);
    do {
      for (int j = 0; j < n; ++j) t(j) = gauss(rng);
    } while (t.norm() < 1e-12);
    out.push_back({t.normalized(), w});
  }
  return out;
}

}  // namespace detail

/// Nodes and weights of the sphere rule selected by `spec` in dimension n.
/// Rules with no exact form for n >= 4 fall back to Monte Carlo, flagged in the result.
inline SphereNodes sphere_nodes(int n, const QuadratureSpec& spec) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  SphereNodes out;
  if (n == 1) {
    out.nodes = {{Vec::Constant(1, 1.0), 1.0}, {Vec::Constant(1, -1.0), 1.0}};
    return out;
  }
  const SphereRuleKind kind = detail::resolve_rule(n, spec);
  const int m = detail::default_nodes(kind == SphereRuleKind::AdaptiveArc ? SphereRuleKind::UniformAngle : kind, spec);
  switch (kind) {
    case SphereRuleKind::AdaptiveArc:
    case SphereRuleKind::UniformAngle:
      for (int k = 0; k < m; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / m;
        Vec t(2);
        t << std::cos(phi), std::sin(phi);
        out.nodes.push_back({t, 2.0 * std::numbers::pi / m});
      }
      break;
    case SphereRuleKind::Fibonacci: out.nodes = detail::fibonacci_nodes(m); break;
    case SphereRuleKind::GaussProduct: {
      int az = 0;
      out.nodes = detail::gauss_product_nodes(m, Vec::Unit(3, 2), az);
      break;
    }
    default:
      out.nodes = detail::monte_carlo_nodes(n, m, spec.mc_seed);
      out.monte_carlo = true;
      break;
  }
  return out;
}

/// Hemisphere selection relative to a split direction u.
struct SphereSides {
  bool plus = true;
  bool minus = true;
};

struct SphereIntegral {
  SmallVec plus;   // contribution of <theta,u> > 0 (the whole sphere when unsplit)
  SmallVec minus;  // contribution of <theta,u> < 0
  SmallVec plus_error;
  SmallVec minus_error;
  bool monte_carlo = false;
  int evaluations = 0;

  SmallVec total() const { return plus + minus; }
  SmallVec total_error() const { return plus_error + minus_error; }
};

/// Integrates a vector-valued f over S^{n-1}, split by the hyperplane u^perp.
/// `kinks` are angles (n == 2) where f fails to be smooth. Only the first
/// `control` components steer adaptive refinement; the remaining ones ride along.
template <class F>
SphereIntegral integrate_sphere(int n, F&& f, const QuadratureSpec& spec, const Vec& u,
                                const std::vector<double>& kinks = {}, SphereSides sides = {}, int control = -1) {
  SphereIntegral out;
  const SphereRuleKind kind = detail::resolve_rule(n, spec);
  auto ensure = [&](const SmallVec& v) {
    if (out.plus.size() == 0) {
      out.plus = out.minus = out.plus_error = out.minus_error = SmallVec::Zero(v.size());
    }
  };

  if (kind == SphereRuleKind::AdaptiveArc) {
    const double pi = std::numbers::pi;
    const double alpha = std::atan2(u(1), u(0));
    AdaptiveOptions opts;
    opts.rel_tol = spec.angular_rel_tol;
    opts.abs_tol = spec.angular_abs_tol;
    opts.max_intervals = spec.max_arcs;
    auto arc = [&](double lo, double hi, SmallVec& value, SmallVec& error) {
      std::vector<double> br{lo, hi};
      for (double k : kinks) {
        double a = k;
        while (a < lo) a += 2 * pi;
        while (a >= lo + 2 * pi) a -= 2 * pi;
        if (a > lo + 1e-13 && a < hi - 1e-13) br.push_back(a);
      }
      std::sort(br.begin(), br.end());
      auto wrapped = [&](double phi) {
        Vec t(2);
        t << std::cos(phi), std::sin(phi);
        return SmallVec(f(t));
      };
      AdaptiveOptions o = opts;
      o.control = control;
      const AdaptiveResult r = integrate_adaptive(wrapped, br, o);
      out.evaluations += r.evaluations;
      value = r.value;
      error = r.error;
    };
    if (sides.plus) {
      SmallVec v, e;
      arc(alpha - pi / 2, alpha + pi / 2, v, e);
      ensure(v);
      out.plus = v;
      out.plus_error = e;
    }
    if (sides.minus) {
      SmallVec v, e;
      arc(alpha + pi / 2, alpha + 3 * pi / 2, v, e);
      ensure(v);
      out.minus = v;
      out.minus_error = e;
    }
    return out;
  }

  // Fixed-node rules. The coarse companion (every other azimuthal node) gives
  // a rule-error estimate at no extra cost.
  std::vector<SphereNode> nodes;
  std::vector<int> coarse;  // 1 if node belongs to the coarse subrule
  const double eq_tol = 1e-14;
  if (n == 1) {
    nodes = {{Vec::Constant(1, 1.0), 1.0}, {Vec::Constant(1, -1.0), 1.0}};
  } else if (kind == SphereRuleKind::UniformAngle) {
    const int m = std::max(4, detail::default_nodes(kind, spec) / 2 * 2);
    const double alpha = std::atan2(u(1), u(0)) - std::numbers::pi / 2;
    for (int k = 0; k < m; ++k) {
      const double phi = alpha + 2.0 * std::numbers::pi * k / m;
      Vec t(2);
      t << std::cos(phi), std::sin(phi);
      nodes.push_back({t, 2.0 * std::numbers::pi / m});
      coarse.push_back(k % 2 == 0);
    }
  } else if (kind == SphereRuleKind::GaussProduct) {
    int az = 0;
    nodes = detail::gauss_product_nodes(detail::default_nodes(kind, spec), u, az);
    for (std::size_t i = 0; i < nodes.size(); ++i) coarse.push_back(static_cast<int>(i % static_cast<std::size_t>(az)) % 2 == 0);
  } else if (kind == SphereRuleKind::Fibonacci) {
    nodes = detail::fibonacci_nodes(detail::default_nodes(kind, spec));
  } else {
    nodes = detail::monte_carlo_nodes(n, detail::default_nodes(SphereRuleKind::MonteCarlo, spec), spec.mc_seed);
    out.monte_carlo = true;
  }

  SmallVec coarse_plus, coarse_minus, sq_plus, sq_minus;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double h = nodes[i].theta.dot(u);
    const bool equator = std::abs(h) <= eq_tol;
    const double wp = equator ? 0.5 : (h > 0 ? 1.0 : 0.0);
    const double wm = 1.0 - wp;
    if (!((wp > 0 && sides.plus) || (wm > 0 && sides.minus))) continue;
    const SmallVec v = f(nodes[i].theta);
    ++out.evaluations;
    if (out.plus.size() == 0) {
      ensure(v);
      coarse_plus = coarse_minus = sq_plus = sq_minus = SmallVec::Zero(v.size());
    }
    const double w = nodes[i].weight;
    if (sides.plus && wp > 0) {
      out.plus += wp * w * v;
      sq_plus += wp * w * w * v.cwiseAbs2();
      if (!coarse.empty() && coarse[i]) coarse_plus += 2.0 * wp * w * v;
    }
    if (sides.minus && wm > 0) {
      out.minus += wm * w * v;
      sq_minus += wm * w * w * v.cwiseAbs2();
      if (!coarse.empty() && coarse[i]) coarse_minus += 2.0 * wm * w * v;
    }
  }
  if (out.plus.size() == 0) return out;
  if (out.monte_carlo) {
    const double m = static_cast<double>(nodes.size());
    // Standard error of a sum of m i.i.d. terms w*f.
    out.plus_error = (m * sq_plus - out.plus.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt() / std::sqrt(m - 1.0);
    out.minus_error = (m * sq_minus - out.minus.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt() / std::sqrt(m - 1.0);
  } else if (!coarse.empty()) {
    out.plus_error = (out.plus - coarse_plus).cwiseAbs();
    out.minus_error = (out.minus - coarse_minus).cwiseAbs();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radial integrals

struct RadialResult {
  SmallVec value;   // int_0^inf r^{q-1+k} e^{-phi(r)} dr, k = 0..count-1
  SmallVec error;   // quadrature error plus tail bound
  double extent = 0.0;
  int evaluations = 0;
};

namespace detail {

/// Bound on int_R^inf r^j e^{-phi(R) - m (r - R)} dr.
inline double log_tail_bound(int j, double phi_r, double m, double r) {
  const double mr = m * r;
  double term = 1.0, sum = 1.0;
  for (int i = 1; i <= j; ++i) {
    term *= mr / i;
    sum += term;
  }
  return -phi_r + std::lgamma(j + 1.0) + std::log(sum) - (j + 1.0) * std::log(m);
}

}  // namespace detail

/// Moments int_0^inf r^{q-1+k} e^{-phi(r)} dr for a convex exponent phi.
/// `scale` is an estimate of the asymptotic slope of phi; the truncation
/// point R is grown until the secant-slope tail bound is negligible.
template <class Phi>
RadialResult radial_moments(Phi&& phi, int q, int count, double scale, const RadialRule& rule) {
  if (q < 1 || count < 1 || count > 8) throw Error(ErrorCode::InvalidArgument, "radial moment order out of range");
  if (!(scale > 0) || !std::isfinite(scale)) scale = 1.0;
  RadialResult res;
  double r_max = (q + count + 36.0) / scale;

  for (int attempt = 0; attempt < 64; ++attempt) {
    const double phi_r = phi(r_max);
    const double phi_h = phi(0.5 * r_max);
    res.evaluations += 2;
    const double slope = (phi_r - phi_h) / (0.5 * r_max);
    if (!(slope > 0) || !std::isfinite(phi_r)) {
      if (std::isinf(phi_r) && phi_r > 0) {
        // exponent already infinite: nothing beyond R contributes
      } else {
        r_max *= 2.0;
        continue;
      }
    }
    auto integrand = [&](double r) {
      SmallVec v(count);
      const double e = phi(r);
      const double lr = r > 0 ? std::log(r) : -std::numeric_limits<double>::infinity();
      for (int k = 0; k < count; ++k) {
        const int j = q - 1 + k;
        v(k) = j == 0 ? std::exp(-e) : (r > 0 ? std::exp(j * lr - e) : 0.0);
      }
      return v;
    };
    AdaptiveOptions opts;
    opts.rel_tol = rule.rel_tol;
    opts.abs_tol = rule.abs_tol;
    opts.max_intervals = rule.max_subdivisions;
    const AdaptiveResult r =
        integrate_adaptive(integrand, {0.0, r_max / 8, r_max / 4, r_max / 2, r_max}, opts);
    res.evaluations += r.evaluations;
    bool tail_ok = true;
    SmallVec tail = SmallVec::Zero(count);
    if (!(std::isinf(phi_r) && phi_r > 0)) {
      for (int k = 0; k < count; ++k) {
        const double lt = detail::log_tail_bound(q - 1 + k, phi_r, slope, r_max);
        tail(k) = std::exp(lt);
        if (!(tail(k) <= std::max(rule.abs_tol, 1e-3 * rule.rel_tol * std::abs(r.value(k))))) tail_ok = false;
      }
    }
    if (!tail_ok) {
      r_max *= 2.0;
      continue;
    }
    res.value = r.value;
    res.error = r.error + tail;
    res.extent = r_max;
    return res;
  }
  throw Error(ErrorCode::NonIntegrable, "radial integrand does not decay (origin not interior)");
}

/// int_0^inf r^{q-1} f(r) dr for a log-concave f with f(0) > 0.
template <class F>
double radial_integral(F&& f, int q, const RadialRule& rule = {}, double scale = 1.0, double* error = nullptr) {
  auto phi = [&](double r) {
    const double v = f(r);
    return v > 0 ? -std::log(v) : std::numeric_limits<double>::infinity();
  };
  const RadialResult r = radial_moments(phi, q, 1, scale, rule);
  if (error) *error = r.error(0);
  return r.value(0);
}

}  // namespace lpsantalo
