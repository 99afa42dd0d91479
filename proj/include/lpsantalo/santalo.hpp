#pragma once

// Santalo point, separating translations, the Steiner pipeline and the
// numerical lemma checks.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "body.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "lp_polar.hpp"
#include "quadrature.hpp"

namespace lpsantalo {

// ---------------------------------------------------------------------------
// Santalo point

struct SantaloSolveOptions {
  double grad_tol = 1e-7;
  int max_iter = 50;
  int max_halvings = 40;
  double max_condition = 1e10;  // beyond this the Newton step falls back to gradient descent

  void validate() const {
    if (!(grad_tol > 0) || max_iter < 1 || max_halvings < 1 || !(max_condition > 1))
      throw Error(ErrorCode::InvalidArgument, "invalid Santalo solver options");
  }
};

struct SantaloResult {
  Vec point;
  double grad_norm = 0.0;     // ||b(h_{p,K-x})|| at the returned point
  double grad_error = 0.0;    // quadrature error bound on that norm
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_v;  // objective at each accepted iterate
  ExpMoments moments;
};

/// Minimizes x -> log V(h_{p,K-x}) by damped Newton: the gradient is the
/// barycenter b of e^{-h_{p,K-x}} and the Hessian its covariance.
inline SantaloResult santalo_solve(const ConvexBody& k, PExponent p, const SantaloSolveOptions& opts = {},
                                   const QuadratureSpec& spec = {}) {
  opts.validate();
  const auto ev = std::make_shared<const LpSupportEvaluator>(k, p, spec);
  const double diam = diameter(k);
  auto interior = [&](const Vec& x) { return interior_margin(k, x) > 1e-9 * diam; };

  SantaloResult res;
  res.point = barycenter(k);
  if (!interior(res.point)) throw Error(ErrorCode::NonIntegrable, "barycenter is not interior (degenerate body)");
  ExpMoments m = exp_moment(PolarFunctional(ev, res.point), spec);
  res.log_v.push_back(std::log(m.V));

  for (res.iterations = 0; res.iterations < opts.max_iter; ++res.iterations) {
    if (m.b.norm() <= opts.grad_tol) break;
    Eigen::SelfAdjointEigenSolver<Mat> eig(m.cov);
    const Vec lam = eig.eigenvalues();
    Vec step;
    if (lam.minCoeff() > 0 && lam.maxCoeff() / lam.minCoeff() <= opts.max_condition)
      step = -eig.eigenvectors() * (lam.cwiseInverse().asDiagonal() * (eig.eigenvectors().transpose() * m.b));
    else
      step = -m.b / std::max(lam.maxCoeff(), 1e-300);

    const double logv = std::log(m.V);
    const double noise = 1e-12 * std::max(1.0, std::abs(logv)) + m.V_error / m.V;
    bool accepted = false;
    double alpha = 1.0;
    for (int h = 0; h < opts.max_halvings; ++h, alpha *= 0.5) {
      const Vec trial = res.point + alpha * step;
      if (!interior(trial)) continue;
      const ExpMoments mt = exp_moment(PolarFunctional(ev, trial), spec);
      const double lt = std::log(mt.V);
      if (lt < logv - noise || (lt <= logv + noise && mt.b.norm() < m.b.norm())) {
        res.point = trial;
        m = mt;
        res.log_v.push_back(lt);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  res.moments = m;
  res.grad_norm = m.b.norm();
  res.grad_error = m.b_error;
  res.converged = res.grad_norm <= opts.grad_tol;
  return res;
}

/// s_p(K). Throws MaxIterExceeded when the gradient tolerance is not met;
/// use santalo_solve for the best iterate and diagnostics.
inline Vec santalo_point(const ConvexBody& k, PExponent p, const SantaloSolveOptions& opts = {},
                         const QuadratureSpec& spec = {}) {
  const SantaloResult r = santalo_solve(k, p, opts, spec);
  if (!r.converged)
    throw Error(ErrorCode::MaxIterExceeded, "Santalo solver stopped with |b| = " + std::to_string(r.grad_norm));
  return r.point;
}

// ---------------------------------------------------------------------------
// Separating translation

struct SeparationSearch {
  double lambda = 0.5;
  double tol_g = 1e-4;
  double shrink = 1e-6;  // bracket pulled inward by shrink * (b - a)
  int max_iter = 200;
};

struct SeparationResult {
  double t = 0.0;
  double g = 0.0;        // vol_plus / (vol_plus + vol_minus) of (K - t u)^{o,p}
  double g_error = 0.0;
  double a = 0.0, b = 0.0;
  double g_a = 0.0, g_b = 0.0;
  bool mirrored = false;  // matched 1 - lambda instead of lambda
  int iterations = 0;
  std::vector<std::pair<double, double>> samples;  // (t, g) in evaluation order
};

/// Fraction of (K - t u)^{o,p} lying in (u^perp)^+.
inline Measured split_fraction(const PolarFunctional& pf, const Direction& u, double t, const QuadratureSpec& spec = {}) {
  const HalfspaceVolumes hv = polar_halfspace_volumes(pf.translated(t * u.vector()), u, spec);
  if (hv.plus.infinite && hv.minus.infinite) throw Error(ErrorCode::BracketFailure, "both half-volumes infinite");
  if (hv.plus.infinite) return {1.0, 0.0, false};
  if (hv.minus.infinite) return {0.0, 0.0, false};
  const double tot = hv.plus.value + hv.minus.value;
  const double g = hv.plus.value / tot;
  return {g, (hv.plus.error * (1 - g) + hv.minus.error * g) / tot, false};
}

/// Finds t with u^perp lambda-separating (K - t u)^{o,p} by bisection on the
/// chord of K along u through the origin.
inline SeparationResult separating_translation(const ConvexBody& k, PExponent p, const Direction& u,
                                               const SeparationSearch& search = {}, const QuadratureSpec& spec = {}) {
  if (!(search.lambda > 0 && search.lambda < 1)) throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0,1)");
  const int n = k.dim();
  if (!contains_in_interior(k, Vec::Zero(n))) throw Error(ErrorCode::InvalidArgument, "origin must be interior to K");
  const auto chord = fiber_extent(k, u, Vec::Zero(n));
  if (!chord) throw Error(ErrorCode::BracketFailure, "no chord through the origin");
  const double len = chord->length();
  SeparationResult res;
  res.a = chord->lower + search.shrink * len;
  res.b = chord->upper - search.shrink * len;
  const PolarFunctional pf(k, p, spec);

  auto eval = [&](double t) {
    try {
      const Measured g = split_fraction(pf, u, t, spec);
      res.samples.push_back({t, g.value});
      return g;
    } catch (const Error& e) {
      throw Error(ErrorCode::BracketFailure, std::string("split not computable: ") + e.what());
    }
  };
  const double lam = search.lambda;
  auto done = [&](const Measured& g) {
    if (std::abs(g.value - lam) <= search.tol_g) return true;
    if (std::abs(g.value - (1 - lam)) <= search.tol_g) {
      res.mirrored = std::abs(lam - 0.5) > search.tol_g;
      return true;
    }
    return false;
  };

  res.g_a = eval(res.a).value;
  res.g_b = eval(res.b).value;
  if (!((res.g_a - lam) * (res.g_b - lam) < 0))
    throw Error(ErrorCode::BracketFailure, "split fraction does not bracket lambda on the chord");
  const double sign_a = res.g_a - lam;

  // Start at t = 0: symmetric bodies are separated there already.
  double lo = res.a, hi = res.b, t = 0.0;
  for (res.iterations = 1; res.iterations <= search.max_iter; ++res.iterations) {
    const Measured g = eval(t);
    res.t = t;
    res.g = g.value;
    res.g_error = g.error;
    if (done(g)) return res;
    if ((g.value - lam) * sign_a > 0) lo = t;
    else hi = t;
    t = 0.5 * (lo + hi);
    if (!(hi - lo > 1e-15 * len)) break;
  }
  throw Error(ErrorCode::BracketFailure, "bisection did not reach the split tolerance");
}

// ---------------------------------------------------------------------------
// Reports

enum class Verdict { Pass, Inconclusive, Fail };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Fail: return "fail";
  }
  return "fail";
}

/// pass when slack >= 0; inconclusive when the deficit is within the error bound.
inline Verdict classify(double slack, double error_bound) {
  if (!std::isfinite(slack)) return std::isinf(slack) && slack > 0 ? Verdict::Pass : Verdict::Fail;
  if (slack >= 0) return Verdict::Pass;
  if (slack >= -std::abs(error_bound)) return Verdict::Inconclusive;
  return Verdict::Fail;
}

struct VerificationReport {
  std::string lemma;
  nlohmann::json inputs = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;        // positive when the inequality holds
  double error_bound = 0.0;
  Verdict verdict = Verdict::Pass;
  nlohmann::json details = nlohmann::json::object();

  void finish() { verdict = classify(slack, error_bound); }
};

/// Doubles are written with round-trip precision; infinities as strings.
inline nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

inline nlohmann::json json_vector(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_number(v(i)));
  return a;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  return {{"lemma", r.lemma},           {"inputs", r.inputs},
          {"lhs", json_number(r.lhs)},  {"rhs", json_number(r.rhs)},
          {"slack", json_number(r.slack)}, {"error_bound", json_number(r.error_bound)},
          {"verdict", to_string(r.verdict)}, {"details", r.details}};
}

// ---------------------------------------------------------------------------
// Ball reference

/// log of the normalized average of e^{z x_1} over the unit ball, computed
/// from the one-dimensional marginal weight sin^n.
inline double ball_profile_log_quadrature(int n, double z) {
  z = std::abs(z);
  if (z == 0.0) return 0.0;
  const double pi = std::numbers::pi;
  const double w = std::min(pi, 6.0 / std::sqrt(z));
  std::vector<double> br{0.0};
  for (double b = w / 4; b < pi; b *= 2) br.push_back(b);
  br.push_back(pi);
  AdaptiveOptions opts;
  opts.rel_tol = 1e-14;
  opts.abs_tol = 0.0;
  const double num = integrate_scalar([&](double phi) { return std::exp(z * (std::cos(phi) - 1.0)) * std::pow(std::sin(phi), n); }, br, opts);
  const double den = integrate_scalar([&](double phi) { return std::pow(std::sin(phi), n); }, {0.0, pi / 2, pi}, opts);
  return z + std::log(num / den);
}

/// M_p(B_2^n) via the rotational profile and one radial integral.
inline Measured ball_reference(int n, PExponent p, const QuadratureSpec& spec = {}) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  const double kappa = unit_ball_volume(n);
  if (p.is_infinite()) return {factorial(n) * kappa * kappa, 0.0, false};
  const double pv = p.value();
  const RadialResult r =
      radial_moments([&](double t) { return ball_profile_log_quadrature(n, pv * t) / pv; }, n, 1, 1.0, spec.radial);
  const double scale = n * kappa * kappa;
  return {scale * r.value(0), scale * r.error(0), false};
}

// ---------------------------------------------------------------------------
// Lemma checks

/// |(sigma_u K)^{o,p}| >= 4 lambda (1 - lambda) |K^{o,p}|, lambda the split of K^{o,p} by u^perp.
inline VerificationReport verify_volume_lemma(const ConvexBody& k, PExponent p, const Direction& u,
                                              const QuadratureSpec& spec = {}) {
  VerificationReport rep;
  rep.lemma = "volume_lemma";
  rep.inputs = {{"p", p.str()}, {"u", json_vector(u.vector())}};
  const PolarFunctional pf(k, p, spec);
  if (!pf.finite()) throw Error(ErrorCode::NonIntegrable, "origin must be interior to K");
  const HalfspaceVolumes hv = polar_halfspace_volumes(pf, u, spec);
  const double total = hv.plus.value + hv.minus.value;
  const double lam = hv.plus.value / total;
  const PolarFunctional ps(steiner_symmetral(k, u), p, spec);
  const Measured vs = polar_volume(ps, spec);
  rep.lhs = vs.value;
  rep.rhs = 4.0 * lam * (1.0 - lam) * total;
  rep.slack = rep.lhs - rep.rhs;
  rep.error_bound = vs.error + hv.plus.error + hv.minus.error + 1e-12 * (rep.lhs + rep.rhs);
  rep.details = {{"lambda", lam}, {"polar_volume", total}, {"symmetral_polar_volume", vs.value}};
  rep.finish();
  return rep;
}

namespace detail {

/// Length of the slice { xi : ||(xi, h)|| <= 1 } of a planar polar body.
inline double polar_slice_length(const PolarFunctional& pf, double h, const QuadratureSpec& spec) {
  auto norm = [&](double xi) { return polar_norm(pf, (Vec(2) << xi, h).finished(), spec).value; };
  // Golden-section search for the minimizing xi on an expanding bracket.
  double lo = -1.0, hi = 1.0;
  while (norm(lo) < norm(0.5 * lo)) lo *= 2;
  while (norm(hi) < norm(0.5 * hi)) hi *= 2;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = norm(c), fd = norm(d);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    if (fc < fd) {
      hi = d, d = c, fd = fc;
      c = hi - gr * (hi - lo);
      fc = norm(c);
    } else {
      lo = c, c = d, fc = fd;
      d = lo + gr * (hi - lo);
      fd = norm(d);
    }
  }
  const double xmin = 0.5 * (lo + hi);
  if (norm(xmin) >= 1.0) return 0.0;
  auto edge = [&](double dir) {
    double in = xmin, out = xmin + dir;
    while (norm(out) <= 1.0) out = xmin + 2.0 * (out - xmin);
    for (int it = 0; it < 200 && std::abs(out - in) > 1e-13 * (1.0 + std::abs(in)); ++it) {
      const double mid = 0.5 * (in + out);
      (norm(mid) <= 1.0 ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  return edge(1.0) - edge(-1.0);
}

}  // namespace detail

/// Pointwise norm inequality between K and sigma_{e_n} K at r = 2ts/(t+s),
/// plus (n = 2) the multiplicative slice-length inequality.
inline VerificationReport verify_slice_inclusion(const ConvexBody& k, PExponent p, double t, double s, int samples,
                                                 std::uint64_t seed, const QuadratureSpec& spec = {}) {
  if (!(t > 0 && s > 0) || samples < 1) throw Error(ErrorCode::InvalidArgument, "need t, s > 0 and samples >= 1");
  const int n = k.dim();
  if (n < 2) throw Error(ErrorCode::UnsupportedDimension, "slices need n >= 2");
  VerificationReport rep;
  rep.lemma = "slice_inclusion";
  rep.inputs = {{"p", p.str()}, {"t", t}, {"s", s}, {"samples", samples}, {"seed", seed}};
  const Direction en = Direction::axis(n, n - 1);
  const PolarFunctional pk(k, p, spec);
  const PolarFunctional ps(steiner_symmetral(k, en), p, spec);
  if (!pk.finite()) throw Error(ErrorCode::NonIntegrable, "origin must be interior to K");
  const double r = 2.0 * t * s / (t + s);
  const double wa = s / (t + s), wb = t / (t + s);
  const double scale = 1.0 / std::max(1e-12, diameter(k));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = std::numeric_limits<double>::infinity();
  double worst_err = 0.0;
  int violations = 0;
  for (int i = 0; i < samples; ++i) {
    Vec xi(n - 1), xj(n - 1);
    for (int j = 0; j < n - 1; ++j) xi(j) = gauss(rng) * scale * 2.0, xj(j) = gauss(rng) * scale * 2.0;
    Vec a(n), b(n), c(n);
    a << xi, t;
    b << xj, -s;
    c << wa * xi + wb * xj, r;
    const Measured lhs = polar_norm(ps, c, spec);
    const Measured na = polar_norm(pk, a, spec);
    const Measured nb = polar_norm(pk, b, spec);
    const double rhs = wa * na.value + wb * nb.value;
    const double slack = rhs - lhs.value;
    const double err = lhs.error + wa * na.error + wb * nb.error + 1e-12 * rhs;
    if (classify(slack, err) == Verdict::Fail) ++violations;
    if (slack < worst) {
      worst = slack;
      worst_err = err;
      rep.lhs = lhs.value;
      rep.rhs = rhs;
    }
  }
  rep.slack = worst;
  rep.error_bound = worst_err;
  rep.details = {{"r", r}, {"violations", violations}};
  if (n == 2) {
    const double ls = detail::polar_slice_length(ps, r, spec);
    const double lt = detail::polar_slice_length(pk, t, spec);
    const double lm = detail::polar_slice_length(pk, -s, spec);
    const double bound = std::pow(lt, wa) * std::pow(lm, wb);
    rep.details["slice_lhs"] = ls;
    rep.details["slice_rhs"] = bound;
    const double slice_slack = ls - bound;
    const double slice_err = 1e-8 * (ls + bound);
    rep.details["slice_slack"] = slice_slack;
    if (slice_slack < rep.slack) {
      rep.slack = slice_slack;
      rep.error_bound = slice_err;
      rep.lhs = ls;
      rep.rhs = bound;
    }
  }
  rep.finish();
  return rep;
}

struct HpInequalityTerms {
  double lhs, rhs, gamma, w1, w2;
};

/// Both sides of the h_p inequality between K and sigma_{e_n} K.
inline HpInequalityTerms hp_inequality_terms(const LpSupportEvaluator& ek, const LpSupportEvaluator& es, const Vec& xi,
                                             const Vec& xj, double t, double s, double alpha, double beta) {
  const int n = ek.dim();
  const double tau = t / (t + s);
  const double r = 2.0 * t * s / (t + s);
  const double den = tau * alpha + (1.0 - tau) * beta;
  const double gamma = alpha * beta / den;
  const double w1 = (1.0 - tau) * beta / den;
  const double w2 = tau * alpha / den;
  Vec c(n), a(n), b(n);
  c << gamma * ((1.0 - tau) * xi + tau * xj), gamma * r;
  a << alpha * xi, alpha * t;
  b << beta * xj, -beta * s;
  return {es.h(c), w1 * ek.h(a) + w2 * ek.h(b), gamma, w1, w2};
}

inline VerificationReport verify_hp_inequality(const ConvexBody& k, PExponent p, const Vec& xi, const Vec& xj,
                                               double t, double s, double alpha, double beta,
                                               const QuadratureSpec& spec = {}) {
  if (!(t > 0 && s > 0 && alpha > 0 && beta > 0)) throw Error(ErrorCode::InvalidArgument, "t, s, alpha, beta must be positive");
  const int n = k.dim();
  if (xi.size() != n - 1 || xj.size() != n - 1) throw Error(ErrorCode::InvalidArgument, "xi must lie in R^{n-1}");
  const LpSupportEvaluator ek(k, p, spec);
  const LpSupportEvaluator es(steiner_symmetral(k, Direction::axis(n, n - 1)), p, spec);
  const HpInequalityTerms h = hp_inequality_terms(ek, es, xi, xj, t, s, alpha, beta);
  VerificationReport rep;
  rep.lemma = "hp_inequality";
  rep.inputs = {{"p", p.str()}, {"xi", json_vector(xi)}, {"xi_prime", json_vector(xj)}, {"t", t}, {"s", s},
                {"alpha", alpha}, {"beta", beta}};
  rep.lhs = h.lhs;
  rep.rhs = h.rhs;
  rep.slack = h.rhs - h.lhs;
  rep.error_bound = 1e-12 * (1.0 + std::abs(h.lhs) + std::abs(h.rhs));
  rep.details = {{"gamma", h.gamma}, {"w1", h.w1}, {"w2", h.w2}};
  rep.finish();
  return rep;
}

using Profile = std::function<double(double)>;  // r -> -log of a nonnegative function

/// (int r^{q-1} H)^{-1/q} <= (1-lambda)(int t^{q-1} F)^{-1/q} + lambda (int s^{q-1} G)^{-1/q},
/// with F, G, H given through their negative logarithms.
inline VerificationReport verify_ball_corollary(const Profile& f, const Profile& g, const Profile& h, double lambda,
                                                int q, const QuadratureSpec& spec = {}, double scale = 1.0) {
  if (!(lambda >= 0 && lambda <= 1) || q < 1) throw Error(ErrorCode::InvalidArgument, "need lambda in [0,1] and q >= 1");
  auto moment = [&](const Profile& phi) { return radial_moments(phi, q, 1, scale, spec.radial); };
  const RadialResult rf = moment(f), rg = moment(g), rh = moment(h);
  auto inv = [q](double v) { return std::pow(v, -1.0 / q); };
  VerificationReport rep;
  rep.lemma = "ball_corollary";
  rep.inputs = {{"lambda", lambda}, {"q", q}};
  rep.lhs = inv(rh.value(0));
  rep.rhs = (1 - lambda) * inv(rf.value(0)) + lambda * inv(rg.value(0));
  rep.slack = rep.rhs - rep.lhs;
  rep.error_bound = (rep.lhs * rh.error(0) / rh.value(0) + (1 - lambda) * inv(rf.value(0)) * rf.error(0) / rf.value(0) +
                     lambda * inv(rg.value(0)) * rg.error(0) / rg.value(0)) / q +
                    1e-12 * rep.rhs;
  rep.finish();
  return rep;
}

/// Ball corollary on profiles built from K and sigma_{e_n} K along the rays
/// (xi, t), (xi', -s) and ((1-tau) xi + tau xi', r), with lambda = tau and q = n.
inline VerificationReport verify_ball_corollary_for_body(const ConvexBody& k, PExponent p, const Vec& xi, const Vec& xj,
                                                         double t, double s, const QuadratureSpec& spec = {}) {
  const int n = k.dim();
  const auto ek = std::make_shared<const LpSupportEvaluator>(k, p, spec);
  const auto es = std::make_shared<const LpSupportEvaluator>(steiner_symmetral(k, Direction::axis(n, n - 1)), p, spec);
  const double tau = t / (t + s);
  const double r = 2.0 * t * s / (t + s);
  Vec a(n), b(n), c(n);
  a << xi, t;
  b << xj, -s;
  c << (1 - tau) * xi + tau * xj, r;
  const auto ra = ek->ray(a), rb = ek->ray(b), rc = es->ray(c);
  const double scale = std::min({ek->support(a), ek->support(b), es->support(c)});
  if (!(scale > 0)) throw Error(ErrorCode::NonIntegrable, "origin must be interior to K");
  VerificationReport rep = verify_ball_corollary([&](double x) { return ra(x); }, [&](double x) { return rb(x); },
                                                 [&](double x) { return rc(x); }, tau, n, spec, scale);
  rep.inputs["p"] = p.str();
  rep.inputs["xi"] = json_vector(xi);
  rep.inputs["xi_prime"] = json_vector(xj);
  rep.inputs["t"] = t;
  rep.inputs["s"] = s;
  return rep;
}

/// log(sinh(t x) / t), stable for large arguments.
inline double log_sinh_over(double t, double x) {
  const double z = t * x;
  const double ls = z > 20 ? z + std::log1p(-std::exp(-2 * z)) - std::log(2.0) : std::log(std::sinh(z));
  return ls - std::log(t);
}

/// Second differences of t -> log(sinh(t x)/t) on a grid; slack is the minimum.
inline VerificationReport verify_sinh_log_convexity(double x, double t_min, double t_max, int points) {
  VerificationReport rep;
  rep.lemma = "sinh_log_convexity";
  rep.inputs = {{"x", x}, {"t_min", t_min}, {"t_max", t_max}, {"points", points}};
  const double h = (t_max - t_min) / (points - 1);
  double worst = std::numeric_limits<double>::infinity();
  double worst_err = 0.0;
  for (int i = 1; i + 1 < points; ++i) {
    const double t = t_min + i * h;
    const double f0 = log_sinh_over(t - h, x), f1 = log_sinh_over(t, x), f2 = log_sinh_over(t + h, x);
    const double d2 = f0 - 2 * f1 + f2;
    if (d2 < worst) {
      worst = d2;
      worst_err = 8e-16 * (std::abs(f0) + 2 * std::abs(f1) + std::abs(f2));
    }
  }
  rep.slack = worst;
  rep.error_bound = worst_err;
  rep.finish();
  return rep;
}

// ---------------------------------------------------------------------------
// Steiner pipeline and main theorem

struct PipelineStep {
  int axis = 0;
  Vec santalo_of_symmetral;  // s_p(sigma K_{i-1}), expected in e_i^perp
  double separation_t = 0.0;
  double separation_g = 0.0;
  Measured mahler_separated;  // M_p(L - t u): between the two trace entries
  Measured mahler_after;      // M_p(K_i)
};

struct PipelineResult {
  ConvexBody final_body;
  std::vector<Measured> trace;  // M_p(K_0), ..., M_p(K_n)
  std::vector<PipelineStep> steps;
};

/// K_0 = K - s_p(K); K_i = sigma_{e_i} K_{i-1} recentred at its Santalo point.
/// Each step also locates the 1/2-separating translate L - t e_i of K_{i-1}.
inline PipelineResult steiner_pipeline(const ConvexBody& k, PExponent p, const SantaloSolveOptions& opts = {},
                                       const QuadratureSpec& spec = {}) {
  const int n = k.dim();
  auto centred = [&](const ConvexBody& body) {
    const SantaloResult s = santalo_solve(body, p, opts, spec);
    if (!s.converged) throw Error(ErrorCode::MaxIterExceeded, "Santalo solver did not converge in the pipeline");
    return s.point;
  };
  ConvexBody cur = translate(k, -centred(k));
  PipelineResult res{cur, {}, {}};
  res.trace.push_back(mahler_volume(cur, p, Vec::Zero(n), spec));
  for (int i = 0; i < n; ++i) {
    const Direction u = Direction::axis(n, i);
    PipelineStep step;
    step.axis = i;
    const ConvexBody sym = steiner_symmetral(cur, u);
    step.santalo_of_symmetral = centred(sym);
    const Vec& ss = step.santalo_of_symmetral;
    // L = K_{i-1} - s, moved along u so that the origin bisects its chord.
    ConvexBody l = translate(cur, -ss);
    const auto chord = fiber_extent(l, u, Vec::Zero(n));
    if (!chord) throw Error(ErrorCode::BracketFailure, "translated body misses the axis");
    l = translate(l, -0.5 * (chord->lower + chord->upper) * u.vector());
    SeparationSearch search;
    search.lambda = 0.5;
    const SeparationResult sep = separating_translation(l, p, u, search, spec);
    step.separation_t = sep.t;
    step.separation_g = sep.g;
    step.mahler_separated = mahler_volume(l, p, sep.t * u.vector(), spec);
    cur = translate(sym, -ss);
    step.mahler_after = mahler_volume(cur, p, Vec::Zero(n), spec);
    res.trace.push_back(step.mahler_after);
    res.steps.push_back(step);
  }
  res.final_body = cur;
  return res;
}

/// inf_x M_p(K - x) <= M_p(B_2^n), evaluated at x = s_p(K).
inline VerificationReport verify_main_theorem(const ConvexBody& k, PExponent p, const SantaloSolveOptions& opts = {},
                                              const QuadratureSpec& spec = {}) {
  const int n = k.dim();
  const SantaloResult s = santalo_solve(k, p, opts, spec);
  const Measured m = mahler_volume(k, p, s.point, spec);
  const Measured ref = ball_reference(n, p, spec);
  VerificationReport rep;
  rep.lemma = "main_theorem";
  rep.inputs = {{"p", p.str()}};
  rep.lhs = m.value;
  rep.rhs = ref.value;
  rep.slack = ref.value - m.value;
  rep.error_bound = m.error + ref.error + 1e-12 * ref.value;
  rep.details = {{"santalo_point", json_vector(s.point)}, {"grad_norm", s.grad_norm}, {"converged", s.converged}};
  rep.finish();
  return rep;
}

struct BergmanBound {
  Vec s1;
  double bound;
};

/// (s_1(K), M_1(B_2^n) / ((4 pi)^n |K|^2)).
inline BergmanBound bergman_bound(const ConvexBody& k, const QuadratureSpec& spec = {},
                                  const SantaloSolveOptions& opts = {}) {
  const int n = k.dim();
  const Vec s1 = santalo_point(k, PExponent::finite(1.0), opts, spec);
  const double vol = LpSupportEvaluator(k, PExponent::finite(1.0), spec).volume();
  const double m1 = ball_reference(n, PExponent::finite(1.0), spec).value;
  return {s1, m1 / (std::pow(4.0 * std::numbers::pi, n) * vol * vol)};
}

// ---------------------------------------------------------------------------
// Seeded corpora

/// Random planar polygon with exactly `vertices` extreme points: jittered
/// points on a circle, stretched by a random linear map.
inline ConvexBody random_polygon(int vertices, std::mt19937_64& rng) {
  if (vertices < 3) throw Error(ErrorCode::InvalidArgument, "a polygon needs at least 3 vertices");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> ang;
    for (int i = 0; i < vertices; ++i) ang.push_back(2.0 * std::numbers::pi * unif(rng));
    std::sort(ang.begin(), ang.end());
    Mat a(2, 2);
    a << 0.7 + 0.6 * unif(rng), 0.4 * (unif(rng) - 0.5), 0.4 * (unif(rng) - 0.5), 0.7 + 0.6 * unif(rng);
    Vec shift(2);
    shift << 0.3 * (unif(rng) - 0.5), 0.3 * (unif(rng) - 0.5);
    std::vector<Vec> pts;
    for (double t : ang) {
      const double rad = 0.6 + 0.4 * unif(rng);
      pts.push_back(a * (Vec(2) << rad * std::cos(t), rad * std::sin(t)).finished() + shift);
    }
    try {
      ConvexBody k = ConvexBody::polytope(pts);
      if (static_cast<int>(k.as_polytope().vertices.size()) == vertices && contains_in_interior(k, Vec::Zero(2), 1e-3))
        return k;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::InvalidArgument, "could not sample a polygon with the requested vertex count");
}

/// Random polytope: convex hull of Gaussian points.
inline ConvexBody random_hull(int n, int points, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vec> pts;
    for (int i = 0; i < points; ++i) {
      Vec v(n);
      for (int j = 0; j < n; ++j) v(j) = gauss(rng);
      pts.push_back(v);
    }
    try {
      return ConvexBody::polytope(pts);
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::DegenerateBody, "could not sample a full-dimensional hull");
}

}  // namespace lpsantalo
