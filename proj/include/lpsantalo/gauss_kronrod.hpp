#pragma once

// Globally adaptive 10/21-point Gauss-Kronrod integration of vector-valued
// integrands over a finite interval with user breakpoints.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "linalg.hpp"

namespace lpsantalo {

namespace gk21 {
inline constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067311611, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes 1,3,5,7,9.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
}  // namespace gk21

struct PanelEstimate {
  SmallVec kronrod;
  SmallVec error;     // |Kronrod - Gauss| per component
  SmallVec absolute;  // Kronrod estimate of the integral of |f|
};

template <class F>
PanelEstimate gk21_panel(F&& f, double a, double b, int& evaluations) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  SmallVec fc = f(c);
  PanelEstimate est;
  est.kronrod = gk21::kKronrodWeights[10] * fc;
  est.absolute = gk21::kKronrodWeights[10] * fc.cwiseAbs();
  SmallVec gauss = SmallVec::Zero(fc.size());
  for (int j = 0; j < 10; ++j) {
    const double dx = h * gk21::kNodes[static_cast<std::size_t>(j)];
    SmallVec f1 = f(c - dx);
    SmallVec f2 = f(c + dx);
    est.kronrod += gk21::kKronrodWeights[static_cast<std::size_t>(j)] * (f1 + f2);
    est.absolute += gk21::kKronrodWeights[static_cast<std::size_t>(j)] * (f1.cwiseAbs() + f2.cwiseAbs());
    if (j % 2 == 1) gauss += gk21::kGaussWeights[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  evaluations += 21;
  est.kronrod *= h;
  est.absolute *= std::abs(h);
  est.error = (est.kronrod - h * gauss).cwiseAbs();
  return est;
}

struct AdaptiveOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
  int control = -1;  // components steering refinement; -1 means all
};

struct AdaptiveResult {
  SmallVec value;
  SmallVec error;
  int evaluations = 0;
  bool converged = false;
};

/// Integrates f over consecutive intervals [breaks[i], breaks[i+1]].
/// Convergence is per component: error_k <= max(abs_tol, rel_tol * int |f_k|).
template <class F>
AdaptiveResult integrate_adaptive(F&& f, const std::vector<double>& breaks, const AdaptiveOptions& opts = {}) {
  struct Panel {
    double a, b;
    PanelEstimate est;
    double priority;
  };
  AdaptiveResult res;
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    panels.push_back({breaks[i], breaks[i + 1], gk21_panel(f, breaks[i], breaks[i + 1], res.evaluations), 0.0});
  }
  if (panels.empty()) {
    res.value = f(breaks.empty() ? 0.0 : breaks.front()) * 0.0;
    res.error = res.value;
    res.converged = true;
    return res;
  }
  const auto dim = panels.front().est.kronrod.size();

  auto totals = [&](SmallVec& val, SmallVec& err, SmallVec& absv) {
    val = SmallVec::Zero(dim);
    err = SmallVec::Zero(dim);
    absv = SmallVec::Zero(dim);
    for (const auto& p : panels) {
      val += p.est.kronrod;
      err += p.est.error;
      absv += p.est.absolute;
    }
  };

  SmallVec val, err, absv;
  while (true) {
    totals(val, err, absv);
    const Eigen::Index steer = opts.control >= 0 ? std::min<Eigen::Index>(opts.control, dim) : dim;
    SmallVec tol(dim);
    bool done = true;
    for (Eigen::Index k = 0; k < steer; ++k) {
      tol(k) = std::max(opts.abs_tol, opts.rel_tol * absv(k));
      if (!(err(k) <= tol(k))) done = false;
    }
    if (done) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(panels.size()) >= opts.max_intervals) break;
    // Split the panel with the largest tolerance-normalized error.
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      double score = 0.0;
      for (Eigen::Index k = 0; k < steer; ++k) score = std::max(score, panels[i].est.error(k) / tol(k));
      if (score > worst_score) worst_score = score, worst = i;
    }
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;  // interval exhausted at double precision
    panels[worst] = {p.a, mid, gk21_panel(f, p.a, mid, res.evaluations), 0.0};
    panels.push_back({mid, p.b, gk21_panel(f, mid, p.b, res.evaluations), 0.0});
  }
  res.value = val;
  res.error = err;
  return res;
}

/// Scalar convenience wrapper.
template <class F>
double integrate_scalar(F&& f, const std::vector<double>& breaks, const AdaptiveOptions& opts = {},
                        double* error = nullptr) {
  auto r = integrate_adaptive(
      [&](double x) {
        SmallVec v(1);
        v(0) = f(x);
        return v;
      },
      breaks, opts);
  if (error) *error = r.error(0);
  return r.value(0);
}

}  // namespace lpsantalo
