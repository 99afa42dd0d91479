#pragma once

// Dense two-phase simplex method for small equality-form linear programs:
//
//   maximize  c^T x   subject to  A x = b,  x >= 0.
//
// Bland's rule (smallest-index entering and leaving variable) rules out
// cycling on degenerate vertices, which are common here: the LPs come from
// convex-combination weights of polytope vertices.

#include <optional>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"

namespace lpsantalo {

struct LpSolution {
  double value = 0.0;
  Vec x;
};

struct LpOptions {
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;
  int max_pivots = 10000;
};

namespace detail {

class Tableau {
 public:
  Tableau(const Mat& a, const Vec& b) : m_(a.rows()), k_(a.cols()), t_(a.rows() + 1, a.cols() + a.rows() + 1) {
    t_.setZero();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = b(i) < 0 ? -1.0 : 1.0;
      t_.row(i).head(k_) = sign * a.row(i);
      t_(i, k_ + i) = 1.0;
      t_(i, rhs()) = sign * b(i);
    }
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = k_ + i;
  }

  Eigen::Index rhs() const { return k_ + m_; }
  Eigen::Index rows() const { return m_; }
  Eigen::Index structural() const { return k_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  double at(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }

  // Installs the reduced-cost row for minimizing cost^T x over the current basis.
  void set_costs(const Vec& cost) {
    t_.row(m_).setZero();
    t_.row(m_).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  double objective() const { return -t_(m_, rhs()); }

  // Returns false when the LP is unbounded in the current phase.
  bool optimize(Eigen::Index allowed_cols, const LpOptions& opts) {
    for (int iter = 0; iter < opts.max_pivots; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (t_(m_, j) < -opts.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= opts.pivot_tol) continue;
        const double ratio = t_(i, rhs()) / a;
        if (leave < 0 || ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::MaxIterExceeded, "simplex pivot limit reached");
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

 private:
  Eigen::Index m_, k_;
  Mat t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// Solves max c^T x s.t. A x = b, x >= 0. Returns nullopt when infeasible.
/// Throws InvalidArgument when unbounded.
inline std::optional<LpSolution> solve_lp(const Mat& a, const Vec& b, const Vec& c, const LpOptions& opts = {}) {
  if (a.rows() != b.size() || a.cols() != c.size())
    throw Error(ErrorCode::InvalidArgument, "LP dimension mismatch");
  const Eigen::Index m = a.rows();
  const Eigen::Index k = a.cols();
  detail::Tableau tab(a, b);

  // Phase 1: minimize the sum of artificials.
  Vec phase1 = Vec::Zero(k + m);
  phase1.tail(m).setOnes();
  tab.set_costs(phase1);
  tab.optimize(k + m, opts);
  const double scale = 1.0 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  if (tab.objective() > opts.feasibility_tol * scale) return std::nullopt;

  // Drive remaining artificials out of the basis; rows with no structural
  // pivot are redundant and keep their zero-valued artificial.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < k) continue;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (std::abs(tab.at(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  Vec phase2 = Vec::Zero(k + m);
  phase2.head(k) = -c;
  tab.set_costs(phase2);
  if (!tab.optimize(k, opts)) throw Error(ErrorCode::InvalidArgument, "LP is unbounded");

  LpSolution sol;
  sol.x = Vec::Zero(k);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = tab.basis()[static_cast<std::size_t>(i)];
    if (j < k) sol.x(j) = std::max(0.0, tab.at(i, tab.rhs()));
  }
  sol.value = c.dot(sol.x);
  return sol;
}

}  // namespace lpsantalo
