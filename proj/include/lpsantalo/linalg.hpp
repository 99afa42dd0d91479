#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"

namespace lpsantalo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Small vector with inline storage, used for vector-valued integrands.
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 32, 1>;

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Volume of the Euclidean unit ball in R^n.
inline double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Surface area of S^{n-1}.
inline double sphere_area(int n) { return n * unit_ball_volume(n); }

/// Orthonormal basis (as columns) of the hyperplane orthogonal to u.
inline Mat orthonormal_complement(const Vec& u) {
  const auto n = u.size();
  Eigen::HouseholderQR<Mat> qr(u.normalized());
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - 1);
}

/// Haar-distributed orthogonal matrix.
template <class Rng>
Mat random_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  Mat g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

/// Rank of the affine hull of a point set, computed from the centered spread.
inline int affine_rank(const std::vector<Vec>& pts, double rel_tol = 1e-10) {
  if (pts.empty()) return -1;
  const auto n = pts.front().size();
  if (pts.size() == 1) return 0;
  Mat d(n, static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t i = 1; i < pts.size(); ++i) d.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
  Eigen::JacobiSVD<Mat> svd(d);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

/// 64-bit FNV-1a over a byte string; stable across platforms.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace lpsantalo
