#include <gtest/gtest.h>

#include <random>

#include "lpsantalo/lp_polar.hpp"
#include "lpsantalo/santalo.hpp"

using namespace lpsantalo;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

ConvexBody square() { return ConvexBody::polytope({v2(-1, -1), v2(1, -1), v2(1, 1), v2(-1, 1)}); }
ConvexBody figure_triangle() { return ConvexBody::polytope({v2(-1, 1), v2(2, 1), v2(0, 2)}); }
ConvexBody disk() { return ConvexBody::ball(Vec::Zero(2), 1.0); }

PExponent P(double p) { return PExponent::finite(p); }
const PExponent kInf = PExponent::infinity();

// Area of {y : <v_i, y> <= 1} for a CCW polygon containing 0: consecutive
// constraint lines meet at the polar vertices.
double polar_polygon_area(const std::vector<Vec>& ccw) {
  std::vector<Vec> dual;
  const std::size_t m = ccw.size();
  for (std::size_t i = 0; i < m; ++i) {
    Mat a(2, 2);
    a.row(0) = ccw[i].transpose();
    a.row(1) = ccw[(i + 1) % m].transpose();
    dual.push_back(a.fullPivLu().solve(Vec::Ones(2)));
  }
  double s = 0;
  for (std::size_t i = 0; i < m; ++i) s += dual[i](0) * dual[(i + 1) % m](1) - dual[i](1) * dual[(i + 1) % m](0);
  return 0.5 * std::abs(s);
}

}  // namespace

TEST(PExponent, Parsing) {
  EXPECT_TRUE(PExponent::parse("inf").is_infinite());
  EXPECT_EQ(PExponent::parse("2.5").value(), 2.5);
  EXPECT_EQ(PExponent::parse("0.5").str(), "0.5");
  EXPECT_EQ(kInf.str(), "inf");
  for (const char* bad : {"-1", "0", "abc", "1x", ""}) EXPECT_THROW(PExponent::parse(bad), Error) << bad;
  EXPECT_THROW(PExponent::finite(-2), Error);
}

TEST(SupportFunction, Examples) {
  const LpSupportEvaluator inf_sq(square(), kInf);
  EXPECT_NEAR(inf_sq.h(v2(1, 1)), 2.0, 1e-15);
  const LpSupportEvaluator one_sq(square(), P(1));
  EXPECT_NEAR(h_p(one_sq, v2(1, 0)), std::log(std::sinh(1.0)), 1e-13);
  EXPECT_NEAR(std::log(std::sinh(1.0)), 0.16144, 1e-5);
  for (double p : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(LpSupportEvaluator(figure_triangle(), P(p)).h(v2(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(LpSupportEvaluator(disk(), P(p)).h(v2(0, 0)), 0.0, 1e-15);
  }
  const LpSupportEvaluator ball_inf(ConvexBody::ball(v2(0.5, 0), 2.0), kInf);
  EXPECT_NEAR(ball_inf.h(v2(0, 3)), 6.0, 1e-14);
}

TEST(SupportFunction, SquareSeparability) {
  // h_{p,[-1,1]^2}(y) = (1/p) sum_i log(sinh(p y_i) / (p y_i))
  const LpSupportEvaluator ev(square(), P(2.5));
  for (const Vec& y : {v2(0.3, -0.8), v2(4, 1e-3), v2(-30, 12)}) {
    double expect = 0;
    for (int i = 0; i < 2; ++i) expect += log_sinh_over(1.0, std::abs(2.5 * y(i))) / 2.5 - std::log(std::abs(2.5 * y(i))) / 2.5;
    EXPECT_NEAR(ev.h(y), expect, 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST(SupportFunction, BallProfileMatchesBessel) {
  for (int n : {1, 2, 3, 4}) {
    const double nu = 0.5 * n;
    for (double z : {1e-3, 0.5, 3.0, 24.0, 26.0, 80.0, 300.0}) {
      const double oracle =
          std::lgamma(nu + 1) + nu * std::log(2 / z) + std::log(std::cyl_bessel_i(nu, z));
      EXPECT_NEAR(detail::ball_profile_log(n, z), oracle, 1e-12 * std::max(1.0, oracle)) << n << " " << z;
      EXPECT_NEAR(ball_profile_log_quadrature(n, z), oracle, 1e-11 * std::max(1.0, oracle)) << n << " " << z;
    }
  }
}

TEST(SupportFunction, DiskAgainstPolygonApproximation) {
  // h_p of the disk through its Bessel profile vs the triangulated fine polygon.
  const LpSupportEvaluator ball(disk(), P(1.5));
  const LpSupportEvaluator poly(polytope_approximation(disk(), 4096), P(1.5));
  for (const Vec& y : {v2(1, 0), v2(-2, 3), v2(0.1, 0.2)}) EXPECT_NEAR(ball.h(y), poly.h(y), 1e-5);
}

TEST(SupportFunction, MonotoneInPAndConvergesToSupport) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  const std::vector<double> ps{0.5, 1, 4, 16, 64, 256};
  for (int trial = 0; trial < 4; ++trial) {
    const ConvexBody k = random_polygon(5 + 2 * trial, rng);
    std::vector<LpSupportEvaluator> evs;
    for (double p : ps) evs.emplace_back(k, P(p));
    const LpSupportEvaluator inf(k, kInf);
    for (int s = 0; s < 20; ++s) {
      const Vec y = v2(3 * g(rng), 3 * g(rng));
      const double hk = inf.h(y);
      double prev = -std::numeric_limits<double>::infinity();
      double prev_err = std::numeric_limits<double>::infinity();
      for (const auto& ev : evs) {
        const double h = ev.h(y);
        EXPECT_GE(h, prev - 1e-12);
        EXPECT_LE(h, hk + 1e-12);
        EXPECT_LT(hk - h, prev_err);
        prev = h;
        prev_err = hk - h;
      }
    }
  }
}

TEST(SupportFunction, ConvexAlongSegments) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (double p : {0.5, 1.0, 8.0}) {
    const ConvexBody k = random_polygon(7, rng);
    const LpSupportEvaluator ev(k, P(p));
    for (int s = 0; s < 50; ++s) {
      const Vec a = v2(4 * g(rng), 4 * g(rng)), b = v2(4 * g(rng), 4 * g(rng));
      EXPECT_LE(ev.h(0.5 * (a + b)), 0.5 * (ev.h(a) + ev.h(b)) + 1e-9);
    }
  }
}

TEST(SupportFunction, TranslationRule) {
  std::mt19937_64 rng(14);
  const ConvexBody k = random_polygon(6, rng);
  const Vec x = v2(0.2, -0.35);
  const LpSupportEvaluator ev(k, P(1.7));
  const LpSupportEvaluator shifted(translate(k, -x), P(1.7));
  const PolarFunctional pf = PolarFunctional(k, P(1.7)).translated(x);
  for (const Vec& y : {v2(1, 2), v2(-3, 0.5), v2(10, -7)}) {
    EXPECT_NEAR(shifted.h(y), ev.h(y) - x.dot(y), 1e-9);
    EXPECT_NEAR(pf.exponent(y), ev.h(y) - x.dot(y), 1e-12);
  }
}

TEST(SupportFunction, ThreeDimensionalAgainstSampling) {
  std::mt19937_64 rng(15);
  const ConvexBody k = random_hull(3, 9, rng);
  const LpSupportEvaluator ev(k, P(1));
  const auto pts = uniform_samples(k, 200000, 3);
  const Vec y = (Vec(3) << 0.4, -0.9, 0.3).finished();
  double sum = 0, sum2 = 0;
  for (const auto& x : pts) {
    const double f = std::exp(x.dot(y));
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / pts.size();
  const double se = std::sqrt((sum2 / pts.size() - mean * mean) / pts.size());
  EXPECT_NEAR(std::exp(ev.h(y)), mean, 4 * se);
}

TEST(PolarNorm, Examples) {
  const PolarFunctional b(disk(), kInf);
  EXPECT_NEAR(polar_norm(b, v2(0.6, 0.8)).value, 1.0, 1e-15);
  const PolarFunctional sq(square(), kInf);
  EXPECT_NEAR(polar_norm(sq, v2(1, 1)).value, 2.0, 1e-15);
}

TEST(PolarNorm, SegmentAtPOneAgainstTrapezoid) {
  const PolarFunctional pf(ConvexBody::polytope({v1(-1), v1(1)}), P(1));
  const int m = 600000;
  const double h = 60.0 / m;
  double trap = 0.5 * (1.0 + 60.0 / std::sinh(60.0));
  for (int i = 1; i < m; ++i) trap += i * h / std::sinh(i * h);
  trap *= h;
  EXPECT_NEAR(polar_norm(pf, v1(1)).value, 1.0 / trap, 1e-7);
}

TEST(PolarNorm, InfiniteLimitMatchesSupport) {
  std::mt19937_64 rng(16);
  const ConvexBody k = random_polygon(8, rng);
  const PolarFunctional inf(k, kInf);
  const PolarFunctional big(k, P(400));
  for (const Vec& y : {v2(1, 0), v2(-0.3, 0.9), v2(0.5, -0.5)}) {
    const double hk = support(k, y);
    EXPECT_NEAR(polar_norm(inf, y).value, hk, 1e-14);
    EXPECT_NEAR(polar_norm(big, y).value, hk, 0.05 * hk);
  }
}

TEST(PolarNorm, HomogeneousAndSubadditive) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (double p : {0.5, 2.0}) {
    const PolarFunctional pf(random_polygon(6, rng), P(p));
    for (int s = 0; s < 20; ++s) {
      const Vec y = v2(g(rng), g(rng)), z = v2(g(rng), g(rng));
      const double ny = polar_norm(pf, y).value;
      EXPECT_NEAR(polar_norm(pf, 3.7 * y).value, 3.7 * ny, 1e-8 * 3.7 * ny);
      EXPECT_LE(polar_norm(pf, y + z).value, ny + polar_norm(pf, z).value + 1e-9);
      EXPECT_GE(ny, 0.0);
    }
    EXPECT_EQ(polar_norm(pf, v2(0, 0)).value, 0.0);
  }
}

TEST(PolarNorm, NotIntegrableOutsideInterior) {
  const PolarFunctional pf = PolarFunctional(square(), P(1)).translated(v2(1.5, 0));
  try {
    polar_norm(pf, v2(1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonIntegrable);
  }
}

TEST(PolarNorm, InclusionAgainstClassicalPolar) {
  // h_{K-(1-1/l) b}(y) <= ||y||_{K^{o,p}} / (l (1-l)^{1/p}); the exponent 1/p
  // is what the underlying approximation of h_K by h_{p,K} yields.
  std::mt19937_64 rng(18);
  std::normal_distribution<double> g;
  for (double p : {0.5, 1.0, 2.0, 8.0}) {
    const ConvexBody k = random_polygon(7, rng);
    const Vec bk = barycenter(k);
    const PolarFunctional pf(k, P(p));
    for (double lam : {0.5, 0.9}) {
      const ConvexBody shifted = translate(k, (1.0 / lam - 1.0) * bk);
      for (int s = 0; s < 20; ++s) {
        const Vec y = v2(g(rng), g(rng));
        const double ny = polar_norm(pf, y).value;
        const double classical = support(shifted, y);
        EXPECT_GE(ny, lam * std::pow(1 - lam, 1.0 / p) * classical - 1e-9);
        if (p >= 1) {
          EXPECT_GE(ny, lam * std::pow(1 - lam, p) * classical - 1e-9);
        }
      }
    }
  }
}

TEST(PolarVolume, Examples) {
  EXPECT_NEAR(polar_volume(PolarFunctional(square(), kInf)).value, 2.0, 1e-10);
  EXPECT_NEAR(polar_volume(PolarFunctional(disk(), kInf)).value, kPi, 1e-10);
  EXPECT_NEAR(mahler_volume(disk(), kInf, v2(0, 0)).value, 2 * kPi * kPi, 1e-8);
  EXPECT_NEAR(mahler_volume(square(), kInf, v2(0, 0)).value, 16.0, 1e-8);
  EXPECT_TRUE(mahler_volume(square(), kInf, v2(1, 0)).infinite);
  EXPECT_TRUE(mahler_volume(square(), P(1), v2(1, 0)).infinite);
  EXPECT_TRUE(mahler_volume(square(), P(1), v2(3, 0)).infinite);
}

TEST(PolarVolume, SquareAtPOneClosedForm) {
  // V = (int_R t / sinh t dt)^2 = (pi^2/2)^2, so M_1 = 4 (pi^2/2)^2.
  const Measured m = mahler_volume(square(), P(1), v2(0, 0));
  EXPECT_NEAR(m.value, 4 * std::pow(kPi * kPi / 2, 2), 1e-7 * m.value);
  EXPECT_NEAR(m.value, 97.409091034, 1e-6);
  EXPECT_LT(m.error, 1e-6 * m.value);
}

TEST(PolarVolume, SquareAtPOneAgainstMonteCarlo) {
  // |K^{o,1}| = V / 2: sample y uniformly from a box and average e^{-h}.
  const LpSupportEvaluator ev(square(), P(1));
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-40, 40);
  const int m = 400000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < m; ++i) {
    const double f = std::exp(-ev.h(v2(u(rng), u(rng))));
    sum += f;
    sum2 += f * f;
  }
  const double area = 80.0 * 80.0;
  const double mean = sum / m;
  const double se = std::sqrt((sum2 / m - mean * mean) / m) * area / 2;
  EXPECT_NEAR(polar_volume(PolarFunctional(square(), P(1))).value, mean * area / 2, 3 * se);
}

TEST(PolarVolume, TriangleAtInfinityMatchesPolarPolygon) {
  for (const Vec& x : {v2(1.0 / 3, 4.0 / 3), v2(0.2, 1.5), v2(0.9, 1.1)}) {
    const ConvexBody k = translate(figure_triangle(), -x);
    const double oracle = polar_polygon_area(k.as_polytope().vertices);
    const PolarFunctional pf(k, kInf);
    EXPECT_NEAR(polar_volume(pf).value, oracle, 1e-9 * oracle);
    const auto hv = polar_halfspace_volumes(pf, Direction::axis(2, 1));
    ASSERT_FALSE(hv.plus.infinite || hv.minus.infinite);
    EXPECT_NEAR(hv.plus.value + hv.minus.value, oracle, 1e-9 * oracle);
  }
}

TEST(PolarVolume, RandomPolygonsAtInfinityMatchPolarPolygon) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 5; ++trial) {
    const ConvexBody k = random_polygon(5 + trial, rng);
    const double oracle = polar_polygon_area(k.as_polytope().vertices);
    EXPECT_NEAR(polar_volume(PolarFunctional(k, kInf)).value, oracle, 1e-9 * oracle);
  }
}

TEST(PolarVolume, GaussProductAndFibonacciIn3D) {
  // cube [-1,1]^3: polar is the octahedron of volume 4/3
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back((Vec(3) << (i & 1 ? 1 : -1), (i & 2 ? 1 : -1), (i & 4 ? 1 : -1)).finished());
  const ConvexBody cube = ConvexBody::polytope(pts);
  EXPECT_NEAR(polar_volume(PolarFunctional(cube, kInf)).value, 4.0 / 3, 1e-3);
  QuadratureSpec fib;
  fib.sphere = SphereRule::fibonacci(20000);
  EXPECT_NEAR(polar_volume(PolarFunctional(cube, kInf, fib), fib).value, 4.0 / 3, 2e-3);
  // ball: 4 pi / 3 exactly on any rule
  EXPECT_NEAR(polar_volume(PolarFunctional(ConvexBody::ball(Vec::Zero(3), 1), kInf)).value, 4 * kPi / 3, 1e-10);
}

TEST(HalfspaceVolumes, Examples) {
  const auto sq = polar_halfspace_volumes(PolarFunctional(square(), kInf), Direction::axis(2, 1));
  EXPECT_NEAR(sq.plus.value, 1.0, 1e-10);
  EXPECT_NEAR(sq.minus.value, 1.0, 1e-10);
  const ConvexBody kite = ConvexBody::polytope({v2(-1, 0), v2(0, 0.7), v2(2, 0), v2(0, -0.7)});
  for (double p : {0.5, 1.0, 8.0}) {
    const auto hv = polar_halfspace_volumes(PolarFunctional(kite, P(p)), Direction::axis(2, 1));
    EXPECT_NEAR(hv.plus.value, hv.minus.value, 1e-6 * hv.plus.value);
  }
}

TEST(HalfspaceVolumes, SumToPolarVolume) {
  std::mt19937_64 rng(21);
  for (double p : {0.5, 2.0}) {
    const PolarFunctional pf(random_polygon(6, rng), P(p));
    const Direction u(v2(0.3, -1));
    const auto hv = polar_halfspace_volumes(pf, u);
    const double total = polar_volume(pf).value;
    EXPECT_NEAR(hv.plus.value + hv.minus.value, total, 1e-8 * total);
  }
}

TEST(HalfspaceVolumes, OneSideInfiniteBeyondTheChord) {
  // K - t e_2 lies in the lower half-plane for t >= 1: the lower half of the
  // polar stays finite and the upper half is infinite.
  const PolarFunctional pf(square(), P(1));
  const auto hv = polar_halfspace_volumes(pf.translated(v2(0, 1.2)), Direction::axis(2, 1));
  EXPECT_TRUE(hv.plus.infinite);
  EXPECT_FALSE(hv.minus.infinite);
  EXPECT_GT(hv.minus.value, 0);
  const auto inf = polar_halfspace_volumes(PolarFunctional(square(), kInf).translated(v2(0, 1.2)), Direction::axis(2, 1));
  EXPECT_TRUE(inf.plus.infinite);
  EXPECT_FALSE(inf.minus.infinite);
  EXPECT_GT(inf.minus.value, 0);
}

TEST(ExpMoment, SymmetricBodyHasZeroBarycenter) {
  for (double p : {0.5, 1.0, 8.0}) {
    EXPECT_LT(exp_moment(PolarFunctional(square(), P(p))).b.norm(), 1e-6);
    EXPECT_LT(exp_moment(PolarFunctional(disk(), P(p))).b.norm(), 1e-6);
  }
}

TEST(ExpMoment, VolumeRelation) {
  std::mt19937_64 rng(22);
  for (double p : {0.5, 1.0}) {
    const ConvexBody k = random_polygon(6, rng);
    const PolarFunctional pf(k, P(p));
    const double lhs = 2.0 * volume(k) * polar_volume(pf).value;
    EXPECT_NEAR(lhs, volume(k) * exp_moment(pf).V, 1e-6 * lhs);
    EXPECT_NEAR(exp_moment(pf).V, exp_volume_cartesian(pf).value, 1e-6 * lhs);
  }
}

TEST(ExpMoment, SquareCovarianceClosedForm) {
  // each coordinate has density proportional to t / sinh t; its second moment
  // is (int t^3 / sinh t) / (int t / sinh t) = (pi^4/4) / (pi^2/2) = pi^2 / 2.
  const ExpMoments m = exp_moment(PolarFunctional(square(), P(1)));
  EXPECT_NEAR(m.cov(0, 0), kPi * kPi / 2, 1e-7);
  EXPECT_NEAR(m.cov(1, 1), kPi * kPi / 2, 1e-7);
  EXPECT_NEAR(m.cov(0, 1), 0.0, 1e-8);
}

TEST(ExpMoment, BarycenterIsGradientOfLogVolume) {
  const ConvexBody k = translate(figure_triangle(), -v2(1.0 / 3, 4.0 / 3));
  const PolarFunctional pf(k, P(1));
  const Vec x = v2(0.05, -0.02);
  const ExpMoments m = exp_moment(pf.translated(x));
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i) {
    const Vec e = Vec::Unit(2, i) * h;
    const double fd = (std::log(exp_moment(pf.translated(x + e)).V) - std::log(exp_moment(pf.translated(x - e)).V)) / (2 * h);
    EXPECT_NEAR(m.b(i), fd, 1e-4);
  }
}

TEST(ExpMoment, CovarianceIsHessianOfLogVolume) {
  std::mt19937_64 rng(23);
  const ConvexBody k = random_polygon(5, rng);
  const PolarFunctional pf(k, P(2));
  const ExpMoments m = exp_moment(pf);
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i) {
    const Vec e = Vec::Unit(2, i) * h;
    const Vec fd = (exp_moment(pf.translated(e)).b - exp_moment(pf.translated(-e)).b) / (2 * h);
    EXPECT_NEAR(m.cov(0, i), fd(0), 1e-4 * m.cov.norm());
    EXPECT_NEAR(m.cov(1, i), fd(1), 1e-4 * m.cov.norm());
  }
}

TEST(ExpMoment, OneDimensionalSegment) {
  const PolarFunctional pf(ConvexBody::polytope({v1(-1), v1(1)}), P(1));
  const ExpMoments m = exp_moment(pf);
  EXPECT_NEAR(m.V, kPi * kPi / 2, 1e-9);
  EXPECT_NEAR(m.b(0), 0.0, 1e-12);
  EXPECT_NEAR(exp_volume_cartesian(pf).value, kPi * kPi / 2, 1e-9);
}

TEST(TransformCheck, Examples) {
  const Vec y = v2(0.3, -0.7);
  auto t = lp_polar_transform_check(square(), Mat::Identity(2, 2), P(1), y);
  EXPECT_EQ(t.lhs, t.rhs);
  const Mat rot = Eigen::Rotation2Dd(0.7).toRotationMatrix();
  t = lp_polar_transform_check(disk(), rot, P(1), y);
  EXPECT_NEAR(t.lhs, t.rhs, 1e-8);
  Mat d(2, 2);
  d << 2, 0, 0, 1;
  t = lp_polar_transform_check(square(), d, P(1), y);
  EXPECT_NEAR(t.lhs, t.rhs, 1e-6);
  t = lp_polar_transform_check(disk(), d, P(2), y);  // ellipse through the affine-image path
  EXPECT_NEAR(t.lhs, t.rhs, 1e-6);
}

TEST(TransformCheck, RandomGeneralLinear) {
  std::mt19937_64 rng(24);
  std::normal_distribution<double> g;
  const ConvexBody k = random_polygon(6, rng);
  for (int trial = 0; trial < 5; ++trial) {
    Mat a(2, 2);
    a << g(rng), g(rng), g(rng), g(rng);
    if (std::abs(a.determinant()) < 0.2) continue;
    const auto t = lp_polar_transform_check(k, a, P(0.5), v2(g(rng), g(rng)));
    EXPECT_NEAR(t.lhs, t.rhs, 1e-6 * t.rhs);
  }
}
