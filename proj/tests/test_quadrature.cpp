#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lpsantalo/lp_polar.hpp"
#include "lpsantalo/quadrature.hpp"
#include "lpsantalo/santalo.hpp"

using namespace lpsantalo;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

Simplex random_simplex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    Simplex s;
    for (int i = 0; i <= n; ++i) {
      Vec v(n);
      for (int j = 0; j < n; ++j) v(j) = g(rng);
      s.vertices.push_back(v);
    }
    if (s.volume() > 0.05) return s;
  }
}

// Recursive divided difference, fine for well-separated nodes.
double naive_dd(const std::vector<double>& z, int i, int j) {
  if (i == j) return std::exp(z[static_cast<std::size_t>(i)]);
  return (naive_dd(z, i + 1, j) - naive_dd(z, i, j - 1)) / (z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(i)]);
}

}  // namespace

TEST(SimplexIntegral, ClosedForms) {
  const Simplex seg{{v1(0), v1(1)}};
  EXPECT_NEAR(exp_integral_simplex(seg, v1(0)), 1.0, 1e-15);
  EXPECT_NEAR(exp_integral_simplex(seg, v1(1)), std::exp(1.0) - 1.0, 1e-12);
  const Simplex tri{{v2(0, 0), v2(1, 0), v2(0, 1)}};
  EXPECT_NEAR(exp_integral_simplex(tri, v2(1, 0)), std::exp(1.0) - 2.0, 1e-12);
  EXPECT_NEAR(exp_integral_simplex(tri, v2(0, 0)), 0.5, 1e-15);
}

TEST(SimplexIntegral, OneDimensionalClosedFormAcrossScales) {
  const Simplex seg{{v1(-0.3), v1(1.1)}};
  for (double y : {-40.0, -3.0, -1e-3, 1e-9, 1e-5, 0.7, 5.0, 60.0}) {
    const double expect = std::exp(-0.3 * y) * std::expm1(1.4 * y) / y;
    EXPECT_NEAR(exp_integral_simplex(seg, v1(y)), expect, 1e-13 * expect) << y;
  }
}

TEST(SimplexIntegral, ZeroDirectionGivesVolume) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 4; ++n) {
    const Simplex s = random_simplex(n, rng);
    EXPECT_NEAR(exp_integral_simplex(s, Vec::Zero(n)), s.volume(), 1e-12 * s.volume());
  }
}

TEST(SimplexIntegral, TranslationCovariance) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      Simplex s = random_simplex(n, rng);
      Vec y(n), c(n);
      for (int j = 0; j < n; ++j) y(j) = 2 * g(rng), c(j) = g(rng);
      const double base = exp_integral_simplex(s, y);
      for (auto& v : s.vertices) v += c;
      EXPECT_NEAR(exp_integral_simplex(s, y), std::exp(c.dot(y)) * base, 1e-10 * std::exp(c.dot(y)) * base);
    }
}

TEST(SimplexIntegral, PermutationSymmetry) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Simplex s = random_simplex(3, rng);
    Vec y(3);
    y << g(rng), g(rng), g(rng);
    if (trial % 2 == 0) {  // y orthogonal to an edge clusters two nodes
      const Vec e = s.vertices[1] - s.vertices[0];
      y = 3.0 * (y - y.dot(e) / e.squaredNorm() * e);
    }
    const double base = exp_integral_simplex(s, y);
    std::shuffle(s.vertices.begin(), s.vertices.end(), rng);
    EXPECT_NEAR(exp_integral_simplex(s, y), base, 1e-11 * base);
  }
}

TEST(SimplexIntegral, DegenerateThrows) {
  const Simplex flat{{v2(0, 0), v2(1, 1), v2(2, 2)}};
  try {
    exp_integral_simplex(flat, v2(1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateBody);
  }
}

TEST(SimplexIntegral, LargeArgumentsStayInLogSpace) {
  const Simplex tri{{v2(0, 0), v2(1, 0), v2(0, 1)}};
  const double l = log_exp_integral_simplex(tri, v2(2000, 0));
  // int_0^1 (1-x) e^{a x} dx = (e^a - 1 - a) / a^2
  EXPECT_NEAR(l, 2000 + std::log1p(-2001 * std::exp(-2000.0)) - 2 * std::log(2000.0), 1e-12 * 2000);
}

TEST(SimplexIntegral, AgreesWithMonteCarlo) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::exponential_distribution<double> ex(1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 2;
    const Simplex s = random_simplex(n, rng);
    Vec y = Vec::Random(n) * 1.5;
    const int m = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < m; ++i) {
      // Dirichlet(1,...,1) barycentric weights give uniform points.
      std::vector<double> w(static_cast<std::size_t>(n + 1));
      double tot = 0;
      for (auto& x : w) tot += (x = ex(rng));
      Vec p = Vec::Zero(n);
      for (int j = 0; j <= n; ++j) p += w[static_cast<std::size_t>(j)] / tot * s.vertices[static_cast<std::size_t>(j)];
      const double f = std::exp(p.dot(y));
      sum += f;
      sum2 += f * f;
    }
    const double mean = sum / m;
    const double se = std::sqrt((sum2 / m - mean * mean) / m) * s.volume();
    EXPECT_NEAR(exp_integral_simplex(s, y), mean * s.volume(), 4 * se);
  }
}

TEST(DividedDifferences, MatchesRecursionWhenSeparated) {
  const std::vector<double> z{-2.0, 0.5, 1.7, 3.1};
  const DividedDifferenceTable t(z);
  EXPECT_NEAR(t.value(), naive_dd(z, 0, 3), 1e-12 * naive_dd(z, 0, 3));
  EXPECT_NEAR(t.entry(1, 2), naive_dd(z, 1, 2), 1e-13 * naive_dd(z, 1, 2));
  EXPECT_NEAR(t.entry(2, 2), std::exp(1.7), 1e-14 * std::exp(1.7));
}

TEST(DividedDifferences, ConfluentLimit) {
  // exp[a,...,a] with k+1 copies is e^a / k!.
  const DividedDifferenceTable t(std::vector<double>{0.4, 0.4, 0.4, 0.4});
  EXPECT_NEAR(t.value(), std::exp(0.4) / 6.0, 1e-15);
  const DividedDifferenceTable near(std::vector<double>{0.4, 0.4 + 1e-9, 0.4 - 1e-9});
  EXPECT_NEAR(near.value(), std::exp(0.4) / 2.0, 1e-12);
}

TEST(DividedDifferences, PositiveAndSymmetric) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> z;
    for (int i = 0; i < 5; ++i) z.push_back(trial % 3 == 0 ? 0.3 + 1e-7 * g(rng) : 3 * g(rng));
    const DividedDifferenceTable a(z);
    std::shuffle(z.begin(), z.end(), rng);
    const DividedDifferenceTable b(z);
    EXPECT_NEAR(a.value(), b.value(), 1e-12 * a.value());
    for (int i = 0; i < a.size(); ++i)
      for (int j = i; j < a.size(); ++j) EXPECT_GT(a.entry(i, j), 0.0);
  }
}

TEST(SphereNodes, Examples) {
  QuadratureSpec spec;
  spec.sphere = SphereRule::uniform_angle(4);
  double sum = 0;
  for (const auto& nd : sphere_nodes(2, spec).nodes) sum += nd.weight;
  EXPECT_NEAR(sum, 2 * std::numbers::pi, 1e-14);

  const auto one = sphere_nodes(1, {}).nodes;
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0].theta(0) * one[1].theta(0), -1.0);
  EXPECT_EQ(one[0].weight, 1.0);
  EXPECT_EQ(one[1].weight, 1.0);

  spec.sphere = SphereRule::fibonacci(1000);
  sum = 0;
  for (const auto& nd : sphere_nodes(3, spec).nodes) sum += nd.weight;
  EXPECT_NEAR(sum, 4 * std::numbers::pi, 1e-6 * 4 * std::numbers::pi);
}

TEST(SphereNodes, GaussProductIntegratesPolynomialsExactly) {
  QuadratureSpec spec;
  spec.sphere = SphereRule::gauss_product(512);
  double area = 0, z2 = 0, xy2 = 0;
  for (const auto& nd : sphere_nodes(3, spec).nodes) {
    area += nd.weight;
    z2 += nd.weight * nd.theta(2) * nd.theta(2);
    xy2 += nd.weight * std::pow(nd.theta(0) * nd.theta(1), 2);
  }
  EXPECT_NEAR(area, 4 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(z2, 4 * std::numbers::pi / 3, 1e-12);
  EXPECT_NEAR(xy2, 4 * std::numbers::pi / 15, 1e-12);
}

TEST(SphereNodes, HighDimensionFallsBackToMonteCarlo) {
  QuadratureSpec spec;
  spec.mc_samples = 1000;
  const auto a = sphere_nodes(4, spec);
  const auto b = sphere_nodes(4, spec);
  EXPECT_TRUE(a.monte_carlo);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  double sum = 0;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    EXPECT_EQ(a.nodes[i].theta, b.nodes[i].theta);
    sum += a.nodes[i].weight;
  }
  EXPECT_NEAR(sum, sphere_area(4), 1e-12);
}

TEST(IntegrateSphere, HemispheresAndSmoothIntegrand) {
  const Vec u = v2(0.6, 0.8);
  auto f = [&](const Vec& t) {
    SmallVec v(2);
    v << 1.0, std::exp(t(0));
    return v;
  };
  const SphereIntegral s = integrate_sphere(2, f, QuadratureSpec{}, u);
  EXPECT_NEAR(s.plus(0), std::numbers::pi, 1e-12);
  EXPECT_NEAR(s.minus(0), std::numbers::pi, 1e-12);
  // int_0^{2pi} e^{cos phi} dphi = 2 pi I_0(1)
  EXPECT_NEAR(s.total()(1), 2 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0), 1e-11);

  QuadratureSpec g3;
  g3.sphere = SphereRule::gauss_product(0);
  auto f3 = [](const Vec& t) {
    SmallVec v(1);
    v << t(2) * t(2);
    return v;
  };
  const SphereIntegral s3 = integrate_sphere(3, f3, g3, Vec::Unit(3, 0));
  EXPECT_NEAR(s3.plus(0), 2 * std::numbers::pi / 3, 1e-11);
  EXPECT_NEAR(s3.minus(0), 2 * std::numbers::pi / 3, 1e-11);
}

TEST(RadialIntegral, GammaExamples) {
  auto f = [](double r) { return std::exp(-r); };
  EXPECT_NEAR(radial_integral(f, 2), 1.0, 1e-12);
  EXPECT_NEAR(radial_integral(f, 3), 2.0, 1e-11);
  double err = 0;
  EXPECT_NEAR(radial_integral([](double r) { return std::exp(-3 * r); }, 1, {}, 3.0, &err), 1.0 / 3, 1e-13);
  EXPECT_GE(err, 0.0);
}

TEST(RadialIntegral, SegmentProfileAgainstTrapezoid) {
  const ConvexBody seg = ConvexBody::polytope({v1(-1), v1(1)});
  const LpSupportEvaluator ev(seg, PExponent::finite(1.0));
  const double value = radial_integral([&](double r) { return std::exp(-ev.h(v1(r))); }, 1);
  // Trapezoid on r / sinh r over [0, 60]; the tail beyond is below 1e-24.
  const int m = 600000;
  const double h = 60.0 / m;
  double trap = 0.5 * (1.0 + 60.0 / std::sinh(60.0));
  for (int i = 1; i < m; ++i) {
    const double r = i * h;
    trap += r / std::sinh(r);
  }
  trap *= h;
  EXPECT_NEAR(value, trap, 1e-8);
  EXPECT_NEAR(value, std::numbers::pi * std::numbers::pi / 4, 1e-10);
}

TEST(RadialIntegral, ErrorEstimateBracketsOracle) {
  // exponents a r + b r^2 and log-cosh style profiles with known integrals
  struct Case {
    std::function<double(double)> phi;
    int q;
    double exact;
  };
  const double pi = std::numbers::pi;
  const std::vector<Case> cases{
      {[](double r) { return r * r; }, 1, std::sqrt(pi) / 2},
      {[](double r) { return 2 * r; }, 3, 2.0 / 8},
      {[](double r) { return std::log(std::cosh(r)); }, 1, pi / 2},
      {[](double r) { return 0.5 * r * r; }, 2, 1.0},
  };
  for (const auto& c : cases) {
    const RadialResult r = radial_moments(c.phi, c.q, 1, 1.0, RadialRule{});
    EXPECT_LE(std::abs(r.value(0) - c.exact), r.error(0) + 1e-15 * c.exact);
    EXPECT_NEAR(r.value(0), c.exact, 1e-10 * c.exact);
  }
}

TEST(RadialIntegral, NonDecayingThrows) {
  try {
    radial_integral([](double) { return 1.0; }, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonIntegrable);
  }
}

TEST(QuadratureSpec, JsonRoundTripAndHash) {
  QuadratureSpec s;
  s.sphere = SphereRule::fibonacci(321);
  s.radial.rel_tol = 1e-9;
  const QuadratureSpec back = quadrature_spec_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  EXPECT_EQ(spec_hash(back), spec_hash(s));
  EXPECT_EQ(spec_hash(s).size(), 16u);
  EXPECT_NE(spec_hash(s), spec_hash(QuadratureSpec{}));
  EXPECT_THROW(sphere_rule_from_string("lebedev"), Error);
}

TEST(MonteCarlo, SeededDeterminism) {
  std::mt19937_64 rng(9);
  const ConvexBody k = random_hull(4, 10, rng);
  QuadratureSpec spec;
  spec.mc_samples = 500;
  const PolarFunctional a(k, PExponent::finite(1.0), spec);
  const PolarFunctional b(k, PExponent::finite(1.0), spec);
  Vec x = Vec::Zero(4);
  for (const auto& v : k.as_polytope().vertices) x += v / static_cast<double>(k.as_polytope().vertices.size());
  const double va = polar_volume(a.translated(x), spec).value;
  const double vb = polar_volume(b.translated(x), spec).value;
  EXPECT_EQ(va, vb);
}
