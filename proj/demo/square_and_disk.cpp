// Lp-support values, polar volumes and Mahler volumes of the square
// [-1,1]^2 and the unit disk for a few exponents.

#include <cstdio>

#include "lpsantalo/lpsantalo.hpp"

using namespace lpsantalo;

int main() {
  const ConvexBody square = ConvexBody::polytope({(Vec(2) << -1, -1).finished(), (Vec(2) << 1, -1).finished(),
                                                  (Vec(2) << 1, 1).finished(), (Vec(2) << -1, 1).finished()});
  const ConvexBody disk = ConvexBody::ball(Vec::Zero(2), 1.0);
  const Vec y = (Vec(2) << 1, 0).finished();

  std::printf("%-6s %-8s %14s %14s %14s %14s\n", "body", "p", "h_p(1,0)", "|K^o,p|", "M_p", "M_p(B)");
  for (const char* ps : {"0.5", "1", "2", "8", "inf"}) {
    const PExponent p = PExponent::parse(ps);
    const double ball = ball_reference(2, p).value;
    for (const auto& [name, body] : {std::pair{"square", square}, std::pair{"disk", disk}}) {
      const PolarFunctional pf(body, p);
      const Measured pv = polar_volume(pf);
      const Measured m = mahler_volume(pf);
      std::printf("%-6s %-8s %14.9f %14.9f %14.9f %14.9f\n", name, ps, pf.evaluator->h(y), pv.value, m.value, ball);
    }
  }

  // Off-centre translates: M_p grows, and is infinite once the origin leaves the interior.
  for (double x : {0.0, 0.5, 0.9, 1.0}) {
    const Measured m = mahler_volume(square, PExponent::finite(1.0), (Vec(2) << x, 0).finished());
    if (m.infinite)
      std::printf("M_1(square - (%.1f,0)) = inf\n", x);
    else
      std::printf("M_1(square - (%.1f,0)) = %.9f\n", x, m.value);
  }
  return 0;
}
