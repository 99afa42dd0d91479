// Steiner symmetrization along e_1, e_2 with recentring at the Lp-Santalo
// point; prints the Mahler volume after every step.
//
// usage: demo_steiner_pipeline [body.json] [p]

#include <cstdio>
#include <string>

#include "lpsantalo/lpsantalo.hpp"

using namespace lpsantalo;

int main(int argc, char** argv) {
  try {
    const ConvexBody k = argc > 1 ? load_body(argv[1])
                                  : ConvexBody::polytope({(Vec(2) << -1, 1).finished(), (Vec(2) << 2, 1).finished(),
                                                          (Vec(2) << 0, 2).finished()});
    const PExponent p = PExponent::parse(argc > 2 ? argv[2] : "1");
    const int n = k.dim();

    const PipelineResult res = steiner_pipeline(k, p);
    std::printf("p = %s, M_p(B) = %.10f\n", p.str().c_str(), ball_reference(n, p).value);
    std::printf("K_0: M_p = %.10f (+- %.1e)\n", res.trace[0].value, res.trace[0].error);
    for (const auto& s : res.steps) {
      std::printf("axis %d: s_p(sigma K) = [", s.axis + 1);
      for (int i = 0; i < n; ++i) std::printf("%s%.3e", i ? ", " : "", s.santalo_of_symmetral(i));
      std::printf("], t = %+.6f, split = %.6f, M_p(L - t u) = %.10f\n", s.separation_t, s.separation_g,
                  s.mahler_separated.value);
      std::printf("K_%d: M_p = %.10f (+- %.1e)\n", s.axis + 1, s.mahler_after.value, s.mahler_after.error);
    }
    std::printf("final body:\n%s\n", body_to_json(res.final_body).dump(2).c_str());
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
