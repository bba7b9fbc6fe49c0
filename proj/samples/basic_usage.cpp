// Library walkthrough: absolute summability of the alternating harmonic series
// under a weighted mean, then the canned experiment on a shortened prefix.

#include <cstdio>

#include "summatrix/summatrix.hpp"

using namespace summatrix;

int main() {
  const std::size_t N = 4000;
  const auto a = SequencePrefix::generate(
      [](Index n) { return n == 0 ? 0.0 : (n % 2 ? 1.0 : -1.0) / static_cast<double>(n); }, N);
  const auto w = build_weight_system(SequencePrefix::generate(named_generator("harmonic"), N));

  for (double k : {1.0, 2.0}) {
    const auto trace = riesz_index(a, w, k);
    const auto v = assess_boundedness(trace);
    std::printf("k=%g  S_N=%.6g  tail=%.3g  exponent=%.3f  %s\n", k,
                trace.cumulative.data().back(), v.tail_increment, v.fitted_growth_exponent,
                v.bounded_estimate ? "bounded" : "not bounded");
  }

  // The same weights through the generic matrix path.
  const auto m = WeightedMeanMatrix(w, N);
  for (const auto& r : check_matrix_conditions(m, w)) {
    std::printf("%-30s %s\n", r.id.c_str(), to_string(r.verdict));
  }

  ExperimentConfig cfg = scenario("bor-weighted-mean");
  cfg.N = 2000;
  const auto res = run_theorem_experiment(cfg);
  std::printf("\n%s", summary_table(res).c_str());
  return res.exit_code;
}
