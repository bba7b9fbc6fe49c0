#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace summatrix;
using Catch::Approx;

TEST_CASE("cesaro coefficients") {
  CHECK(cesaro_coefficient(1.0, 3) == Approx(4.0));
  CHECK(cesaro_coefficient(0.0, 5) == 1.0);
  CHECK(cesaro_coefficient(0.37, 0) == 1.0);
  CHECK(cesaro_coefficient(2.0, -1) == 0.0);
  CHECK_THROWS_AS(cesaro_coefficient(-1.0, 2), DomainError);
  CHECK_THROWS_AS(cesaro_coefficient(-3.0, 0), DomainError);
}

TEST_CASE("cesaro coefficients match the product formula") {
  for (double alpha : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    for (int n = 0; n <= 50; ++n) {
      // numerator and factorial accumulated separately, then divided
      double num = 1.0, fact = 1.0;
      for (int i = 1; i <= n; ++i) {
        num *= alpha + i;
        fact *= i;
      }
      const double c = cesaro_coefficient(alpha, n);
      CHECK(ts::close_rel(c, num / fact, 1e-10));
      CHECK(c > 0.0);
    }
  }
}

TEST_CASE("cesaro coefficients stay finite past factorial overflow") {
  const double c = cesaro_coefficient(0.5, 100000);
  CHECK(std::isfinite(c));
  // A_n^α ~ n^α / Γ(α+1)
  CHECK(c / std::sqrt(100000.0) == Approx(1.0 / std::tgamma(1.5)).epsilon(1e-4));
}

TEST_CASE("cesaro means of the unit series") {
  const auto m = cesaro_means(ts::seq(std::vector<double>(40, 1.0)), 1.0);
  for (Index n = 1; n < 40; ++n) CHECK(m.t[n] == Approx(n / 2.0));
  CHECK(m.t.base() == IndexBase::one);
  CHECK(m.u.base() == IndexBase::zero);

  const auto brute = ts::brute_cesaro(std::vector<double>(40, 1.0), 1.0);
  for (Index n = 0; n < 40; ++n) CHECK(ts::close_rel(m.u[n], brute.u[n], 1e-12));
}

TEST_CASE("single-term series") {
  const auto m = cesaro_means(ts::seq({2.5}), 1.0);
  CHECK(m.u[0] == 2.5);
  CHECK(m.t.empty());
}

TEST_CASE("cesaro means agree with the double-sum definition") {
  std::mt19937_64 rng(42);
  for (double alpha : {-0.5, 0.5, 1.0, 2.0, 3.5}) {
    const auto a = ts::uniform(rng, 60, -1.0, 1.0);
    const auto m = cesaro_means(ts::seq(a), alpha);
    const auto brute = ts::brute_cesaro(a, alpha);
    for (Index n = 0; n < 60; ++n) {
      CHECK(ts::close_abs(m.u[n], brute.u[n], 1e-12 * (1.0 + std::abs(brute.u[n]))));
      if (n >= 1) CHECK(ts::close_abs(m.t[n], brute.t[n], 1e-11 * (1.0 + std::abs(brute.t[n]))));
    }
  }
}

TEST_CASE("n(u_n - u_{n-1}) = t_n for random series") {
  std::mt19937_64 rng(5);
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto m = cesaro_means(ts::seq(ts::uniform(rng, 200, -1.0, 1.0)), alpha);
      for (Index n = 1; n < 200; ++n) {
        const double lhs = static_cast<double>(n) * (m.u[n] - m.u[n - 1]);
        // scale: the size of the operands whose difference forms lhs
        const double scale = std::max(std::abs(m.t[n]),
                                      n * std::max(std::abs(m.u[n]), std::abs(m.u[n - 1])));
        CHECK(std::abs(lhs - m.t[n]) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("cesaro means reject bad input") {
  CHECK_THROWS_AS(cesaro_means(SequencePrefix{}, 1.0), InvalidInput);
  CHECK_THROWS_AS(cesaro_means(ts::seq({1.0}, IndexBase::one), 1.0), InvalidInput);
  CHECK_THROWS_AS(cesaro_means(ts::seq({1.0, 2.0}), -1.0), DomainError);
}

TEST_CASE("riesz means") {
  const auto w = ts::ones(4);
  CHECK(riesz_mean(ts::seq({0, 1, 2, 3}), w).data() == std::vector<double>{0, 0.5, 1, 1.5});
  CHECK(riesz_mean(ts::seq({7.0}), w).data() == std::vector<double>{7.0});
  CHECK_THROWS_AS(riesz_mean(ts::seq({1, 2, 3, 4, 5}), w), InvalidInput);
}

TEST_CASE("unit weights turn the riesz mean into the (C,1) mean") {
  std::mt19937_64 rng(9);
  const auto a = ts::seq(ts::uniform(rng, 500, -1.0, 1.0));
  const auto wm = riesz_mean(partial_sums(a), ts::ones(500));
  const auto c1 = cesaro_means(a, 1.0);
  for (Index n = 0; n < 500; ++n) {
    CHECK(ts::close_abs(wm[n], c1.u[n], 1e-12 * (1.0 + std::abs(c1.u[n]))));
  }
}
