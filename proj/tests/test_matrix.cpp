#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace summatrix;
using Catch::Approx;

TEST_CASE("normal matrices validate their rows") {
  CHECK_THROWS_AS(NormalMatrix::from_rows({{1.0}, {1.0}}), InvalidInput);
  CHECK_THROWS_AS(NormalMatrix::from_rows({{1.0}, {1.0, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(NormalMatrix::from_rows({}), InvalidInput);
  CHECK_THROWS_AS(NormalMatrix::from_rows({{std::nan("")}}), InvalidInput);
  const auto m = NormalMatrix::from_rows({{1.0}, {0.25, 0.75}});
  CHECK(m.dim() == 2);
  CHECK(m.entry(1, 0) == 0.25);
  CHECK(m.rows() == std::vector<std::vector<double>>{{1.0}, {0.25, 0.75}});
}

TEST_CASE("apply on a small matrix") {
  const auto m = NormalMatrix::from_rows({{1.0}, {0.25, 0.75}});
  const auto r = apply(m, ts::seq({1.0, 2.0}));
  CHECK(r.An[1] == 1.75);
  CHECK(r.dAn[1] == 0.75);
  CHECK(r.dAn.base() == IndexBase::one);
  CHECK_THROWS_AS(apply(m, ts::seq({1.0})), InvalidInput);
}

TEST_CASE("identity matrix") {
  const IdentityMatrix I{6};
  const auto s = ts::seq({3, 1, 4, 1, 5, 9});
  CHECK(apply(I, s).An == s);

  const auto assoc = associate(I);
  for (Index n = 0; n < 6; ++n) {
    for (Index v = 0; v <= n; ++v) {
      CHECK(assoc.abar.entry(n, v) == 1.0);
      CHECK(assoc.ahat.entry(n, v) == (v == n ? 1.0 : 0.0));
    }
  }
  const auto sf = apply_series_form(I, s);
  for (Index n = 1; n < 6; ++n) CHECK(sf.dAn[n] == s[n]);
}

TEST_CASE("associate matches the tail-sum definition on random matrices") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = ts::random_rows(rng, 1 + trial * 2);
    const auto brute = ts::brute_associate(rows);
    for (auto mode : {Summation::plain, Summation::compensated}) {
      const auto assoc = associate(NormalMatrix::from_rows(rows), mode);
      for (std::size_t n = 0; n < rows.size(); ++n) {
        for (std::size_t v = 0; v <= n; ++v) {
          CHECK(ts::close_abs(assoc.abar.entry(n, v), brute.abar[n][v], 1e-13));
          CHECK(ts::close_abs(assoc.ahat.entry(n, v), brute.ahat[n][v], 1e-13));
        }
        // ā_nn = a_nn
        CHECK(assoc.abar.entry(n, n) == rows[n][n]);
      }
    }
  }
}

TEST_CASE("series form agrees with the partial-sum form") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t N = 2 + trial * 2;
    const auto m = NormalMatrix::from_rows(ts::random_rows(rng, N));
    const auto a = ts::seq(ts::uniform(rng, N, -1.0, 1.0));
    const auto direct = apply(m, partial_sums(a));
    const auto series = apply_series_form(m, a);
    const auto assoc = associate(m);
    const auto via_assoc = apply_series_form(assoc, a);
    for (Index n = 0; n < static_cast<Index>(N); ++n) {
      CHECK(ts::close_abs(series.An[n], direct.An[n], 1e-10 * (1 + std::abs(direct.An[n]))));
      CHECK(ts::close_abs(via_assoc.An[n], direct.An[n], 1e-10 * (1 + std::abs(direct.An[n]))));
      if (n >= 1) {
        // Σ_v â_nv a_v
        double hat = 0.0;
        for (Index v = 0; v <= n; ++v) hat += assoc.ahat.entry(n, v) * a[v];
        CHECK(ts::close_abs(hat, direct.dAn[n], 1e-10 * (1 + std::abs(direct.dAn[n]))));
        CHECK(ts::close_abs(series.dAn[n], direct.dAn[n], 1e-10 * (1 + std::abs(direct.dAn[n]))));
      }
    }
  }
}

TEST_CASE("single-term series picks up the first column of Ā") {
  std::mt19937_64 rng(29);
  const auto rows = ts::random_rows(rng, 12);
  const auto m = NormalMatrix::from_rows(rows);
  std::vector<double> a(12, 0.0);
  a[0] = 2.5;
  const auto r = apply_series_form(m, ts::seq(a));
  const auto brute = ts::brute_associate(rows);
  for (Index n = 0; n < 12; ++n) CHECK(r.An[n] == Approx(brute.abar[n][0] * 2.5).epsilon(1e-14));
}

TEST_CASE("weighted-mean matrix for unit weights") {
  const auto w = ts::ones(60);
  const auto m = weighted_mean_matrix(w, 60);
  const auto assoc = associate(m);
  for (Index n = 0; n < 60; ++n) {
    double row = 0.0;
    for (Index v = 0; v <= n; ++v) {
      const double nd = static_cast<double>(n);
      row += m.entry(n, v);
      CHECK(m.entry(n, v) == Approx(1.0 / (nd + 1)).epsilon(1e-15));
      CHECK(assoc.abar.entry(n, v) == Approx((nd + 1 - v) / (nd + 1)).epsilon(1e-13));
      if (n >= 1 && v + 1 <= n) {
        // differencing tail sums near 1 costs relative accuracy on entries of size 1/n^2
        CHECK(ts::close_abs(assoc.ahat.entry(n, v + 1), (v + 1) / (nd * (nd + 1)), 1e-14));
      }
    }
    CHECK(row == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(assoc.abar.entry(n, 0) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(weighted_mean_matrix(w, 61), InvalidInput);
}

TEST_CASE("weighted-mean associate matches the closed forms") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = build_weight_system(ts::seq(ts::uniform(rng, 200, 0.1, 2.0)));
    const auto generic = associate(weighted_mean_matrix(w, 200));
    const auto lazy = associate(WeightedMeanMatrix(w, 200));
    for (Index n = 0; n < 200; ++n) {
      for (Index v = 0; v <= n; ++v) {
        const double Pv1 = v == 0 ? 0.0 : w.P[v - 1];
        const double abar = (w.P[n] - Pv1) / w.P[n];
        CHECK(ts::close_abs(generic.abar.entry(n, v), abar, 1e-12));
        CHECK(ts::close_abs(lazy.abar.entry(n, v), abar, 1e-12));
      }
      for (Index v = 0; v + 1 <= n; ++v) {
        const double ahat = w.p[n] * w.P[v] / (w.P[n] * w.P[n - 1]);
        CHECK(ts::close_abs(generic.ahat.entry(n, v + 1), ahat, 1e-12));
        CHECK(ts::close_abs(lazy.ahat.entry(n, v + 1), ahat, 1e-12));
      }
    }
  }
}

TEST_CASE("weighted-mean transform equals the riesz mean") {
  std::mt19937_64 rng(37);
  const auto w = build_weight_system(ts::seq(ts::uniform(rng, 300, 0.1, 2.0)));
  const auto a = ts::seq(ts::uniform(rng, 300, -1.0, 1.0));
  const auto s = partial_sums(a);
  const auto wm = riesz_mean(s, w);
  const auto dense = apply(weighted_mean_matrix(w, 300), s);
  const auto fast = apply_series_form(WeightedMeanMatrix(w, 300), a);
  for (Index n = 0; n < 300; ++n) {
    CHECK(ts::close_abs(dense.An[n], wm[n], 1e-12 * (1 + std::abs(wm[n]))));
    CHECK(ts::close_abs(fast.An[n], wm[n], 1e-12 * (1 + std::abs(wm[n]))));
    if (n >= 1) {
      // closed form: p_n/(P_n P_{n-1}) Σ_{v=1..n} P_{v-1} a_v
      double acc = 0.0;
      for (Index v = 1; v <= n; ++v) acc += w.P[v - 1] * a[v];
      const double closed = w.p[n] / (w.P[n] * w.P[n - 1]) * acc;
      CHECK(ts::close_abs(fast.dAn[n], closed, 1e-12 * (1 + std::abs(closed))));
      CHECK(ts::close_abs(dense.dAn[n], closed, 1e-10 * (1 + std::abs(closed))));
    }
  }
}

TEST_CASE("geometric weights keep Â accurate on the lazy path") {
  const auto w = build_weight_system(SequencePrefix::generate(named_generator("geometric:1.5"), 150));
  for_each_associated_row(WeightedMeanMatrix(w, 150), [&](const AssociatedRow& row) {
    for (Index v = 1; v <= row.n; ++v) {
      const double exact = w.p[row.n] * w.P[v - 1] / (w.P[row.n] * w.P[row.n - 1]);
      CHECK(ts::close_rel(row.ahat[static_cast<std::size_t>(v)], exact, 1e-13));
    }
  });
}

TEST_CASE("cesaro (C,1) matrix matches the unit weighted mean") {
  const auto w = ts::ones(40);
  std::mt19937_64 rng(41);
  const auto a = ts::seq(ts::uniform(rng, 40, -1.0, 1.0));
  const auto c = apply_series_form(CesaroOneMatrix{40}, a);
  const auto wm = apply_series_form(WeightedMeanMatrix(w, 40), a);
  for (Index n = 1; n < 40; ++n) CHECK(c.dAn[n] == Approx(wm.dAn[n]).margin(1e-14));
}

TEST_CASE("streaming rows reproduce the packed result") {
  std::mt19937_64 rng(43);
  const auto m = NormalMatrix::from_rows(ts::random_rows(rng, 30));
  const auto assoc = associate(m);
  Index seen = 0;
  for_each_associated_row(m, [&](const AssociatedRow& row) {
    CHECK(row.n == seen++);
    CHECK(row.a_prev.size() == static_cast<std::size_t>(row.n));
    for (Index v = 0; v <= row.n; ++v) {
      CHECK(row.ahat[static_cast<std::size_t>(v)] == assoc.ahat.entry(row.n, v));
    }
  });
  CHECK(seen == 30);
}
