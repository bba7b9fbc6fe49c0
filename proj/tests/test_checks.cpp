#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace summatrix;
using Catch::Approx;

namespace {

FactorProfile zero_profile(std::size_t N) {
  const SequencePrefix z(std::vector<double>(N, 0.0), IndexBase::one);
  return make_factor_profile(z, z, z);
}

const CheckReport& find(const std::vector<CheckReport>& rs, const std::string& id) {
  for (const auto& r : rs) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("no report " + id);
}

}  // namespace

TEST_CASE("stabilization reports") {
  const auto flat = stabilization_report("flat", SequencePrefix(std::vector<double>(100, 2.0)));
  CHECK(flat.passed());
  CHECK(*flat.bounding_constant == 2.0);
  CHECK(flat.thresholds.at("stabilization_pass") == 1.05);

  std::vector<double> lin(100);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = static_cast<double>(i + 1);
  const auto grow = stabilization_report("grow", SequencePrefix(lin));
  CHECK(grow.failed());
  REQUIRE(grow.first_violation);
  CHECK(*grow.first_violation == 78);  // first index past 1.05 × sup of the first 75

  std::vector<double> slow(lin);
  for (auto& x : slow) x = std::log(x + 1e4);
  CHECK(stabilization_report("slow", SequencePrefix(slow)).verdict == Verdict::pass);

  std::vector<double> mid(100, 1.0);
  mid.back() = 1.1;
  CHECK(stabilization_report("mid", SequencePrefix(mid)).verdict == Verdict::inconclusive);
  CHECK_THROWS_AS(stabilization_report("x", SequencePrefix({1.0, 2.0})), InvalidInput);
}

TEST_CASE("P_n = O(n p_n)") {
  const auto unit = check_Pn_O_npn(ts::ones(1000));
  CHECK(unit.passed());
  CHECK(*unit.bounding_constant == Approx(2.0));

  const auto decay = check_Pn_O_npn(build_weight_system(
      SequencePrefix::generate(named_generator("geometric:0.5"), 200)));
  CHECK(decay.failed());
  CHECK(decay.first_violation.has_value());

  const auto linear = check_Pn_O_npn(build_weight_system(
      SequencePrefix::generate([](Index n) { return static_cast<double>(n + 1); }, 1000)));
  CHECK(linear.passed());
  CHECK_THROWS_AS(check_Pn_O_npn(ts::ones(10)), InvalidInput);
}

TEST_CASE("factor hypotheses: zero profile passes everything") {
  const auto rs = check_factor_hypotheses(zero_profile(100), ts::ones(101));
  REQUIRE(rs.size() == 5);
  for (const auto& r : rs) CHECK(r.passed());
}

TEST_CASE("factor hypotheses: canonical profile at N = 10^4") {
  const auto w = ts::ones(10003);
  const auto fp = canonical_profile(w, 10000);
  const auto rs = check_factor_hypotheses(fp, w);
  for (const auto& r : rs) {
    INFO(r.id);
    CHECK(r.passed());
  }
  // the clauses re-evaluated directly
  for (Index n = 1; n < 10000; ++n) {
    CHECK(std::abs(fp.lambda[n] - fp.lambda[n + 1]) <= fp.companion[n]);
    CHECK(fp.companion[n] - fp.companion[n + 1] >= -fp.delta[n]);
  }
}

TEST_CASE("factor hypotheses: constructed |Δλ_n| > |A_n| violation") {
  const std::size_t N = 64;
  std::vector<double> lambda(N), comp(N), delta(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double n = static_cast<double>(i + 1);
    lambda[i] = 1.0 / (n * n);
    comp[i] = 2.0 / (n * n * n);
  }
  lambda[20] += 0.01;  // jump between n = 20 and n = 21
  const auto rs = check_factor_hypotheses(
      make_factor_profile(SequencePrefix(lambda, IndexBase::one), SequencePrefix(comp, IndexBase::one),
                          SequencePrefix(delta, IndexBase::one)),
      ts::ones(N + 1));
  const auto& d = find(rs, "factor_lambda_difference");
  CHECK(d.failed());
  REQUIRE(d.first_violation);
  CHECK(*d.first_violation == 20);
}

TEST_CASE("t_n condition") {
  const auto w = ts::ones(4000);
  const auto zero = check_tn_condition(ts::seq(std::vector<double>(4000, 0.0)), w, 1.0);
  CHECK(zero.passed());
  CHECK(*zero.bounding_constant == 0.0);
  CHECK(zero.thresholds.at("k") == 1.0);

  const auto alt = check_tn_condition(
      SequencePrefix::generate(named_generator("alternating"), 4000), w, 1.0);
  CHECK(alt.passed());
  CHECK(*alt.bounding_constant < 5.0);

  const auto lin = check_tn_condition(
      SequencePrefix::generate([](Index n) { return static_cast<double>(n); }, 4000), w, 1.0);
  CHECK(lin.failed());
}

TEST_CASE("matrix conditions: unit weighted mean") {
  const auto w = ts::ones(2000);
  const auto rs = check_matrix_conditions(weighted_mean_matrix(w, 2000), w);
  REQUIRE(rs.size() == 4);
  CHECK(find(rs, "matrix_abar_n0_unit").passed());
  CHECK(find(rs, "matrix_column_nonincreasing").passed());
  const auto& diag = find(rs, "matrix_diagonal_O_pn_Pn");
  CHECK(diag.passed());
  CHECK(*diag.bounding_constant <= 1.0 + 1e-12);
  const auto& hat = find(rs, "matrix_ahat_O_v_dbar");
  CHECK(hat.passed());
  // ratio (v+1)/(n(n+1)) / (v/(n(n+1))) = (v+1)/v, largest at v = 1
  CHECK(*hat.bounding_constant == Approx(2.0).epsilon(1e-9));
  for (const auto& r : rs) {
    bool positivity = false;
    for (const auto& n : r.notes) positivity |= n.find("positivity convention") != std::string::npos;
    CHECK(positivity);
  }
}

TEST_CASE("matrix conditions: identity and violations") {
  const auto w = ts::ones(20);
  const auto id = check_matrix_conditions(IdentityMatrix{20}, w);
  CHECK(find(id, "matrix_abar_n0_unit").passed());
  // Δ̄a_{nv} = 0 off the diagonal and â_{n,v+1} = 0 below it: vacuous
  CHECK(find(id, "matrix_ahat_O_v_dbar").verdict != Verdict::fail);

  auto rows = weighted_mean_matrix(w, 20).rows();
  rows[1][0] = 1.5;  // a_10 > a_00
  const auto bad = check_matrix_conditions(NormalMatrix::from_rows(rows), w);
  const auto& col = find(bad, "matrix_column_nonincreasing");
  CHECK(col.failed());
  REQUIRE(col.first_violation);
  CHECK(*col.first_violation == 1);
  CHECK(*col.violation_column == 0);
  CHECK(find(bad, "matrix_abar_n0_unit").failed());

  rows = weighted_mean_matrix(w, 20).rows();
  rows[5][2] = -0.1;
  CHECK_THROWS_AS(check_matrix_conditions(NormalMatrix::from_rows(rows), w), DomainError);
  CHECK_THROWS_AS(check_matrix_conditions(IdentityMatrix{4}, w), InvalidInput);
}

TEST_CASE("matrix conditions: streaming and lazy paths agree with the dense matrix") {
  std::mt19937_64 rng(91);
  const auto w = build_weight_system(ts::seq(ts::uniform(rng, 300, 0.1, 2.0)));
  const auto dense = check_matrix_conditions(weighted_mean_matrix(w, 300), w);
  const auto lazy = check_matrix_conditions(WeightedMeanMatrix(w, 300), w);
  for (std::size_t i = 0; i < dense.size(); ++i) {
    CHECK(dense[i].verdict == lazy[i].verdict);
    if (dense[i].bounding_constant) {
      CHECK(*dense[i].bounding_constant == Approx(*lazy[i].bounding_constant).epsilon(1e-9).margin(1e-12));
    }
  }
}

TEST_CASE("lemma checks") {
  const auto zero = check_lemma3(zero_profile(100), ts::ones(101));
  REQUIRE(zero.size() == 3);
  for (const auto& r : zero) {
    CHECK(r.passed());
    CHECK(*r.bounding_constant == 0.0);
  }

  // λ_n = 1 with X_n growing linearly
  const auto w = build_weight_system(SequencePrefix::generate(named_generator("geometric:1.01"), 5001));
  const SequencePrefix one(std::vector<double>(5000, 1.0), IndexBase::one);
  const SequencePrefix cushion = SequencePrefix::generate(
      [&](Index n) { return 1.0 / (static_cast<double>(n) * n * w.X[n]); }, 5000, IndexBase::one);
  const auto rs = check_lemma3(make_factor_profile(one, cushion, cushion), w);
  const auto& first = find(rs, "lemma_lambda_X_bounded");
  CHECK(first.failed());
  CHECK(first.first_violation.has_value());
}

TEST_CASE("fail verdicts keep their violation under a longer prefix") {
  const auto short_w = build_weight_system(
      SequencePrefix::generate(named_generator("geometric:0.5"), 100));
  const auto long_w = build_weight_system(
      SequencePrefix::generate(named_generator("geometric:0.5"), 400));
  std::vector<double> lambda(399), comp(399), delta(399, 0.0);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    lambda[i] = 1.0 / static_cast<double>(i + 1);
    comp[i] = 0.5 / static_cast<double>((i + 1) * (i + 2));  // too small: |Δλ| = 1/(n(n+1))
  }
  auto pointwise = [&](std::size_t N) {
    auto cut = [&](const std::vector<double>& v) {
      return SequencePrefix(std::vector<double>(v.begin(), v.begin() + N), IndexBase::one);
    };
    const auto& w = N < 200 ? short_w : long_w;
    return find(check_factor_hypotheses(make_factor_profile(cut(lambda), cut(comp), cut(delta)), w),
                "factor_lambda_difference");
  };
  const auto a = pointwise(99);
  const auto b = pointwise(399);
  CHECK(a.failed());
  CHECK(b.failed());
  CHECK(*a.first_violation == *b.first_violation);
}

TEST_CASE("implication harness") {
  CheckReport pass{.id = "h", .verdict = Verdict::pass};
  CheckReport fail{.id = "c", .verdict = Verdict::fail};
  CheckReport unsure{.id = "u", .verdict = Verdict::inconclusive};
  CHECK_FALSE(implication_holds({pass}, {fail}));
  CHECK(implication_holds({pass}, {pass, unsure}));
  CHECK(implication_holds({fail}, {fail}));
  CHECK(implication_holds({unsure}, {fail}));
}

TEST_CASE("checkers are deterministic") {
  const auto w = ts::ones(3003);
  const auto fp = canonical_profile(w, 3000);
  const auto a = check_factor_hypotheses(fp, w);
  const auto b = check_factor_hypotheses(fp, w);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].verdict == b[i].verdict);
    CHECK(a[i].bounding_constant == b[i].bounding_constant);
    CHECK(a[i].thresholds == b[i].thresholds);
  }
}
