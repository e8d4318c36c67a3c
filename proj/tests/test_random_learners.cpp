#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "lowdeg/combinatorics.hpp"
#include "lowdeg/generators.hpp"
#include "lowdeg/random_learners.hpp"
#include "spectrum_scan.hpp"
#include "test_oracles.hpp"

using namespace lowdeg;

namespace {

QueryOracle poly_oracle(const SparsePoly& p) {
  return QueryOracle(p.n(),
                     [p](const CubePoint& x) { return p.evaluate(x); });
}

std::vector<CubePoint> full_cube(int n) {
  std::vector<CubePoint> points;
  points.reserve(1ULL << n);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask)
    points.push_back(CubePoint::from_mask(n, mask));
  return points;
}

}  // namespace

TEST_CASE("required_samples frozen values") {
  CHECK(required_samples(0.1, 10, 2, 0.1) == 1405);
  // Large b drives the count down to the ceiling floor of 1.
  CHECK(required_samples(100.0, 10, 0, 0.9) == 1);
  // (2/b^2) ln((2/delta) * 1) = ln(e) = 1 at b = sqrt(2), delta = 2/e.
  CHECK(required_samples(std::sqrt(2.0), 10, 0, 2.0 / std::exp(1.0)) == 1);
  CHECK_THROWS_AS(required_samples(0.0, 10, 2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(required_samples(0.1, 10, 2, 1.5), std::invalid_argument);
}

TEST_CASE("lmn_samples frozen value") {
  CHECK(lmn_samples(10, 1, 0.5, 0.5) == 148);
  CHECK_THROWS_AS(lmn_samples(1000, 30, 0.5, 0.5), std::overflow_error);
}

TEST_CASE("estimate_spectrum exact cases") {
  SUBCASE("constant function: alpha_empty is exactly 1") {
    SparsePoly one(6);
    one.set_coeff(SubsetMask::empty(6), 1.0);
    auto oracle = poly_oracle(one);
    const auto samples = draw_samples(6, 37, 5);
    const auto alpha = estimate_spectrum(oracle, samples, 2);
    CHECK(alpha.at(SubsetMask::empty(6)) == 1.0);
    CHECK(oracle.queries() == 37);
  }

  SUBCASE("full-cube samples recover a character exactly") {
    SparsePoly w1(5);
    w1.set_coeff(SubsetMask::of(5, {1}), 1.0);
    auto oracle = poly_oracle(w1);
    const auto alpha = estimate_spectrum(oracle, full_cube(5), 2);
    for (const auto& [s, a] : alpha) {
      if (s == SubsetMask::of(5, {1}))
        CHECK(a == 1.0);
      else
        CHECK(a == 0.0);
    }
  }

  SUBCASE("two-point hand example") {
    SparsePoly w12(4);
    w12.set_coeff(SubsetMask::of(4, {1, 2}), 1.0);
    auto oracle = poly_oracle(w12);
    const std::vector<CubePoint> samples{CubePoint::all_ones(4),
                                         CubePoint::from_mask(4, 0b0011)};
    const auto alpha = estimate_spectrum(oracle, samples, 2);
    CHECK(alpha.at(SubsetMask::of(4, {1, 2})) == doctest::Approx(1.0));
  }
}

TEST_CASE("threshold_select") {
  std::map<SubsetMask, double> alpha;
  alpha[SubsetMask::empty(4)] = 0.05;
  alpha[SubsetMask::of(4, {1})] = -0.12;
  CHECK(threshold_select(alpha, 0.1).empty());

  alpha.clear();
  alpha[SubsetMask::empty(4)] = 1.0;
  auto picked = threshold_select(alpha, 0.1);
  REQUIRE(picked.size() == 1);
  CHECK(picked[0] == SubsetMask::empty(4));

  // Boundary: |alpha| == 2b is selected.
  alpha.clear();
  alpha[SubsetMask::of(4, {2})] = 0.2;
  CHECK(threshold_select(alpha, 0.1).size() == 1);
  alpha[SubsetMask::of(4, {2})] = -0.2;
  CHECK(threshold_select(alpha, 0.1).size() == 1);
}

TEST_CASE("learn_sparse on the zero function returns the zero polynomial") {
  QueryOracle oracle(8, [](const CubePoint&) { return 0.0; });
  ThresholdConfig cfg;
  cfg.n = 8;
  cfg.d = 2;
  cfg.m = 1.0;
  for (std::uint64_t seed : {0ULL, 7ULL, 123ULL}) {
    const auto report = learn_sparse(oracle, cfg, seed);
    CHECK(report.hypothesis.empty());
    CHECK(report.selected.empty());
  }
}

TEST_CASE("learn_sparse event check on a single character") {
  // Target w_S with m = 1. On the event G_b the squared error is at most
  // 9 b^2 m <= eps; G_b holds on most seeds and is itself checkable.
  const int n = 16, d = 2;
  SparsePoly target(n);
  target.set_coeff(SubsetMask::of(n, {3, 7}), 1.0);
  ThresholdConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.m = 1.0;
  cfg.eps = 0.1;
  cfg.delta = 0.1;
  const double b = cfg.b();

  int gb_holds = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto oracle = poly_oracle(target);
    const auto report = learn_sparse(oracle, cfg, seed);
    CHECK(report.queries_used ==
          required_samples(b, n, d, cfg.delta));
    CHECK(oracle.queries() == report.queries_used);
    CHECK(report.hypothesis.degree() <= d);
    for (const auto& s : report.selected) CHECK(s.cardinality() <= d);

    // Recompute the full empirical spectrum from the same samples.
    const auto samples = draw_samples(n, report.queries_used, seed);
    auto oracle2 = poly_oracle(target);
    const auto alpha = estimate_spectrum(oracle2, samples, d);
    double max_dev = 0.0;
    for (const auto& [s, a] : alpha)
      max_dev = std::max(max_dev, std::abs(a - target.coeff(s)));
    const double sq_error = (report.hypothesis - target).parseval_mass();
    if (max_dev <= b) {
      ++gb_holds;
      CHECK(sq_error <= 9.0 * b * b * cfg.m);
      CHECK(sq_error <= cfg.eps);
      // With G_b, the single large coefficient must have been selected.
      CHECK(report.hypothesis.coeff(SubsetMask::of(n, {3, 7})) != 0.0);
    }
    // Selection must equal thresholding of the recomputed spectrum.
    CHECK(threshold_select(alpha, b).size() == report.selected.size());
  }
  CHECK(gb_holds >= 15);  // the event has probability >= 1 - delta
}

TEST_CASE("estimator is unbiased: mean of single-sample alpha approaches "
          "the coefficient") {
  const int n = 6, d = 2;
  const auto target = test::majority3_poly();
  SparsePoly lifted(n);
  for (const auto& [s, c] : target.coeffs())
    lifted.set_coeff(SubsetMask::of_vars(n, s.vars()), c);

  const SubsetMask probe = SubsetMask::of(n, {1});
  const double truth = lifted.coeff(probe);
  const int runs = 10000;
  double sum = 0.0;
  for (int i = 0; i < runs; ++i) {
    auto oracle = poly_oracle(lifted);
    const auto samples = draw_samples(n, 1, 1000 + i);
    const auto alpha = estimate_spectrum(oracle, samples, d);
    sum += alpha.at(probe);
  }
  const double mean = sum / runs;
  // Single-sample alpha for this target has variance <= 1.
  const double standard_error = 1.0 / std::sqrt(static_cast<double>(runs));
  CHECK(std::abs(mean - truth) <= 3.0 * standard_error);
}

TEST_CASE("estimate_spectrum on an explicit family") {
  const int n = 9;
  SparsePoly target(n);
  target.set_coeff(SubsetMask::of(n, {1, 7}), 0.75);
  target.set_coeff(SubsetMask::empty(n), -0.25);
  auto oracle = poly_oracle(target);
  const auto samples = draw_samples(n, 400, 12);
  const std::vector<SubsetMask> family{SubsetMask::empty(n),
                                       SubsetMask::of(n, {1, 7}),
                                       SubsetMask::of(n, {3})};
  const auto alpha = estimate_spectrum(oracle, samples, family);
  CHECK(alpha.size() == 3);
  CHECK(oracle.queries() == 400);

  // Values agree with the unrestricted estimator on the same samples.
  auto oracle2 = poly_oracle(target);
  const auto full = estimate_spectrum(oracle2, samples, 2);
  for (const auto& [s, a] : alpha) CHECK(a == full.at(s));
}

TEST_CASE("learner recovers a character beyond one mask word") {
  const int n = 70;
  SparsePoly target(n);
  target.set_coeff(SubsetMask::of(n, {3, 68}), 1.0);
  auto oracle = poly_oracle(target);
  ThresholdConfig cfg;
  cfg.n = n;
  cfg.d = 2;
  cfg.m = 1.0;
  const auto report = learn_sparse(oracle, cfg, 17);
  CHECK((report.hypothesis - target).parseval_mass() <= cfg.eps);
  CHECK(report.hypothesis.coeff(SubsetMask::of(n, {3, 68})) != 0.0);
}

TEST_CASE("family-restricted estimation") {
  const int n = 12, d = 2;
  SparsePoly target(n);
  target.set_coeff(SubsetMask::of(n, {2}), 0.6);
  target.set_coeff(SubsetMask::of(n, {5, 9}), 0.4);

  ThresholdConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.m = 2.0;
  cfg.family = std::vector<SubsetMask>{SubsetMask::of(n, {2}),
                                       SubsetMask::of(n, {5, 9}),
                                       SubsetMask::of(n, {1})};
  auto oracle = poly_oracle(target);
  const auto report = learn_sparse(oracle, cfg, 3);
  for (const auto& s : report.selected) {
    bool in_family = false;
    for (const auto& f : *cfg.family) in_family |= (f == s);
    CHECK(in_family);
  }
}

TEST_CASE("lmn learner") {
  SUBCASE("constant target at d = 0 is recovered exactly") {
    QueryOracle oracle(10, [](const CubePoint&) { return 0.25; });
    const auto report = learn_lowdegree_lmn(oracle, 10, 0, 0.5, 0.5, 9);
    CHECK(report.hypothesis.coeff(SubsetMask::empty(10)) ==
          doctest::Approx(0.25));
    CHECK(report.hypothesis.term_count() == 1);
  }
  SUBCASE("sample count and no thresholding") {
    SparsePoly target(10);
    target.set_coeff(SubsetMask::of(10, {4}), 1.0);
    auto oracle = poly_oracle(target);
    const auto report = learn_lowdegree_lmn(oracle, 10, 1, 0.5, 0.5, 2);
    CHECK(report.queries_used == 148);
    CHECK(oracle.queries() == 148);
    // Small noisy coefficients are kept, so the term count is typically
    // larger than the target's.
    CHECK(report.hypothesis.coeff(SubsetMask::of(10, {4})) ==
          doctest::Approx(1.0).epsilon(0.2));
  }
}

TEST_CASE("packed scan agrees with the dense scan") {
  const int n = 40, d = 2;
  SparsePoly target(n);
  target.set_coeff(SubsetMask::of(n, {11, 29}), 1.0);
  auto oracle = poly_oracle(target);
  const auto samples = draw_samples(n, 301, 77);
  std::vector<double> values;
  for (const auto& x : samples) values.push_back(oracle(x));
  REQUIRE(internal::all_pm_one(values));

  for (double threshold : {0.0, 0.05, 0.21082}) {
    const auto packed =
        internal::scan_select_packed(n, d, samples, values, threshold);
    REQUIRE(!packed.overflow);
    const auto alpha = internal::scan_dense(n, d, samples, values);
    const auto subsets = subsets_up_to_degree(n, d);
    std::vector<std::pair<SubsetMask, double>> dense;
    for (std::size_t i = 0; i < subsets.size(); ++i)
      if (std::abs(alpha[i]) >= threshold) dense.emplace_back(subsets[i], alpha[i]);
    REQUIRE(packed.survivors.size() == dense.size());
    for (std::size_t i = 0; i < packed.survivors.size(); ++i) {
      CHECK(packed.survivors[i].first == dense[i].first);
      CHECK(packed.survivors[i].second == dense[i].second);  // bitwise equal
    }
  }

  // The cap reports overflow with a partial survivor list.
  const auto capped =
      internal::scan_select_packed(n, d, samples, values, 0.0, 10);
  CHECK(capped.overflow);
  CHECK(capped.survivors.size() == 11);

  // Same agreement with multi-word points.
  const int n2 = 70;
  SparsePoly target2(n2);
  target2.set_coeff(SubsetMask::of(n2, {5, 66}), 1.0);
  auto oracle2 = poly_oracle(target2);
  const auto samples2 = draw_samples(n2, 200, 3);
  std::vector<double> values2;
  for (const auto& x : samples2) values2.push_back(oracle2(x));
  const auto packed2 =
      internal::scan_select_packed(n2, 2, samples2, values2, 0.1);
  const auto alpha2 = internal::scan_dense(n2, 2, samples2, values2);
  const auto subsets2 = subsets_up_to_degree(n2, 2);
  std::vector<std::pair<SubsetMask, double>> dense2;
  for (std::size_t i = 0; i < subsets2.size(); ++i)
    if (std::abs(alpha2[i]) >= 0.1) dense2.emplace_back(subsets2[i], alpha2[i]);
  REQUIRE(packed2.survivors.size() == dense2.size());
  for (std::size_t i = 0; i < packed2.survivors.size(); ++i) {
    CHECK(packed2.survivors[i].first == dense2[i].first);
    CHECK(packed2.survivors[i].second == dense2[i].second);
  }
}

TEST_CASE("draw_samples is deterministic and shared by the learner") {
  const auto a = draw_samples(70, 50, 123);
  const auto b = draw_samples(70, 50, 123);
  CHECK(a == b);
  const auto c = draw_samples(70, 50, 124);
  CHECK(a != c);
}

TEST_CASE("learn report serializes") {
  SparsePoly target(8);
  target.set_coeff(SubsetMask::of(8, {2, 6}), 1.0);
  auto oracle = poly_oracle(target);
  ThresholdConfig cfg;
  cfg.n = 8;
  cfg.d = 2;
  cfg.m = 1.0;
  const auto report = learn_sparse(oracle, cfg, 5);
  const auto j = report.to_json();
  CHECK(j.at("queries_used") == report.queries_used);
  CHECK(j.at("b").get<double>() == report.b);
  CHECK(j.at("seed") == 5);
  CHECK(j.at("selected").size() == report.selected.size());
  CHECK(SparsePoly::from_json(j.at("hypothesis")) == report.hypothesis);
}

TEST_CASE("theory budget ratio stays mild across the dimension grid") {
  // For d = 2 at fixed eps, delta, m the count grows like ln n.
  const double b = std::sqrt(0.1 / 9.0);
  const auto q6 = required_samples(b, 1 << 6, 2, 0.1);
  const auto q14 = required_samples(b, 1 << 14, 2, 0.1);
  CHECK(static_cast<double>(q14) / static_cast<double>(q6) <=
        (14.0 / 6.0) * 1.25);

  // And it is affine in ln of the subset count, up to the ceiling.
  for (int n : {1 << 6, 1 << 10, 1 << 14}) {
    const double binsum = static_cast<double>(binomial_sum(n, 2));
    const double affine = (2.0 / (b * b)) * (std::log(binsum) + std::log(20.0));
    const double actual = static_cast<double>(required_samples(b, n, 2, 0.1));
    CHECK(actual >= affine - 1e-9);
    CHECK(actual <= affine + 1.0);
  }
}
