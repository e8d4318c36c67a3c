#include <doctest.h>

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "lowdeg/combinatorics.hpp"
#include "lowdeg/generators.hpp"
#include "lowdeg/random_learners.hpp"

using namespace lowdeg;

TEST_CASE("random_tree at n = d = 1 covers the four unary functions") {
  std::set<std::pair<double, double>> tables;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto tree = random_tree(1, 1, seed);
    tables.insert({tree.eval(CubePoint::all_ones(1)),
                   tree.eval(CubePoint::from_mask(1, 1))});
  }
  CHECK(tables.size() == 4);  // +-1 constants and +-x1
}

TEST_CASE("random_bounded_poly stays bounded and on-degree") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int n = 4 + static_cast<int>(seed % 9);
    const int d = 1 + static_cast<int>(seed % 3);
    const auto p = random_bounded_poly(n, d, 4, seed);
    CHECK(p.degree() <= d);
    const auto dense = densify(p);
    CHECK(dense.is_bounded(1e-12));
  }
  // Single-term polynomials keep |c| <= 1.
  const auto single = random_bounded_poly(8, 2, 1, 3);
  CHECK(single.term_count() == 1);
  for (const auto& [s, c] : single.coeffs()) CHECK(std::abs(c) <= 1.0);

  CHECK_THROWS_AS(random_bounded_poly(3, 1, 100, 0), std::invalid_argument);
}

TEST_CASE("random_junta structure") {
  SUBCASE("eta = 0 is a pure junta on sigma") {
    const auto inst = random_junta_instance(20, 4, 2, 0.0, 3, 7);
    CHECK(!inst.off_term.has_value());
    const auto sigma_mask = SubsetMask::of_vars(20, inst.sigma);
    for (const auto& [s, c] : inst.poly.coeffs())
      CHECK(s.is_subset_of(sigma_mask));
  }
  SUBCASE("off-sigma mass is exactly eta") {
    const double eta = 0.09;
    const auto inst = random_junta_instance(20, 4, 2, eta, 3, 11);
    REQUIRE(inst.off_term.has_value());
    const auto sigma_mask = SubsetMask::of_vars(20, inst.sigma);
    CHECK(!inst.off_term->is_subset_of(sigma_mask));

    std::vector<SubsetMask> sigma_family;
    for (const auto& [s, c] : inst.poly.coeffs())
      if (s.is_subset_of(sigma_mask)) sigma_family.push_back(s);
    CHECK(inst.poly.concentration_residual(sigma_family) ==
          doctest::Approx(eta).epsilon(1e-12));
    CHECK(inst.poly.degree() <= 2);
  }
  SUBCASE("range stays within [-1, 1]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto p = random_junta(10, 3, 2, 0.25, 3, seed);
      CHECK(densify(p).is_bounded(1e-12));
    }
  }
  SUBCASE("k = n with positive eta has no off-sigma subset") {
    CHECK_THROWS_AS(random_junta(5, 5, 2, 0.1, 3, 0), std::invalid_argument);
  }
}

TEST_CASE("junta learning within the adapted family budget") {
  // m = sum_{r<=min(d,k)} C(k,r) = 11 at k=4, d=2; the guarantee is error
  // <= 2 eta + eps with probability >= 1 - delta.
  const int n = 64, k = 4, d = 2;
  const double eta = 0.04, eps = 0.1, delta = 0.1;
  const double m = junta_m_preset(k, d);

  const int trials = 60;
  int failures = 0;
  for (int i = 0; i < trials; ++i) {
    const auto target = random_junta(n, k, d, eta, 3, 5000 + i);
    QueryOracle oracle(n,
                       [&](const CubePoint& x) { return target.evaluate(x); });
    ThresholdConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.m = m;
    cfg.eps = eps;
    cfg.delta = delta;
    const auto report = learn_sparse(oracle, cfg, 5000 + i);
    const double sq_error = (report.hypothesis - target).parseval_mass();
    if (sq_error > 2.0 * eta + eps) ++failures;
  }
  CHECK(failures <= static_cast<int>(delta * trials));
}

TEST_CASE("generation is deterministic per spec") {
  GenSpec spec;
  spec.kind = "junta";
  spec.n = 24;
  spec.d = 2;
  spec.sparsity = 3;
  spec.junta_k = 5;
  spec.junta_eta = 0.1;
  spec.seed = 99;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.poly == b.poly);

  const auto j = spec.to_json();
  const auto back = GenSpec::from_json(j);
  CHECK(generate(back).poly == a.poly);

  GenSpec walsh;
  walsh.kind = "walsh";
  walsh.n = 100;
  walsh.d = 2;
  walsh.seed = 3;
  const auto w = generate(walsh);
  CHECK(w.poly.term_count() == 1);
  CHECK(w.poly.degree() <= 2);

  GenSpec tree;
  tree.kind = "tree";
  tree.n = 12;
  tree.d = 3;
  tree.seed = 5;
  const auto t = generate(tree);
  REQUIRE(t.tree.has_value());
  CHECK((t.poly - wht(t.tree->densify(12))).parseval_mass() ==
        doctest::Approx(0.0).epsilon(1e-20));
}
