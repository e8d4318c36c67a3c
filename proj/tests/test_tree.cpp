#include <doctest.h>

#include <nlohmann/json.hpp>

#include "lowdeg/decision_tree.hpp"
#include "lowdeg/generators.hpp"
#include "lowdeg/packing.hpp"
#include "test_oracles.hpp"

using namespace lowdeg;

TEST_CASE("tree_eval basics") {
  const auto constant = DecisionTree::leaf(1.0);
  Rng rng(1);
  for (int rep = 0; rep < 4; ++rep)
    CHECK(tree_eval(constant, CubePoint::random(6, rng)) == doctest::Approx(1.0));

  const auto split = DecisionTree::internal(1, DecisionTree::leaf(-1.0),
                                            DecisionTree::leaf(1.0));
  CHECK(tree_eval(split, CubePoint::from_mask(3, 0b001)) == doctest::Approx(-1.0));
  CHECK(tree_eval(split, CubePoint::all_ones(3)) == doctest::Approx(1.0));

  // Variable out of range for the point's dimension.
  const auto deep = DecisionTree::internal(9, DecisionTree::leaf(0.0),
                                           DecisionTree::leaf(1.0));
  CHECK_THROWS_AS(tree_eval(deep, CubePoint::all_ones(3)), std::out_of_range);
}

TEST_CASE("sigma tree traces the lexicographically ordered bottom level") {
  // d=3, sigma={3,4,5,6}: the all-ones input follows the (+1,+1) path to
  // the largest sigma element and outputs x_6 = +1.
  const auto tree = sigma_tree({3, 4, 5, 6}, 3, 8);
  CHECK(tree_eval(tree, CubePoint::all_ones(8)) == doctest::Approx(1.0));
  // Path (-1,-1) reaches x_3; flipping coordinate 3 flips the output.
  const auto both_neg = CubePoint::from_mask(8, 0b011);
  CHECK(tree_eval(tree, both_neg) == doctest::Approx(1.0));
  CHECK(tree_eval(tree, both_neg.with_flipped(3)) == doctest::Approx(-1.0));
}

TEST_CASE("no repeated variable on any path") {
  CHECK_THROWS_AS(
      DecisionTree::internal(
          1, DecisionTree::internal(1, DecisionTree::leaf(0), DecisionTree::leaf(1)),
          DecisionTree::leaf(1)),
      std::invalid_argument);
}

TEST_CASE("random trees are boolean with degree at most d") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 10;
    const int d = 1 + static_cast<int>(seed % 3);
    const auto tree = random_tree(n, d, seed);
    CHECK(tree.depth() == d);
    const auto dense = tree.densify(n);
    CHECK(dense.is_boolean(0.0));
    CHECK(wht(dense).degree() <= d);
  }
}

TEST_CASE("tree spectrum agrees with full-cube wht") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto tree = random_tree(9, 3, seed);
    const auto via_relevant = tree.spectrum(9);
    const auto via_dense = wht(tree.densify(9));
    CHECK(via_relevant.term_count() == via_dense.term_count());
    for (const auto& [s, c] : via_dense.coeffs())
      CHECK(via_relevant.coeff(s) == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("tree json round trip") {
  const auto tree = random_tree(7, 3, 123);
  const auto j = tree.to_json();
  const auto back = DecisionTree::from_json(j);
  for (std::uint64_t mask = 0; mask < (1ULL << 7); ++mask) {
    const auto x = CubePoint::from_mask(7, mask);
    CHECK(tree.eval(x) == back.eval(x));
  }
  // Leaf-only tree.
  const auto leaf = DecisionTree::from_json(nlohmann::json{{"leaf", 0.25}});
  CHECK(tree_eval(leaf, CubePoint::all_ones(1)) == doctest::Approx(0.25));
}
