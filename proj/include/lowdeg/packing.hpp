#ifndef LOWDEG_PACKING_HPP
#define LOWDEG_PACKING_HPP

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lowdeg/decision_tree.hpp"
#include "lowdeg/function.hpp"

namespace lowdeg {

// The randomized small-intersection construction fell below its target
// size for too many rounds.
struct ConstructionFailed : std::runtime_error {
  ConstructionFailed(int retries, std::uint64_t target)
      : std::runtime_error("small_intersection_family: below target " +
                           std::to_string(target) + " after " +
                           std::to_string(retries) + " retries"),
        retries(retries) {}
  int retries;
};

// Family of k-subsets of {1,...,m} with all pairwise intersections
// < (1-eps) k.
struct SubsetFamily {
  int m = 0;
  int k = 0;
  double eps = 0.0;
  std::vector<std::vector<int>> members;  // sorted k-subsets

  std::size_t size() const { return members.size(); }
};

// floor((2k)^{-k/2} * m^{(1-eps) k/2}), at least 1.
std::uint64_t small_family_target(int m, int k, double eps);

// Draws i.i.d. uniform k-subsets (slightly more than the target), deletes
// one endpoint of every violating pair, retries from scratch with fresh
// randomness if the survivors fall below target. Capped at 64 retries.
SubsetFamily small_intersection_family(int m, int k, double eps,
                                       std::uint64_t seed);

// Complete depth-d tree: levels 0..d-2 query x_1..x_{d-1}; the 2^{d-1}
// bottom nodes query the sigma variables assigned in lexicographic order of
// their root paths (all-(-1) path gets the smallest); each leaf outputs the
// value of the variable just queried. sigma must be a sorted 2^{d-1}-subset
// of {d,...,n}.
DecisionTree sigma_tree(const std::vector<int>& sigma, int d, int n);

// Squared L2 distance between two sigma trees of the same depth:
// |{l : i_l != j_l}| / 2^{d-2}, position-wise over the sorted subsets.
double tree_pair_sq_distance(const std::vector<int>& sigma_r,
                             const std::vector<int>& sigma_s, int d);

struct PackingCertificate {
  SubsetFamily family;
  int d = 0;
  int n = 0;
  std::uint64_t size_bound = 0;
  double min_sq_distance = 0.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static PackingCertificate from_json(const nlohmann::json& j);
};

// The full packing construction over ground set {d,...,n}: builds the
// family, maps members through sigma_tree, verifies the pairwise squared
// distances are >= 2 eps.
PackingCertificate packing_family(int n, int d, double eps, std::uint64_t seed);

// True iff all pairwise L2 distances exceed tau; also returns the minimum
// pairwise distance (infinity for fewer than two functions).
std::pair<bool, double> verify_packing(const std::vector<SparsePoly>& funcs,
                                       double tau);

// Size of a greedily-built maximal eps-separated subset (a lower bound on
// the packing number); with exhaustive=true, the exact packing number by
// branch and bound over the separation graph (tiny lists only).
int greedy_packing_number(const std::vector<SparsePoly>& funcs, double eps,
                          bool exhaustive = false);

// Exact covering number of the finite list by brute force (tiny lists).
int exact_covering_number(const std::vector<SparsePoly>& funcs, double eps);

struct EntropyBounds {
  double lower = 0.0;     // (1-eps) 2^{d-2} log2 n - (d+1) 2^{d-2}
  double upper = 0.0;     // 2^{C d} / eps^4 * ln n + kappa
  double walsh_lb = 0.0;  // log2 sum_{j<=d} C(n,j)
};

// The packing/covering formulas with caller-supplied constants; the upper
// bound's C and kappa(d,eps) are not pinned anywhere, so they are explicit
// parameters.
EntropyBounds entropy_bounds(int n, int d, double eps, double c_param,
                             double kappa_param);

}  // namespace lowdeg

#endif  // LOWDEG_PACKING_HPP
