#ifndef LOWDEG_RANDOM_LEARNERS_HPP
#define LOWDEG_RANDOM_LEARNERS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lowdeg/function.hpp"
#include "lowdeg/oracle.hpp"

namespace lowdeg {

// Configuration of the thresholded empirical-spectrum learner.
struct ThresholdConfig {
  int n = 0;
  int d = 0;
  double m = 1.0;      // bound on the size of the concentration family
  double eps = 0.1;    // accuracy budget epsilon in (0,1)
  double delta = 0.1;  // confidence delta in (0,1)
  std::optional<double> b_override;
  // When set, coefficients are estimated only on this family.
  std::optional<std::vector<SubsetMask>> family;

  // Default threshold sqrt(eps / (9 m)), the largest value allowed by the
  // error decomposition, which minimizes the sample count.
  double b() const;
  void validate() const;
};

struct LearnReport {
  std::uint64_t queries_used = 0;
  double b = 0.0;
  std::vector<SubsetMask> selected;  // |S| <= d and |alpha_S| >= 2b
  SparsePoly hypothesis;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// ceil((2/b^2) * ln((2/delta) * sum_{r<=d} C(n,r))), natural log.
std::uint64_t required_samples(double b, int n, int d, double delta);

// Family-size preset for degree-d functions depending on k variables:
// sum_{r<=min(d,k)} C(k,r). (The other preset, for bounded degree-d
// targets, is bh_subset_bound in the bounds header.)
double junta_m_preset(int k, int d);

// ceil((2 n^d / eps) * ln(2 n^d / delta)), natural log.
std::uint64_t lmn_samples(int n, int d, double eps, double delta);

// The i.i.d. uniform sample sequence used by every random-example learner
// here: sample j consumes ceil(n/64) words of the seeded stream.
std::vector<CubePoint> draw_samples(int n, std::uint64_t count,
                                    std::uint64_t seed);

// Empirical Walsh coefficients alpha_S = (1/Q) sum_j f(X_j) w_S(X_j) for
// every |S| <= d, all from the same sample sequence. The oracle counter
// grows by exactly |samples|.
std::map<SubsetMask, double> estimate_spectrum(
    QueryOracle& oracle, const std::vector<CubePoint>& samples, int d);

// Same, restricted to an explicit family.
std::map<SubsetMask, double> estimate_spectrum(
    QueryOracle& oracle, const std::vector<CubePoint>& samples,
    const std::vector<SubsetMask>& family);

// { S : |alpha_S| >= 2b }; the boundary is included.
std::vector<SubsetMask> threshold_select(
    const std::map<SubsetMask, double>& alpha, double b);

// Thresholded learner: draws required_samples(...) points with the given
// seed, estimates the low-degree spectrum, keeps coefficients past 2b.
LearnReport learn_sparse(QueryOracle& oracle, const ThresholdConfig& cfg,
                         std::uint64_t seed);

// Same algorithm with an explicit sample count (used by budget searches).
LearnReport learn_sparse_with_samples(QueryOracle& oracle,
                                      const ThresholdConfig& cfg,
                                      std::uint64_t seed,
                                      std::uint64_t sample_count);

// Classical low-degree learner: keeps every estimated coefficient of
// cardinality <= d, no thresholding.
LearnReport learn_lowdegree_lmn(QueryOracle& oracle, int n, int d, double eps,
                                double delta, std::uint64_t seed);

}  // namespace lowdeg

#endif  // LOWDEG_RANDOM_LEARNERS_HPP
