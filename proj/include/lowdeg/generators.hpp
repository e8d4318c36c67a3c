#ifndef LOWDEG_GENERATORS_HPP
#define LOWDEG_GENERATORS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "lowdeg/decision_tree.hpp"
#include "lowdeg/function.hpp"

namespace lowdeg {

// Seeded description of a random target instance. Embedded in experiment
// records so any run can be reproduced from its report alone.
struct GenSpec {
  std::string kind;  // "tree" | "sparse_poly" | "walsh" | "junta"
  int n = 0;
  int d = 0;
  int sparsity = 1;
  int junta_k = 0;
  double junta_eta = 0.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static GenSpec from_json(const nlohmann::json& j);
};

// Complete depth-d tree; variables on each root-to-leaf path are drawn
// uniformly without replacement, leaves are uniform +-1.
DecisionTree random_tree(int n, int d, std::uint64_t seed);

// `sparsity` distinct uniform subsets of cardinality <= d; coefficients
// uniform in [-1,1], then jointly divided by max(1, sum |c|) so the
// function range stays within [-1,1].
SparsePoly random_bounded_poly(int n, int d, int sparsity, std::uint64_t seed);

// (1-sqrt(eta)) * (bounded poly on a random k-subset sigma) + sqrt(eta) * w_T
// for a random T not contained in sigma with |T| <= d. Off-sigma Fourier
// mass is exactly eta.
SparsePoly random_junta(int n, int k, int d, double eta, int sparsity,
                        std::uint64_t seed);

// Same draw with the instance structure exposed (class-membership checks
// need sigma and the off-sigma term).
struct JuntaInstance {
  SparsePoly poly;
  std::vector<int> sigma;
  std::optional<SubsetMask> off_term;  // absent when eta == 0
};
JuntaInstance random_junta_instance(int n, int k, int d, double eta,
                                    int sparsity, std::uint64_t seed);

// A single Walsh character w_S with S uniform among subsets of size <= d.
SparsePoly random_walsh(int n, int d, std::uint64_t seed);

// A generated target: always carries an exact sparse expansion (that is what
// error measurement uses); tree targets also keep their tree form.
struct Target {
  GenSpec spec;
  SparsePoly poly;
  std::optional<DecisionTree> tree;
};

Target generate(const GenSpec& spec);

}  // namespace lowdeg

#endif  // LOWDEG_GENERATORS_HPP
