#ifndef LOWDEG_DECISION_TREE_HPP
#define LOWDEG_DECISION_TREE_HPP

#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lowdeg/bits.hpp"
#include "lowdeg/function.hpp"

namespace lowdeg {

// Rooted binary tree computing a function on {-1,1}^n: internal nodes are
// labeled by 1-based variables, leaves by reals. No variable repeats on a
// root-to-leaf path (checked on construction of internal nodes).
class DecisionTree {
 public:
  struct Node {
    int var = 0;  // 0 for leaves
    double leaf = 0.0;
    std::unique_ptr<Node> neg;
    std::unique_ptr<Node> pos;
    bool is_leaf() const { return !neg; }
  };

  static DecisionTree leaf(double value);
  static DecisionTree internal(int var, DecisionTree neg_child,
                               DecisionTree pos_child);

  // Follows the branch selected by x_var at each internal node.
  double eval(const CubePoint& x) const;

  int depth() const;
  // Distinct variables appearing in the tree, sorted ascending.
  std::vector<int> variables() const;
  int max_var() const;

  DenseFunction densify(int n) const;

  // Walsh expansion computed on the tree's own variables and lifted to
  // dimension n; exact for trees touching <= kMaxDenseDim variables.
  SparsePoly spectrum(int n) const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

  const Node& root() const { return *root_; }

 private:
  DecisionTree() = default;
  std::unique_ptr<Node> root_;
};

double tree_eval(const DecisionTree& tree, const CubePoint& x);

}  // namespace lowdeg

#endif  // LOWDEG_DECISION_TREE_HPP
