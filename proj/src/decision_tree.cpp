#include "lowdeg/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lowdeg {

namespace {

std::unique_ptr<DecisionTree::Node> clone(const DecisionTree::Node& node) {
  auto out = std::make_unique<DecisionTree::Node>();
  out->var = node.var;
  out->leaf = node.leaf;
  if (!node.is_leaf()) {
    out->neg = clone(*node.neg);
    out->pos = clone(*node.pos);
  }
  return out;
}

void check_no_repeat(const DecisionTree::Node& node, std::set<int>& path) {
  if (node.is_leaf()) return;
  if (!path.insert(node.var).second)
    throw std::invalid_argument("DecisionTree: variable repeats on a path");
  check_no_repeat(*node.neg, path);
  check_no_repeat(*node.pos, path);
  path.erase(node.var);
}

int node_depth(const DecisionTree::Node& node) {
  if (node.is_leaf()) return 0;
  return 1 + std::max(node_depth(*node.neg), node_depth(*node.pos));
}

void collect_vars(const DecisionTree::Node& node, std::set<int>& vars) {
  if (node.is_leaf()) return;
  vars.insert(node.var);
  collect_vars(*node.neg, vars);
  collect_vars(*node.pos, vars);
}

double eval_node(const DecisionTree::Node& node, const CubePoint& x) {
  const DecisionTree::Node* cur = &node;
  while (!cur->is_leaf()) {
    if (cur->var > x.n())
      throw std::out_of_range("DecisionTree: variable label out of range");
    cur = (x.coord(cur->var) < 0) ? cur->neg.get() : cur->pos.get();
  }
  return cur->leaf;
}

nlohmann::json node_to_json(const DecisionTree::Node& node) {
  if (node.is_leaf()) return {{"leaf", node.leaf}};
  return {{"var", node.var},
          {"neg", node_to_json(*node.neg)},
          {"pos", node_to_json(*node.pos)}};
}

std::unique_ptr<DecisionTree::Node> node_from_json(const nlohmann::json& j) {
  auto node = std::make_unique<DecisionTree::Node>();
  if (j.contains("leaf")) {
    node->leaf = j.at("leaf").get<double>();
    return node;
  }
  node->var = j.at("var").get<int>();
  if (node->var < 1) throw std::invalid_argument("DecisionTree: bad variable");
  node->neg = node_from_json(j.at("neg"));
  node->pos = node_from_json(j.at("pos"));
  return node;
}

}  // namespace

DecisionTree DecisionTree::leaf(double value) {
  DecisionTree t;
  t.root_ = std::make_unique<Node>();
  t.root_->leaf = value;
  return t;
}

DecisionTree DecisionTree::internal(int var, DecisionTree neg_child,
                                    DecisionTree pos_child) {
  if (var < 1) throw std::invalid_argument("DecisionTree: bad variable index");
  DecisionTree t;
  t.root_ = std::make_unique<Node>();
  t.root_->var = var;
  t.root_->neg = std::move(neg_child.root_);
  t.root_->pos = std::move(pos_child.root_);
  std::set<int> path;
  check_no_repeat(*t.root_, path);
  return t;
}

double DecisionTree::eval(const CubePoint& x) const { return eval_node(*root_, x); }

int DecisionTree::depth() const { return node_depth(*root_); }

std::vector<int> DecisionTree::variables() const {
  std::set<int> vars;
  collect_vars(*root_, vars);
  return {vars.begin(), vars.end()};
}

int DecisionTree::max_var() const {
  const auto vars = variables();
  return vars.empty() ? 0 : vars.back();
}

DenseFunction DecisionTree::densify(int n) const {
  if (max_var() > n)
    throw std::invalid_argument("DecisionTree: variable label exceeds dimension");
  std::vector<double> table(1ULL << n);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask)
    table[mask] = eval(CubePoint::from_mask(n, mask));
  return DenseFunction(n, std::move(table));
}

SparsePoly DecisionTree::spectrum(int n) const {
  const auto vars = variables();
  if (!vars.empty() && vars.back() > n)
    throw std::invalid_argument("DecisionTree: variable label exceeds dimension");
  const int k = static_cast<int>(vars.size());
  if (k > DenseFunction::kMaxDenseDim)
    throw std::invalid_argument("DecisionTree: too many variables to expand");

  // Evaluate on the cube of the tree's own variables, transform there, then
  // relabel each subset through the variable list.
  std::vector<double> table(1ULL << k);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    Bits bits(n);
    for (int i = 0; i < k; ++i)
      if ((mask >> i) & 1) bits.set(vars[i] - 1);
    table[mask] = eval(CubePoint(bits));
  }
  wht_in_place(table);
  const double norm = 1.0 / static_cast<double>(table.size());

  SparsePoly p(n);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    const double c = table[mask] * norm;
    if (std::abs(c) < SparsePoly::kCoeffEps) continue;
    SubsetMask s(n);
    for (int i = 0; i < k; ++i)
      if ((mask >> i) & 1) s.add(vars[i]);
    p.set_coeff(s, c);
  }
  return p;
}

nlohmann::json DecisionTree::to_json() const { return node_to_json(*root_); }

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  DecisionTree t;
  t.root_ = node_from_json(j);
  std::set<int> path;
  check_no_repeat(*t.root_, path);
  return t;
}

double tree_eval(const DecisionTree& tree, const CubePoint& x) {
  return tree.eval(x);
}

}  // namespace lowdeg
