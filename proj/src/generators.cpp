#include "lowdeg/generators.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lowdeg/combinatorics.hpp"

namespace lowdeg {

namespace {

// Uniform pick from {1..n} \ used via rank selection (bounded work,
// deterministic given the stream).
int pick_unused_var(int n, const std::set<int>& used, Rng& rng) {
  const int available = n - static_cast<int>(used.size());
  if (available <= 0) throw std::invalid_argument("no variables left to pick");
  std::uint64_t rank = rng.next_below(available);
  for (int v = 1; v <= n; ++v) {
    if (used.count(v)) continue;
    if (rank == 0) return v;
    --rank;
  }
  throw std::logic_error("pick_unused_var: rank exhausted");
}

DecisionTree random_subtree(int n, int levels_left, std::set<int>& path,
                            Rng& rng) {
  if (levels_left == 0)
    return DecisionTree::leaf(rng.next_sign());
  const int var = pick_unused_var(n, path, rng);
  path.insert(var);
  DecisionTree neg = random_subtree(n, levels_left - 1, path, rng);
  DecisionTree pos = random_subtree(n, levels_left - 1, path, rng);
  path.erase(var);
  return DecisionTree::internal(var, std::move(neg), std::move(pos));
}

}  // namespace

DecisionTree random_tree(int n, int d, std::uint64_t seed) {
  if (d < 1 || d > n) throw std::invalid_argument("random_tree: need 1 <= d <= n");
  Rng rng(seed);
  std::set<int> path;
  return random_subtree(n, d, path, rng);
}

SparsePoly random_bounded_poly(int n, int d, int sparsity, std::uint64_t seed) {
  if (sparsity < 1) throw std::invalid_argument("random_bounded_poly: sparsity < 1");
  const std::uint64_t available = binomial_sum(n, d);
  if (static_cast<std::uint64_t>(sparsity) > available)
    throw std::invalid_argument("random_bounded_poly: sparsity exceeds subsets");
  Rng rng(seed);
  std::set<SubsetMask> support;
  while (support.size() < static_cast<std::size_t>(sparsity))
    support.insert(SubsetMask::of_vars(n, random_subset_up_to_degree(n, d, rng)));

  std::vector<double> coeffs(support.size());
  double abs_sum = 0.0;
  for (auto& c : coeffs) {
    c = rng.next_symmetric();
    abs_sum += std::abs(c);
  }
  const double norm = std::max(1.0, abs_sum);

  SparsePoly p(n);
  std::size_t i = 0;
  for (const auto& s : support) p.set_coeff(s, coeffs[i++] / norm);
  return p;
}

JuntaInstance random_junta_instance(int n, int k, int d, double eta,
                                    int sparsity, std::uint64_t seed) {
  if (k < 1 || k > n)
    throw std::invalid_argument("random_junta: need 1 <= k <= n");
  if (eta < 0.0 || eta >= 1.0)
    throw std::invalid_argument("random_junta: eta must be in [0,1)");
  Rng rng(seed);
  JuntaInstance inst;
  inst.sigma = random_k_subset(n, k, rng);

  // Bounded poly on sigma's coordinates, relabeled into dimension n.
  const int dd = std::min(d, k);
  SparsePoly on_sigma = random_bounded_poly(k, dd, sparsity, rng.next_u64());
  SparsePoly g(n);
  for (const auto& [s, c] : on_sigma.coeffs()) {
    SubsetMask lifted(n);
    for (int v : s.vars()) lifted.add(inst.sigma[v - 1]);
    g.set_coeff(lifted, c);
  }

  if (eta == 0.0) {
    inst.poly = std::move(g);
    return inst;
  }
  if (k == n)
    throw std::invalid_argument("random_junta: no subset outside sigma exists");

  const SubsetMask sigma_mask = SubsetMask::of_vars(n, inst.sigma);
  SubsetMask t(n);
  do {
    t = SubsetMask::of_vars(n, random_subset_up_to_degree(n, d, rng));
  } while (t.is_subset_of(sigma_mask));

  inst.poly = g.scaled(1.0 - std::sqrt(eta));
  inst.poly.add_coeff(t, std::sqrt(eta));
  inst.off_term = t;
  return inst;
}

SparsePoly random_junta(int n, int k, int d, double eta, int sparsity,
                        std::uint64_t seed) {
  return random_junta_instance(n, k, d, eta, sparsity, seed).poly;
}

SparsePoly random_walsh(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  SparsePoly p(n);
  p.set_coeff(SubsetMask::of_vars(n, random_subset_up_to_degree(n, d, rng)), 1.0);
  return p;
}

Target generate(const GenSpec& spec) {
  Target t;
  t.spec = spec;
  if (spec.kind == "tree") {
    t.tree = random_tree(spec.n, spec.d, spec.seed);
    t.poly = t.tree->spectrum(spec.n);
  } else if (spec.kind == "sparse_poly") {
    t.poly = random_bounded_poly(spec.n, spec.d, spec.sparsity, spec.seed);
  } else if (spec.kind == "walsh") {
    t.poly = random_walsh(spec.n, spec.d, spec.seed);
  } else if (spec.kind == "junta") {
    t.poly = random_junta(spec.n, spec.junta_k, spec.d, spec.junta_eta,
                          spec.sparsity, spec.seed);
  } else {
    throw std::invalid_argument("generate: unknown kind '" + spec.kind + "'");
  }
  return t;
}

nlohmann::json GenSpec::to_json() const {
  return {{"kind", kind},     {"n", n},
          {"d", d},           {"sparsity", sparsity},
          {"junta_k", junta_k}, {"junta_eta", junta_eta},
          {"seed", seed}};
}

GenSpec GenSpec::from_json(const nlohmann::json& j) {
  GenSpec s;
  s.kind = j.at("kind").get<std::string>();
  s.n = j.at("n").get<int>();
  s.d = j.at("d").get<int>();
  s.sparsity = j.value("sparsity", 1);
  s.junta_k = j.value("junta_k", 0);
  s.junta_eta = j.value("junta_eta", 0.0);
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

}  // namespace lowdeg
