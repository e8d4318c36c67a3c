#include "lowdeg/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lowdeg/combinatorics.hpp"

namespace lowdeg {

namespace {

constexpr int kMaxRetries = 64;

bool pair_violates(const std::vector<int>& a, const std::vector<int>& b,
                   int k, double eps) {
  // Sorted-list intersection size.
  std::size_t i = 0, j = 0;
  int common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(common) >= (1.0 - eps) * k;
}

}  // namespace

std::uint64_t small_family_target(int m, int k, double eps) {
  const double log_target = -0.5 * k * std::log(2.0 * k) +
                            0.5 * (1.0 - eps) * k * std::log(m);
  if (log_target > 42.0)
    throw std::overflow_error("small_family_target: beyond desk scale");
  const double target = std::floor(std::exp(log_target));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(target));
}

SubsetFamily small_intersection_family(int m, int k, double eps,
                                       std::uint64_t seed) {
  if (k >= m || k < 1) throw std::invalid_argument("need 1 <= k < m");
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("eps must be in (0,1)");
  const std::uint64_t target = small_family_target(m, k, eps);
  // A small cushion over the target: one round then succeeds in
  // expectation, deletions included.
  const std::uint64_t draw_count =
      std::max<std::uint64_t>(target + 4, target + target / 4);

  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    std::vector<std::vector<int>> drawn;
    drawn.reserve(draw_count);
    for (std::uint64_t i = 0; i < draw_count; ++i)
      drawn.push_back(random_k_subset(m, k, rng));

    // Delete one endpoint of every violating pair (duplicates violate too).
    std::vector<bool> dead(drawn.size(), false);
    for (std::size_t i = 0; i < drawn.size(); ++i) {
      if (dead[i]) continue;
      for (std::size_t j = i + 1; j < drawn.size(); ++j) {
        if (dead[j]) continue;
        if (pair_violates(drawn[i], drawn[j], k, eps)) dead[j] = true;
      }
    }

    SubsetFamily family;
    family.m = m;
    family.k = k;
    family.eps = eps;
    for (std::size_t i = 0; i < drawn.size(); ++i)
      if (!dead[i]) family.members.push_back(std::move(drawn[i]));
    if (family.members.size() >= target) return family;
  }
  throw ConstructionFailed(kMaxRetries, target);
}

DecisionTree sigma_tree(const std::vector<int>& sigma, int d, int n) {
  if (d < 1) throw std::invalid_argument("sigma_tree: d >= 1 required");
  const std::size_t k = 1ULL << (d - 1);
  if (sigma.size() != k)
    throw std::invalid_argument("sigma_tree: need |sigma| = 2^{d-1}");
  if (!std::is_sorted(sigma.begin(), sigma.end()) ||
      std::adjacent_find(sigma.begin(), sigma.end()) != sigma.end())
    throw std::invalid_argument("sigma_tree: sigma must be sorted and distinct");
  if (sigma.front() < d || sigma.back() > n)
    throw std::invalid_argument("sigma_tree: elements must lie in {d,...,n}");

  // Bottom node for path bits (root edge most significant, -1 edge = 0)
  // queries sigma[path]; its leaves output the queried value.
  const auto query_node = [](int var) {
    return DecisionTree::internal(var, DecisionTree::leaf(-1.0),
                                  DecisionTree::leaf(1.0));
  };
  // Build level by level from the bottom.
  std::vector<DecisionTree> level;
  level.reserve(k);
  for (std::size_t path = 0; path < k; ++path)
    level.push_back(query_node(sigma[path]));
  for (int var = d - 1; var >= 1; --var) {
    std::vector<DecisionTree> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i < level.size(); i += 2)
      next.push_back(DecisionTree::internal(var, std::move(level[i]),
                                            std::move(level[i + 1])));
    level = std::move(next);
  }
  return std::move(level.front());
}

double tree_pair_sq_distance(const std::vector<int>& sigma_r,
                             const std::vector<int>& sigma_s, int d) {
  if (sigma_r.size() != sigma_s.size())
    throw std::invalid_argument("tree_pair_sq_distance: size mismatch");
  int differing = 0;
  for (std::size_t i = 0; i < sigma_r.size(); ++i)
    if (sigma_r[i] != sigma_s[i]) ++differing;
  return static_cast<double>(differing) * std::ldexp(1.0, -(d - 2));
}

PackingCertificate packing_family(int n, int d, double eps,
                                  std::uint64_t seed) {
  if (d < 1 || d > 62 || (1ULL << d) > static_cast<std::uint64_t>(n))
    throw std::invalid_argument("packing_family: need 1 <= d <= log2 n");
  const int m = n - d + 1;
  const int k = 1 << (d - 1);

  // Members of the ground-set family live in {1..m}; shift into {d..n}.
  SubsetFamily raw = small_intersection_family(m, k, eps, seed);
  PackingCertificate cert;
  cert.d = d;
  cert.n = n;
  cert.seed = seed;
  cert.size_bound = small_family_target(m, k, eps);
  cert.family.m = m;
  cert.family.k = k;
  cert.family.eps = eps;
  for (auto& member : raw.members) {
    for (int& v : member) v += d - 1;
    cert.family.members.push_back(std::move(member));
  }

  double min_sq = std::numeric_limits<double>::infinity();
  const auto& mem = cert.family.members;
  for (std::size_t i = 0; i < mem.size(); ++i)
    for (std::size_t j = i + 1; j < mem.size(); ++j)
      min_sq = std::min(min_sq, tree_pair_sq_distance(mem[i], mem[j], d));
  cert.min_sq_distance = min_sq;

  if (mem.size() > 1 && min_sq < 2.0 * eps)
    throw std::logic_error("packing_family: separation below 2 eps");
  return cert;
}

std::pair<bool, double> verify_packing(const std::vector<SparsePoly>& funcs,
                                       double tau) {
  double min_dist = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t i = 0; i < funcs.size(); ++i)
    for (std::size_t j = i + 1; j < funcs.size(); ++j) {
      const double dist = l2_distance(funcs[i], funcs[j]);
      min_dist = std::min(min_dist, dist);
      if (dist <= tau) ok = false;
    }
  return {ok, min_dist};
}

namespace {

std::vector<std::vector<bool>> separation_graph(
    const std::vector<SparsePoly>& funcs, double eps) {
  const std::size_t count = funcs.size();
  std::vector<std::vector<bool>> apart(count, std::vector<bool>(count, false));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      const bool separated = l2_distance(funcs[i], funcs[j]) > eps;
      apart[i][j] = apart[j][i] = separated;
    }
  return apart;
}

// Max clique by branch and bound; fine for the tiny lists this serves.
int max_clique(const std::vector<std::vector<bool>>& apart,
               std::vector<int>& candidates, int chosen) {
  if (candidates.empty()) return chosen;
  int best = chosen;
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    if (chosen + static_cast<int>(candidates.size() - idx) <= best) break;
    const int v = candidates[idx];
    std::vector<int> next;
    for (std::size_t j = idx + 1; j < candidates.size(); ++j)
      if (apart[v][candidates[j]]) next.push_back(candidates[j]);
    best = std::max(best, max_clique(apart, next, chosen + 1));
  }
  return best;
}

}  // namespace

int greedy_packing_number(const std::vector<SparsePoly>& funcs, double eps,
                          bool exhaustive) {
  if (funcs.empty()) return 0;
  const auto apart = separation_graph(funcs, eps);
  if (exhaustive) {
    std::vector<int> candidates(funcs.size());
    for (std::size_t i = 0; i < funcs.size(); ++i)
      candidates[i] = static_cast<int>(i);
    return max_clique(apart, candidates, 0);
  }
  std::vector<int> picked;
  for (std::size_t i = 0; i < funcs.size(); ++i) {
    bool fits = true;
    for (int p : picked)
      if (!apart[i][p]) {
        fits = false;
        break;
      }
    if (fits) picked.push_back(static_cast<int>(i));
  }
  return static_cast<int>(picked.size());
}

int exact_covering_number(const std::vector<SparsePoly>& funcs, double eps) {
  const std::size_t count = funcs.size();
  if (count == 0) return 0;
  if (count > 24)
    throw std::invalid_argument("exact_covering_number: list too large");
  // covered[i] = bitset of points within eps of funcs[i].
  std::vector<std::uint32_t> covered(count, 0);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      if (l2_distance(funcs[i], funcs[j]) <= eps) covered[i] |= 1U << j;

  const std::uint32_t all = (count == 32) ? ~0U : (1U << count) - 1;
  int best = static_cast<int>(count);
  for (std::uint32_t pick = 0; pick < (1U << count); ++pick) {
    std::uint32_t reach = 0;
    for (std::size_t i = 0; i < count; ++i)
      if ((pick >> i) & 1) reach |= covered[i];
    if (reach == all) best = std::min(best, std::popcount(pick));
  }
  return best;
}

EntropyBounds entropy_bounds(int n, int d, double eps, double c_param,
                             double kappa_param) {
  EntropyBounds out;
  const double pow_d = std::ldexp(1.0, d - 2);  // 2^{d-2}, fractional at d<2
  out.lower = (1.0 - eps) * pow_d * std::log2(n) - (d + 1) * pow_d;
  out.upper =
      std::exp2(c_param * d) / std::pow(eps, 4.0) * std::log(n) + kappa_param;
  out.walsh_lb = std::log2(static_cast<double>(binomial_sum(n, d)));
  return out;
}

nlohmann::json PackingCertificate::to_json() const {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& member : family.members) members.push_back(member);
  return {{"n", n},
          {"d", d},
          {"eps", family.eps},
          {"ground_m", family.m},
          {"subset_k", family.k},
          {"seed", seed},
          {"size", family.members.size()},
          {"size_bound", size_bound},
          {"min_sq_distance", min_sq_distance},
          {"sigmas", members}};
}

PackingCertificate PackingCertificate::from_json(const nlohmann::json& j) {
  PackingCertificate cert;
  cert.n = j.at("n").get<int>();
  cert.d = j.at("d").get<int>();
  cert.seed = j.at("seed").get<std::uint64_t>();
  cert.size_bound = j.at("size_bound").get<std::uint64_t>();
  cert.min_sq_distance = j.at("min_sq_distance").get<double>();
  cert.family.m = j.at("ground_m").get<int>();
  cert.family.k = j.at("subset_k").get<int>();
  cert.family.eps = j.at("eps").get<double>();
  for (const auto& member : j.at("sigmas"))
    cert.family.members.push_back(member.get<std::vector<int>>());
  return cert;
}

}  // namespace lowdeg
