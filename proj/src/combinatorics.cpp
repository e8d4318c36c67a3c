#include "lowdeg/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lowdeg {

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) throw CountOverflow("binomial overflow");
  return a * b;
}

std::uint64_t add_checked(std::uint64_t a, std::uint64_t b) {
  if (b > UINT64_MAX - a) throw CountOverflow("binomial sum overflow");
  return a + b;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n-k+i) / i is always integral at this step; divide by the
    // gcd first to postpone overflow.
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
    std::uint64_t r = result / g;
    std::uint64_t den = static_cast<std::uint64_t>(i) / g;
    g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (den != 1) throw std::logic_error("binomial: non-integral step");
    result = mul_checked(r, num);
  }
  return result;
}

std::uint64_t binomial_sum(int n, int d) {
  std::uint64_t total = 0;
  for (int r = 0; r <= d && r <= n; ++r) total = add_checked(total, binomial(n, r));
  return total;
}

bool next_subset_same_card(std::vector<int>& pos, int n) {
  const int k = static_cast<int>(pos.size());
  if (k == 0) return false;
  // Colex step: bump the lowest element that has headroom, reset the ones
  // below it to 1..i.
  for (int i = 0; i < k; ++i) {
    const int ceiling = (i + 1 < k) ? pos[i + 1] - 1 : n;
    if (pos[i] < ceiling) {
      ++pos[i];
      for (int j = 0; j < i; ++j) pos[j] = j + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> unrank_subset(int n, int k, std::uint64_t index) {
  // Combinatorial number system: index = sum_i C(c_i - 1, i + 1) over the
  // chosen positions c_1 < ... < c_k (colex order).
  std::vector<int> out(k);
  for (int i = k; i >= 1; --i) {
    int lo = i, hi = n;
    // Largest c with C(c-1, i) <= index.
    while (lo < hi) {
      int mid = lo + (hi - lo + 1) / 2;
      if (binomial(mid - 1, i) <= index)
        lo = mid;
      else
        hi = mid - 1;
    }
    out[i - 1] = lo;
    index -= binomial(lo - 1, i);
    n = lo - 1;
  }
  if (index != 0) throw std::out_of_range("unrank_subset: index out of range");
  return out;
}

std::vector<int> random_subset_up_to_degree(int n, int d, Rng& rng) {
  const std::uint64_t total = binomial_sum(n, d);
  std::uint64_t index = rng.next_below(total);
  int card = 0;
  while (true) {
    const std::uint64_t c = binomial(n, card);
    if (index < c) break;
    index -= c;
    ++card;
  }
  return unrank_subset(n, card, index);
}

std::vector<int> random_k_subset(int n, int k, Rng& rng) {
  if (k > n) throw std::invalid_argument("random_k_subset: k > n");
  return unrank_subset(n, k, rng.next_below(binomial(n, k)));
}

std::vector<SubsetMask> subsets_up_to_degree(int n, int d, std::uint64_t limit) {
  const std::uint64_t total = binomial_sum(n, d);
  if (total > limit)
    throw CountOverflow("subsets_up_to_degree: enumeration too large");
  std::vector<SubsetMask> out;
  out.reserve(total);
  out.push_back(SubsetMask::empty(n));
  for (int card = 1; card <= std::min(d, n); ++card) {
    std::vector<int> pos(card);
    for (int i = 0; i < card; ++i) pos[i] = i + 1;
    do {
      out.push_back(SubsetMask::of_vars(n, pos));
    } while (next_subset_same_card(pos, n));
  }
  return out;
}

}  // namespace lowdeg
