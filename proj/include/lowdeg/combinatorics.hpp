#ifndef LOWDEG_COMBINATORICS_HPP
#define LOWDEG_COMBINATORICS_HPP

#include <cstdint>
#include <vector>

#include "lowdeg/bits.hpp"

namespace lowdeg {

// Thrown when an exact integer count exceeds 64 bits; parameters of that
// size are beyond what this library enumerates.
struct CountOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// C(n, k) in exact integer arithmetic; throws CountOverflow.
std::uint64_t binomial(int n, int k);

// Sum_{r=0}^{d} C(n, r); throws CountOverflow.
std::uint64_t binomial_sum(int n, int d);

// Advances sorted 1-based positions to the next same-cardinality subset in
// colexicographic order, which is numeric order of the corresponding masks.
// Returns false when the input was the last subset (positions then invalid).
bool next_subset_same_card(std::vector<int>& pos, int n);

// Subset of cardinality k at `index` (0-based) in colexicographic order.
std::vector<int> unrank_subset(int n, int k, std::uint64_t index);

// Uniform subset of {1,...,n} with cardinality <= d, as sorted positions.
std::vector<int> random_subset_up_to_degree(int n, int d, Rng& rng);

// Uniform k-element subset of {1,...,n}, sorted.
std::vector<int> random_k_subset(int n, int k, Rng& rng);

// All subsets of cardinality <= d in (cardinality, numeric) order.
// Guarded: throws CountOverflow if the count exceeds `limit`.
std::vector<SubsetMask> subsets_up_to_degree(int n, int d,
                                             std::uint64_t limit = (1ULL << 22));

}  // namespace lowdeg

#endif  // LOWDEG_COMBINATORICS_HPP
