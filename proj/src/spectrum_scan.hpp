#ifndef LOWDEG_SRC_SPECTRUM_SCAN_HPP
#define LOWDEG_SRC_SPECTRUM_SCAN_HPP

// Internal kernels for empirical Walsh coefficient scans. Not installed.

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "lowdeg/bits.hpp"

namespace lowdeg::internal {

// Upper bound on the number of subsets the dense accumulator will hold
// (8 bytes each).
constexpr std::uint64_t kDenseScanLimit = 1ULL << 22;

// Above this subset count the packed path is preferred when it applies
// (identical output, much less work per subset).
constexpr std::uint64_t kPackedPreferredMin = 1ULL << 15;

// alpha_S for every |S| <= d in (cardinality, colex) order, as a flat
// vector aligned with subsets_up_to_degree(n, d). Sample-major
// accumulation: deterministic summation order for non-integer values.
std::vector<double> scan_dense(int n, int d,
                               const std::vector<CubePoint>& samples,
                               const std::vector<double>& values);

struct ScanResult {
  std::vector<std::pair<SubsetMask, double>> survivors;
  // Set when the survivor count passed the cap; survivors is then partial.
  bool overflow = false;
};

// Survivors of |alpha_S| >= threshold among all |S| <= d, sorted by
// (cardinality, numeric mask). Dispatches between the dense accumulator
// and a bit-packed popcount scan (all sample values +-1, d <= 2); both
// produce identical coefficients for inputs they share. The scan stops
// once more than `cap` survivors are found.
ScanResult scan_select(int n, int d, const std::vector<CubePoint>& samples,
                       const std::vector<double>& values, double threshold,
                       std::size_t cap = std::numeric_limits<std::size_t>::max());

// The packed path on its own (values must all be +-1, d <= 2); exposed so
// tests can compare it against the dense path on sizes both can handle.
ScanResult scan_select_packed(
    int n, int d, const std::vector<CubePoint>& samples,
    const std::vector<double>& values, double threshold,
    std::size_t cap = std::numeric_limits<std::size_t>::max());

bool all_pm_one(const std::vector<double>& values);

}  // namespace lowdeg::internal

#endif  // LOWDEG_SRC_SPECTRUM_SCAN_HPP
