#include "spectrum_scan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "lowdeg/combinatorics.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace lowdeg::internal {

namespace {

inline std::uint64_t xor_popcount_generic(const std::uint64_t* a,
                                          const std::uint64_t* b,
                                          std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] ^ b[i]);
  return total;
}

#if defined(__AVX2__)
// Nibble-LUT popcount of xor-ed 256-bit lanes (Mula's method), with the
// chunk count fixed at compile time so the whole body inlines into the
// column loop and the constants hoist out of it.
template <int CHUNKS>
inline std::uint64_t xor_popcount_fixed(const std::uint64_t* a,
                                        const std::uint64_t* b) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3,
                                       3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3,
                                       2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  for (int c = 0; c < CHUNKS; ++c) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + 4 * c));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + 4 * c));
    const __m256i v = _mm256_xor_si256(va, vb);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                                        _mm256_shuffle_epi8(lut, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  const __m128i lo128 = _mm256_castsi256_si128(acc);
  const __m128i hi128 = _mm256_extracti128_si256(acc, 1);
  const __m128i sum = _mm_add_epi64(lo128, hi128);
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(sum)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(sum, 1));
}
#endif

// Column-major repack: bit j of column i is coordinate bit i of sample j.
struct ColumnBits {
  int n = 0;
  std::size_t q = 0;
  std::size_t stride = 0;  // words per column
  std::vector<std::uint64_t> cols;

  const std::uint64_t* col(int i) const { return cols.data() + i * stride; }

  static ColumnBits build(int n, const std::vector<CubePoint>& samples) {
    ColumnBits cb;
    cb.n = n;
    cb.q = samples.size();
    cb.stride = (cb.q + 63) / 64;
    cb.cols.assign(static_cast<std::size_t>(n) * cb.stride, 0);
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const Bits& bits = samples[j].bits();
      const std::uint64_t word_bit = 1ULL << (j & 63);
      const std::size_t word_idx = j >> 6;
      for (int w = 0; w < bits.words(); ++w) {
        std::uint64_t word = bits.data()[w];
        while (word) {
          const int b = std::countr_zero(word);
          word &= word - 1;
          cb.cols[static_cast<std::size_t>(64 * w + b) * cb.stride + word_idx] |=
              word_bit;
        }
      }
    }
    return cb;
  }
};

// Smallest integer s with s/Q >= threshold under the same double
// arithmetic the dense path uses for its compare.
std::int64_t min_passing_sum(double threshold, std::uint64_t q) {
  const double qd = static_cast<double>(q);
  std::int64_t s = static_cast<std::int64_t>(std::ceil(threshold * qd)) - 2;
  if (s < 0) s = 0;
  while (static_cast<double>(s) / qd < threshold) ++s;
  return s;
}

// The pair scan for one left column against all later ones, specialized on
// the word count so the popcount body fully inlines.
template <int WORDS>
bool pair_row_fixed(const std::uint64_t* tmp, const ColumnBits& cb, int i,
                    std::int64_t q, std::int64_t min_sum, double qd, int n,
                    std::size_t cap,
                    std::vector<std::pair<SubsetMask, double>>& out) {
  for (int k = i + 1; k < n; ++k) {
#if defined(__AVX2__)
    std::uint64_t neg;
    if constexpr (WORDS % 4 == 0 && WORDS >= 4)
      neg = xor_popcount_fixed<WORDS / 4>(tmp, cb.col(k));
    else
      neg = xor_popcount_generic(tmp, cb.col(k), WORDS);
#else
    const std::uint64_t neg = xor_popcount_generic(tmp, cb.col(k), WORDS);
#endif
    const std::int64_t sum = q - 2 * static_cast<std::int64_t>(neg);
    if (sum >= min_sum || -sum >= min_sum) {
      out.emplace_back(SubsetMask::of(cb.n, {i + 1, k + 1}),
                       static_cast<double>(sum) / qd);
      if (out.size() > cap) return false;
    }
  }
  return true;
}

using PairRowFn = bool (*)(const std::uint64_t*, const ColumnBits&, int,
                           std::int64_t, std::int64_t, double, int,
                           std::size_t,
                           std::vector<std::pair<SubsetMask, double>>&);

PairRowFn pair_row_for_stride(std::size_t stride) {
  switch (stride) {
    case 1: return pair_row_fixed<1>;
    case 2: return pair_row_fixed<2>;
    case 4: return pair_row_fixed<4>;
    case 8: return pair_row_fixed<8>;
    case 12: return pair_row_fixed<12>;
    case 16: return pair_row_fixed<16>;
    case 24: return pair_row_fixed<24>;
    case 32: return pair_row_fixed<32>;
    case 48: return pair_row_fixed<48>;
    case 64: return pair_row_fixed<64>;
    default: return nullptr;
  }
}

bool pair_row_generic(const std::uint64_t* tmp, const ColumnBits& cb, int i,
                      std::int64_t q, std::int64_t min_sum, double qd, int n,
                      std::size_t cap,
                      std::vector<std::pair<SubsetMask, double>>& out) {
  for (int k = i + 1; k < n; ++k) {
    const std::uint64_t neg = xor_popcount_generic(tmp, cb.col(k), cb.stride);
    const std::int64_t sum = q - 2 * static_cast<std::int64_t>(neg);
    if (sum >= min_sum || -sum >= min_sum) {
      out.emplace_back(SubsetMask::of(cb.n, {i + 1, k + 1}),
                       static_cast<double>(sum) / qd);
      if (out.size() > cap) return false;
    }
  }
  return true;
}

}  // namespace

bool all_pm_one(const std::vector<double>& values) {
  for (double v : values)
    if (v != 1.0 && v != -1.0) return false;
  return true;
}

ScanResult scan_select_packed(int n, int d,
                              const std::vector<CubePoint>& samples,
                              const std::vector<double>& values,
                              double threshold, std::size_t cap) {
  const std::int64_t q = static_cast<std::int64_t>(samples.size());
  const double qd = static_cast<double>(q);
  const std::size_t stride = (samples.size() + 63) / 64;

  const ColumnBits cb = ColumnBits::build(n, samples);
  std::vector<std::uint64_t> value_bits(stride, 0);
  for (std::size_t j = 0; j < values.size(); ++j)
    if (values[j] < 0.0) value_bits[j >> 6] |= 1ULL << (j & 63);

  const std::int64_t min_sum = min_passing_sum(threshold, samples.size());
  ScanResult result;
  auto& out = result.survivors;
  const auto consider = [&](SubsetMask s, std::int64_t sum) {
    if (sum >= min_sum || -sum >= min_sum)
      out.emplace_back(std::move(s), static_cast<double>(sum) / qd);
    return out.size() <= cap;
  };

  // Empty set.
  std::uint64_t neg0 = 0;
  for (std::uint64_t w : value_bits) neg0 += std::popcount(w);
  if (!consider(SubsetMask::empty(n),
                q - 2 * static_cast<std::int64_t>(neg0))) {
    result.overflow = true;
    return result;
  }

  if (d >= 1) {
    const PairRowFn pair_row = pair_row_for_stride(stride);
    std::vector<std::uint64_t> tmp(stride);
    for (int i = 0; i < n; ++i) {
      const std::uint64_t* ci = cb.col(i);
      for (std::size_t w = 0; w < stride; ++w) tmp[w] = value_bits[w] ^ ci[w];
      std::uint64_t ones = 0;
      for (std::uint64_t w : tmp) ones += std::popcount(w);
      if (!consider(SubsetMask::of(n, {i + 1}),
                    q - 2 * static_cast<std::int64_t>(ones))) {
        result.overflow = true;
        return result;
      }
      if (d >= 2) {
        const bool within_cap =
            pair_row ? pair_row(tmp.data(), cb, i, q, min_sum, qd, n, cap, out)
                     : pair_row_generic(tmp.data(), cb, i, q, min_sum, qd, n,
                                        cap, out);
        if (!within_cap) {
          result.overflow = true;
          return result;
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.cardinality() != b.first.cardinality())
      return a.first.cardinality() < b.first.cardinality();
    return a.first < b.first;
  });
  return result;
}

std::vector<double> scan_dense(int n, int d,
                               const std::vector<CubePoint>& samples,
                               const std::vector<double>& values) {
  const std::uint64_t count = binomial_sum(n, d);
  if (count > kDenseScanLimit)
    throw CountOverflow("spectrum scan: subset count too large for dense path");
  std::vector<double> acc(count, 0.0);

  if (d <= 2) {
    // Specialized loops; pair ranks are colex: {i<j} at 1+n+C(j-1,2)+(i-1).
    std::vector<double> sgn(n);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const Bits& x = samples[s].bits();
      const double v = values[s];
      acc[0] += v;
      if (d < 1) continue;
      for (int i = 0; i < n; ++i) {
        sgn[i] = x.test(i) ? -v : v;
        acc[1 + i] += sgn[i];
      }
      if (d < 2) continue;
      std::size_t idx = 1 + n;
      for (int j = 1; j < n; ++j) {
        if (x.test(j)) {
          for (int i = 0; i < j; ++i) acc[idx++] -= sgn[i];
        } else {
          for (int i = 0; i < j; ++i) acc[idx++] += sgn[i];
        }
      }
    }
  } else {
    std::vector<double> sgn(n);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const Bits& x = samples[s].bits();
      const double v = values[s];
      for (int i = 0; i < n; ++i) sgn[i] = x.test(i) ? -1.0 : 1.0;
      std::size_t idx = 0;
      acc[idx++] += v;
      for (int card = 1; card <= std::min(d, n); ++card) {
        std::vector<int> pos(card);
        for (int i = 0; i < card; ++i) pos[i] = i + 1;
        do {
          double w = v;
          for (int p : pos) w *= sgn[p - 1];
          acc[idx++] += w;
        } while (next_subset_same_card(pos, n));
      }
    }
  }

  // Divide (not multiply by a rounded reciprocal) so integer-valued sums
  // come out identical to the packed path's s/Q.
  const double qd = static_cast<double>(samples.size());
  for (double& a : acc) a /= qd;
  return acc;
}

ScanResult scan_select(int n, int d, const std::vector<CubePoint>& samples,
                       const std::vector<double>& values, double threshold,
                       std::size_t cap) {
  const std::uint64_t count = binomial_sum(n, d);
  const bool packed_applies = d <= 2 && all_pm_one(values);
  if (count > kDenseScanLimit ||
      (packed_applies && count >= kPackedPreferredMin)) {
    if (packed_applies)
      return scan_select_packed(n, d, samples, values, threshold, cap);
    throw CountOverflow(
        "spectrum scan: too many subsets and no packed path applies "
        "(need Boolean values and d <= 2)");
  }

  const std::vector<double> alpha = scan_dense(n, d, samples, values);
  ScanResult result;
  // Walk the (cardinality, colex) enumeration incrementally; only the
  // survivors materialize as masks.
  std::size_t idx = 0;
  const auto consider = [&](const SubsetMask& s) {
    if (std::abs(alpha[idx]) >= threshold) {
      result.survivors.emplace_back(s, alpha[idx]);
      if (result.survivors.size() > cap) {
        result.overflow = true;
        return false;
      }
    }
    ++idx;
    return true;
  };
  if (!consider(SubsetMask::empty(n))) return result;
  for (int card = 1; card <= std::min(d, n); ++card) {
    std::vector<int> pos(card);
    for (int i = 0; i < card; ++i) pos[i] = i + 1;
    do {
      if (!consider(SubsetMask::of_vars(n, pos))) return result;
    } while (next_subset_same_card(pos, n));
  }
  return result;
}

}  // namespace lowdeg::internal
