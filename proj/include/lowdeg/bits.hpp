#ifndef LOWDEG_BITS_HPP
#define LOWDEG_BITS_HPP

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowdeg/rng.hpp"

namespace lowdeg {

// Fixed-width bit vector over n positions. Positions are 0-based here;
// the domain types built on top expose 1-based variable indices to match
// the usual convention for coordinates x_1,...,x_n. A single word covers
// n <= 64; larger dimensions spill into additional words.
class Bits {
 public:
  Bits() : n_(0) {}

  explicit Bits(int n) : n_(check_dim(n)), w_((n + 63) / 64, 0) {}

  static Bits from_word(int n, std::uint64_t mask) {
    if (n > 64) throw std::invalid_argument("Bits::from_word: n > 64");
    Bits b(n);
    if (n < 64 && (mask >> n) != 0)
      throw std::invalid_argument("Bits::from_word: mask exceeds dimension");
    if (!b.w_.empty()) b.w_[0] = mask;
    return b;
  }

  int n() const { return n_; }
  int words() const { return static_cast<int>(w_.size()); }
  const std::uint64_t* data() const { return w_.data(); }

  bool test(int pos) const { return (w_[pos >> 6] >> (pos & 63)) & 1; }

  void set(int pos, bool value = true) {
    const std::uint64_t bit = 1ULL << (pos & 63);
    if (value)
      w_[pos >> 6] |= bit;
    else
      w_[pos >> 6] &= ~bit;
  }

  void flip(int pos) { w_[pos >> 6] ^= 1ULL << (pos & 63); }

  int popcount() const {
    int total = 0;
    for (std::uint64_t word : w_) total += std::popcount(word);
    return total;
  }

  bool any() const {
    for (std::uint64_t word : w_)
      if (word) return true;
    return false;
  }

  // Parity of |this AND other|; the workhorse behind Walsh evaluation.
  bool and_parity(const Bits& other) const {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & other.w_[i];
    return std::popcount(acc) & 1;
  }

  bool is_subset_of(const Bits& other) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~other.w_[i]) return false;
    return true;
  }

  Bits operator^(const Bits& other) const {
    Bits r = *this;
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] ^= other.w_[i];
    return r;
  }

  std::uint64_t low64() const { return w_.empty() ? 0 : w_[0]; }

  // Uniform random mask over the low n bits.
  static Bits random(int n, Rng& rng) {
    Bits b(n);
    for (auto& word : b.w_) word = rng.next_u64();
    b.trim();
    return b;
  }

  bool operator==(const Bits& other) const {
    return n_ == other.n_ && w_ == other.w_;
  }

  // Numeric order (most significant word first).
  std::strong_ordering operator<=>(const Bits& other) const {
    if (auto c = n_ <=> other.n_; c != 0) return c;
    for (std::size_t i = w_.size(); i-- > 0;)
      if (auto c = w_[i] <=> other.w_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(n_);
    for (std::uint64_t word : w_) {
      h ^= word + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

 private:
  static int check_dim(int n) {
    if (n < 0) throw std::invalid_argument("Bits: negative dimension");
    return n;
  }

  void trim() {
    if (n_ % 64 != 0 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
  }

  int n_;
  std::vector<std::uint64_t> w_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

// A point of {-1,1}^n. Bit i-1 set means coordinate x_i = -1, so the empty
// mask is the all-ones point.
class CubePoint {
 public:
  CubePoint() = default;
  explicit CubePoint(int n) : bits_(n) {}
  explicit CubePoint(Bits bits) : bits_(std::move(bits)) {}

  static CubePoint all_ones(int n) { return CubePoint(n); }

  static CubePoint from_mask(int n, std::uint64_t mask) {
    return CubePoint(Bits::from_word(n, mask));
  }

  static CubePoint random(int n, Rng& rng) {
    return CubePoint(Bits::random(n, rng));
  }

  int n() const { return bits_.n(); }

  // Value of coordinate x_i, 1-based.
  int coord(int i) const {
    check_var(i);
    return bits_.test(i - 1) ? -1 : 1;
  }

  CubePoint with_flipped(int i) const {
    check_var(i);
    CubePoint p = *this;
    p.bits_.flip(i - 1);
    return p;
  }

  const Bits& bits() const { return bits_; }
  std::uint64_t mask64() const { return bits_.low64(); }

  bool operator==(const CubePoint&) const = default;

 private:
  void check_var(int i) const {
    if (i < 1 || i > bits_.n())
      throw std::out_of_range("CubePoint: variable index " + std::to_string(i) +
                              " out of range for n=" + std::to_string(bits_.n()));
  }

  Bits bits_;
};

// A subset S of {1,...,n}, stored as the mask with bit i-1 set for i in S.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(int n) : mask_(n) {}
  explicit SubsetMask(Bits mask) : mask_(std::move(mask)) {}

  static SubsetMask empty(int n) { return SubsetMask(n); }

  static SubsetMask from_mask(int n, std::uint64_t mask) {
    return SubsetMask(Bits::from_word(n, mask));
  }

  static SubsetMask of(int n, std::initializer_list<int> vars) {
    SubsetMask s(n);
    for (int v : vars) s.add(v);
    return s;
  }

  static SubsetMask of_vars(int n, const std::vector<int>& vars) {
    SubsetMask s(n);
    for (int v : vars) s.add(v);
    return s;
  }

  int n() const { return mask_.n(); }
  int cardinality() const { return mask_.popcount(); }

  bool contains(int i) const {
    check_var(i);
    return mask_.test(i - 1);
  }

  void add(int i) {
    check_var(i);
    mask_.set(i - 1);
  }

  // Member variables in increasing order, 1-based.
  std::vector<int> vars() const {
    std::vector<int> out;
    out.reserve(cardinality());
    for (int i = 0; i < mask_.n(); ++i)
      if (mask_.test(i)) out.push_back(i + 1);
    return out;
  }

  SubsetMask sym_diff(const SubsetMask& other) const {
    require_same_dim(other);
    return SubsetMask(mask_ ^ other.mask_);
  }

  bool is_subset_of(const SubsetMask& other) const {
    require_same_dim(other);
    return mask_.is_subset_of(other.mask_);
  }

  const Bits& mask() const { return mask_; }
  std::uint64_t mask64() const { return mask_.low64(); }

  bool operator==(const SubsetMask&) const = default;
  std::strong_ordering operator<=>(const SubsetMask& other) const {
    return mask_ <=> other.mask_;
  }

 private:
  void check_var(int i) const {
    if (i < 1 || i > mask_.n())
      throw std::out_of_range("SubsetMask: variable index " + std::to_string(i) +
                              " out of range for n=" + std::to_string(mask_.n()));
  }

  void require_same_dim(const SubsetMask& other) const {
    if (mask_.n() != other.mask_.n())
      throw std::invalid_argument("SubsetMask: dimension mismatch");
  }

  Bits mask_;
};

// w_S(x) = prod_{i in S} x_i = (-1)^{|S AND x|}.
inline int walsh_eval(const SubsetMask& s, const CubePoint& x) {
  if (s.n() != x.n())
    throw std::invalid_argument("walsh_eval: dimension mismatch");
  return s.mask().and_parity(x.bits()) ? -1 : 1;
}

}  // namespace lowdeg

#endif  // LOWDEG_BITS_HPP
