#ifndef LOWDEG_ORACLE_HPP
#define LOWDEG_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <unordered_map>

#include "lowdeg/bits.hpp"

namespace lowdeg {

// How an oracle charges its query counter. Random-example learners pay per
// draw; the exact query learner never needs repeats, so it pays per
// distinct point and serves repeats from cache.
enum class QueryAccounting { kPerCall, kPerDistinctPoint };

// Evaluation access to an unknown function with a monotone query counter.
// Stateful; one instance must not be shared by concurrent learners.
class QueryOracle {
 public:
  using EvalFn = std::function<double(const CubePoint&)>;

  QueryOracle(int n, EvalFn fn,
              QueryAccounting accounting = QueryAccounting::kPerCall)
      : n_(n), fn_(std::move(fn)), accounting_(accounting) {}

  double operator()(const CubePoint& x) {
    if (x.n() != n_)
      throw std::invalid_argument("QueryOracle: dimension mismatch");
    if (accounting_ == QueryAccounting::kPerDistinctPoint) {
      auto it = cache_.find(x.bits());
      if (it != cache_.end()) return it->second;
      const double value = fn_(x);
      cache_.emplace(x.bits(), value);
      ++count_;
      return value;
    }
    ++count_;
    return fn_(x);
  }

  std::uint64_t queries() const { return count_; }
  int n() const { return n_; }
  QueryAccounting accounting() const { return accounting_; }

 private:
  int n_;
  EvalFn fn_;
  QueryAccounting accounting_;
  std::uint64_t count_ = 0;
  std::unordered_map<Bits, double, BitsHash> cache_;
};

}  // namespace lowdeg

#endif  // LOWDEG_ORACLE_HPP
