#ifndef LOWDEG_EXACT_LEARNERS_HPP
#define LOWDEG_EXACT_LEARNERS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lowdeg/bits.hpp"
#include "lowdeg/function.hpp"
#include "lowdeg/oracle.hpp"

namespace lowdeg {

// Reconstruction disagreed with the cached queries beyond tolerance. Note:
// the radius-d ball values of ANY function are consistent with exactly one
// degree-<=d polynomial, so clean data never trips this; it guards against
// numerical breakdown. Degree-violating targets are caught downstream by
// comparing the hypothesis against held-out values or a known target.
struct DegreeViolation : std::runtime_error {
  explicit DegreeViolation(double residual)
      : std::runtime_error("exact learner: residual " +
                           std::to_string(residual) +
                           " exceeds tolerance; target degree likely > d"),
        max_residual(residual) {}
  double max_residual;
};

// Enumeration of the closed Hamming ball of radius d around the all-ones
// point, in (popcount, numeric) order; the first point is all-ones.
struct BallIndex {
  int n = 0;
  int d = 0;
  std::vector<CubePoint> points;

  static BallIndex build(int n, int d);
  std::size_t size() const { return points.size(); }
};

// Slice derivative (f(x with x_i=+1) - f(x with x_i=-1)) / 2. Each term
// c_S w_S with i in S contributes c_S w_{S \ {i}}; terms without i vanish.
DenseFunction discrete_derivative(const DenseFunction& f, int i);

// Order-|S| derivative at the all-ones point:
//   2^{-|S|} sum_{F subset S} (-1)^{|F|} f(1 with coordinates in F flipped).
// Equals the coefficient c_S exactly when deg(f) <= |S|. All queried points
// lie in the Hamming ball of radius |S| around all-ones.
double derivative_at_ones(QueryOracle& oracle, const SubsetMask& s);

// Deterministic zero-error learner: queries exactly the ball points (the
// oracle should use per-distinct-point accounting), then peels coefficients
// from degree d downward on the cached residuals. The result interpolates
// the queried values; it equals the target whenever deg(target) <= d.
SparsePoly exact_learn_queries(QueryOracle& oracle, int n, int d);

// Incremental exact rank of the evaluation operator restricted to degree
// <= d, over rows (w_S(x))_{|S|<=d}. Elimination is fraction-free over
// arbitrary-precision integers, so no floating tolerance enters rank
// decisions.
class ExactSolveState {
 public:
  ExactSolveState(int n, int d);
  ~ExactSolveState();
  ExactSolveState(ExactSolveState&&) noexcept;
  ExactSolveState& operator=(ExactSolveState&&) noexcept;

  // Appends an observation; returns true if the rank increased.
  bool append(const CubePoint& x, double y);

  int rank() const;
  std::size_t k() const;  // target rank = sum_{j<=d} C(n,j)
  std::size_t rows_seen() const;

  // Exact rational solve of the k x k subsystem formed by the first k
  // independent rows. Requires rank() == k.
  SparsePoly solve() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ExactRandomOutcome {
  std::optional<SparsePoly> poly;  // set on success
  int rank_reached = 0;
  std::uint64_t queries_used = 0;
  std::uint64_t budget = 0;
  bool ok() const { return poly.has_value(); }
};

// Default draw budget ceil(C * 2^d * k * ln(k/delta)); C defaults to 4.
std::uint64_t exact_random_budget(int n, int d, double delta, double c = 4.0);

// Randomized zero-error learner: draws uniform points, tracks exact rank,
// solves once full rank is reached (or reports the rank it got).
ExactRandomOutcome exact_learn_random(QueryOracle& oracle, int n, int d,
                                      double delta, std::uint64_t seed,
                                      std::optional<std::uint64_t> budget = {},
                                      double c = 4.0);

// The non-injectivity bound (2Q)^{k-1} (1 - 2^{-d})^Q, evaluated in log
// space (underflows to 0 for comfortable budgets).
double exact_random_failure_bound(std::uint64_t q, std::uint64_t k, int d);

}  // namespace lowdeg

#endif  // LOWDEG_EXACT_LEARNERS_HPP
