#ifndef LOWDEG_BOUNDS_HPP
#define LOWDEG_BOUNDS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace lowdeg {

// A formula needs a universal constant the caller did not supply. Constants
// are never defaulted silently.
struct MissingConstant : std::invalid_argument {
  explicit MissingConstant(const std::string& symbol)
      : std::invalid_argument("missing constant: " + symbol), symbol(symbol) {}
  std::string symbol;
};

// Parameters the closed-form query bounds draw from. Only the fields a
// chosen formula needs have to be set.
struct BoundParams {
  int n = 0;
  int d = 0;
  double eps = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double t = 0.0;
  double m = 0.0;        // concentration-family size bound
  int k = 0;             // junta arity
  double s = 0.0;        // circuit size
  double bh_const = 0.0; // Bohnenblust-Hille constant estimate, >= 1
  std::map<std::string, double> constants;  // named universal constants
  std::pair<double, double> o1_exponents = {0.0, 0.0};

  double constant(const std::string& name) const {
    auto it = constants.find(name);
    if (it == constants.end()) throw MissingConstant(name);
    return it->second;
  }
};

// Query-complexity lower bound:
//   max{(1-sqrt(eps)) 2^{d-2} log2 n - (d+1) 2^{d-2}, d log2(n/d)}
// plus log2(1-delta) in the randomized model. Base-2 logs as stated.
double q_lower(const BoundParams& params, bool randomized);

// Literal evaluation of one named upper-bound formula. Plain "log" in
// these formulas is the natural log; base-2 logs are written out as such.
// Kinds: lmn, ei, ei2, thresholded, junta, boolean, robust, robust_boolean,
// circuits, dfko_remark, exact_rand.
double q_upper(const std::string& kind, const BoundParams& params);

// Exact query count for zero-error learning: sum_{j=0}^d C(n,j).
std::uint64_t q_exact(int n, int d);

// Count bound on large coefficients: B_d^{2d} / eps^d. Feeds the m preset
// for learning bounded degree-d polynomials.
double bh_subset_bound(int d, double eps, double b_d);

}  // namespace lowdeg

#endif  // LOWDEG_BOUNDS_HPP
