#include "lowdeg/exact_learners.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <gmpxx.h>

#include "lowdeg/combinatorics.hpp"

namespace lowdeg {

namespace {

constexpr double kResidualTol = 1e-6;

// Subsets of cardinality <= d in (cardinality, numeric) order; this fixes
// the column order of the evaluation operator.
std::vector<SubsetMask> ball_columns(int n, int d) {
  return subsets_up_to_degree(n, d, 1ULL << 26);
}

}  // namespace

BallIndex BallIndex::build(int n, int d) {
  if (d < 0 || d > n) throw std::invalid_argument("BallIndex: need 0 <= d <= n");
  BallIndex ball;
  ball.n = n;
  ball.d = d;
  const auto masks = ball_columns(n, d);
  ball.points.reserve(masks.size());
  for (const auto& s : masks) ball.points.emplace_back(CubePoint(s.mask()));
  return ball;
}

DenseFunction discrete_derivative(const DenseFunction& f, int i) {
  if (i < 1 || i > f.n())
    throw std::out_of_range("discrete_derivative: index out of range");
  const std::uint64_t bit = 1ULL << (i - 1);
  std::vector<double> out(f.size());
  for (std::uint64_t mask = 0; mask < f.size(); ++mask) {
    // Value at x_i = +1 (bit clear) minus value at x_i = -1 (bit set).
    out[mask] = (f.at_mask(mask & ~bit) - f.at_mask(mask | bit)) / 2.0;
  }
  return DenseFunction(f.n(), std::move(out));
}

double derivative_at_ones(QueryOracle& oracle, const SubsetMask& s) {
  if (s.cardinality() < 1)
    throw std::invalid_argument("derivative_at_ones: need a nonempty subset");
  if (s.cardinality() > 30)
    throw std::invalid_argument("derivative_at_ones: order beyond desk scale");
  const auto vars = s.vars();
  const int r = static_cast<int>(vars.size());
  double total = 0.0;
  for (std::uint64_t f = 0; f < (1ULL << r); ++f) {
    Bits bits(oracle.n());
    for (int i = 0; i < r; ++i)
      if ((f >> i) & 1) bits.set(vars[i] - 1);
    const int sign = (std::popcount(f) & 1) ? -1 : 1;
    total += sign * oracle(CubePoint(bits));
  }
  return std::ldexp(total, -r);
}

SparsePoly exact_learn_queries(QueryOracle& oracle, int n, int d) {
  if (oracle.n() != n)
    throw std::invalid_argument("exact_learn_queries: oracle dimension mismatch");
  const auto masks = ball_columns(n, d);

  // Query the whole ball once; everything below works on the cache.
  std::vector<double> cache(masks.size());
  std::unordered_map<Bits, std::size_t, BitsHash> index;
  index.reserve(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    cache[i] = oracle(CubePoint(masks[i].mask()));
    index.emplace(masks[i].mask(), i);
  }

  // Peel degrees top-down: at level r the cache holds f minus all recovered
  // levels > r, a function of degree <= r, so the order-r derivative at
  // all-ones is exactly c_S. Level r occupies a contiguous block of the
  // (popcount, numeric)-ordered enumeration.
  std::vector<std::size_t> level_offset(d + 2, 0);
  for (int r = 1; r <= d + 1; ++r)
    level_offset[r] = static_cast<std::size_t>(binomial_sum(n, r - 1));

  SparsePoly result(n);
  for (int r = d; r >= 0; --r) {
    std::vector<std::pair<SubsetMask, double>> level;
    for (std::size_t i = level_offset[r]; i < level_offset[r + 1]; ++i) {
      const SubsetMask& s = masks[i];
      double total = 0.0;
      if (r == 0) {
        total = cache[0];
      } else {
        const auto vars = s.vars();
        for (std::uint64_t f = 0; f < (1ULL << r); ++f) {
          Bits bits(n);
          for (int j = 0; j < r; ++j)
            if ((f >> j) & 1) bits.set(vars[j] - 1);
          const int sign = (std::popcount(f) & 1) ? -1 : 1;
          total += sign * cache[index.at(bits)];
        }
        total = std::ldexp(total, -r);
      }
      if (std::abs(total) >= SparsePoly::kCoeffEps) level.emplace_back(s, total);
    }

    // Remove the recovered level from every cached value; after the last
    // level the cache holds f - h on the whole ball.
    for (const auto& [s, c] : level) {
      for (std::size_t i = 0; i < masks.size(); ++i)
        cache[i] -= c * walsh_eval(s, CubePoint(masks[i].mask()));
      result.set_coeff(s, c);
    }
  }

  double residual = 0.0;
  for (double v : cache) residual = std::max(residual, std::abs(v));
  if (residual > kResidualTol) throw DegreeViolation(residual);
  return result;
}

struct ExactSolveState::Impl {
  int n = 0;
  int d = 0;
  std::vector<SubsetMask> columns;
  // Echelon rows in fraction-free integer form, each with its pivot column;
  // kept sorted by pivot column.
  std::vector<std::vector<mpz_class>> echelon;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::pair<CubePoint, double>> independent_rows;
  std::size_t rows_seen = 0;

  std::vector<mpz_class> make_row(const CubePoint& x) const {
    std::vector<mpz_class> row(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
      row[c] = walsh_eval(columns[c], x);
    return row;
  }

  // Fraction-free reduction of `row` against the echelon, stripping the
  // content gcd after each step to keep entries minor-sized.
  void reduce(std::vector<mpz_class>& row) const {
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      const std::size_t pc = pivot_cols[e];
      if (row[pc] == 0) continue;
      const mpz_class pivot = echelon[e][pc];
      const mpz_class factor = row[pc];
      for (std::size_t c = 0; c < row.size(); ++c)
        row[c] = pivot * row[c] - factor * echelon[e][c];
      strip_content(row);
    }
  }

  static void strip_content(std::vector<mpz_class>& row) {
    mpz_class g = 0;
    for (const auto& v : row) {
      if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) return;
    }
    if (g <= 1) return;
    for (auto& v : row) v /= g;
  }
};

ExactSolveState::ExactSolveState(int n, int d) : impl_(new Impl) {
  impl_->n = n;
  impl_->d = d;
  impl_->columns = ball_columns(n, d);
}

ExactSolveState::~ExactSolveState() = default;
ExactSolveState::ExactSolveState(ExactSolveState&&) noexcept = default;
ExactSolveState& ExactSolveState::operator=(ExactSolveState&&) noexcept = default;

bool ExactSolveState::append(const CubePoint& x, double y) {
  Impl& impl = *impl_;
  ++impl.rows_seen;
  if (rank() == static_cast<int>(k())) return false;
  auto row = impl.make_row(x);
  impl.reduce(row);
  std::size_t pc = row.size();
  for (std::size_t c = 0; c < row.size(); ++c)
    if (row[c] != 0) {
      pc = c;
      break;
    }
  if (pc == row.size()) return false;  // dependent

  const auto insert_at = std::upper_bound(impl.pivot_cols.begin(),
                                          impl.pivot_cols.end(), pc) -
                         impl.pivot_cols.begin();
  impl.pivot_cols.insert(impl.pivot_cols.begin() + insert_at, pc);
  impl.echelon.insert(impl.echelon.begin() + insert_at, std::move(row));
  impl.independent_rows.emplace_back(x, y);
  return true;
}

int ExactSolveState::rank() const {
  return static_cast<int>(impl_->echelon.size());
}

std::size_t ExactSolveState::k() const { return impl_->columns.size(); }

std::size_t ExactSolveState::rows_seen() const { return impl_->rows_seen; }

SparsePoly ExactSolveState::solve() const {
  const Impl& impl = *impl_;
  const std::size_t k = impl.columns.size();
  if (impl.echelon.size() != k)
    throw std::logic_error("ExactSolveState::solve: rank incomplete");

  // Exact rational Gauss-Jordan on the +-1 design matrix; right-hand sides
  // are doubles, i.e. exact dyadic rationals.
  std::vector<std::vector<mpq_class>> a(k, std::vector<mpq_class>(k + 1));
  for (std::size_t r = 0; r < k; ++r) {
    const auto& [x, y] = impl.independent_rows[r];
    for (std::size_t c = 0; c < k; ++c) a[r][c] = walsh_eval(impl.columns[c], x);
    a[r][k] = mpq_class(y);
  }

  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    while (pivot < k && a[pivot][col] == 0) ++pivot;
    if (pivot == k) throw std::logic_error("ExactSolveState::solve: singular");
    std::swap(a[col], a[pivot]);
    mpq_class inv(1);
    inv /= a[col][col];
    for (std::size_t c = col; c <= k; ++c) a[col][c] *= inv;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class factor = a[r][col];
      for (std::size_t c = col; c <= k; ++c) a[r][c] -= factor * a[col][c];
    }
  }

  SparsePoly out(impl.n);
  for (std::size_t c = 0; c < k; ++c) {
    const double value = a[c][k].get_d();
    if (std::abs(value) >= SparsePoly::kCoeffEps)
      out.set_coeff(impl.columns[c], value);
  }
  return out;
}

std::uint64_t exact_random_budget(int n, int d, double delta, double c) {
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("exact_random_budget: delta must be in (0,1)");
  const double k = static_cast<double>(binomial_sum(n, d));
  const double value = c * std::ldexp(1.0, d) * k * std::log(k / delta);
  if (value >= 1e18)
    throw std::overflow_error("exact_random_budget: beyond desk scale");
  return static_cast<std::uint64_t>(std::ceil(value));
}

ExactRandomOutcome exact_learn_random(QueryOracle& oracle, int n, int d,
                                      double delta, std::uint64_t seed,
                                      std::optional<std::uint64_t> budget,
                                      double c) {
  if (oracle.n() != n)
    throw std::invalid_argument("exact_learn_random: oracle dimension mismatch");
  const std::uint64_t max_draws =
      budget ? *budget : exact_random_budget(n, d, delta, c);

  ExactSolveState state(n, d);
  Rng rng(seed);
  ExactRandomOutcome outcome;
  outcome.budget = max_draws;
  std::uint64_t draws = 0;
  while (draws < max_draws && state.rank() < static_cast<int>(state.k())) {
    const CubePoint x = CubePoint::random(n, rng);
    const double y = oracle(x);
    ++draws;
    state.append(x, y);
  }
  outcome.queries_used = draws;
  outcome.rank_reached = state.rank();
  if (state.rank() == static_cast<int>(state.k())) outcome.poly = state.solve();
  return outcome;
}

double exact_random_failure_bound(std::uint64_t q, std::uint64_t k, int d) {
  if (q == 0) return 1.0;
  const double log_bound =
      static_cast<double>(k - 1) * std::log(2.0 * static_cast<double>(q)) +
      static_cast<double>(q) * std::log1p(-std::ldexp(1.0, -d));
  if (log_bound >= 0.0) return 1.0;
  return std::exp(log_bound);
}

}  // namespace lowdeg
