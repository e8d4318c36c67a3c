#include "lowdeg/function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lowdeg {

DenseFunction::DenseFunction(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (n < 0 || n > kMaxDenseDim)
    throw std::invalid_argument("DenseFunction: dimension out of range");
  if (values_.size() != (1ULL << n))
    throw std::invalid_argument("DenseFunction: table length != 2^n");
}

DenseFunction DenseFunction::constant(int n, double value) {
  return DenseFunction(n, std::vector<double>(1ULL << n, value));
}

double DenseFunction::operator()(const CubePoint& x) const {
  if (x.n() != n_) throw std::invalid_argument("DenseFunction: dimension mismatch");
  return values_[x.mask64()];
}

bool DenseFunction::is_boolean(double tol) const {
  for (double v : values_)
    if (std::abs(std::abs(v) - 1.0) > tol) return false;
  return true;
}

bool DenseFunction::is_bounded(double tol) const {
  for (double v : values_)
    if (std::abs(v) > 1.0 + tol) return false;
  return true;
}

double SparsePoly::coeff(const SubsetMask& s) const {
  require_dim(s.n());
  auto it = coeffs_.find(s);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void SparsePoly::set_coeff(const SubsetMask& s, double value) {
  require_dim(s.n());
  if (std::abs(value) < kCoeffEps)
    coeffs_.erase(s);
  else
    coeffs_[s] = value;
}

void SparsePoly::add_coeff(const SubsetMask& s, double value) {
  require_dim(s.n());
  set_coeff(s, coeff(s) + value);
}

int SparsePoly::degree() const {
  int deg = 0;
  for (const auto& [s, c] : coeffs_) deg = std::max(deg, s.cardinality());
  return deg;
}

double SparsePoly::parseval_mass() const {
  double total = 0.0;
  for (const auto& [s, c] : coeffs_) total += c * c;
  return total;
}

double SparsePoly::evaluate(const CubePoint& x) const {
  if (x.n() != n_) throw std::invalid_argument("SparsePoly: dimension mismatch");
  double total = 0.0;
  for (const auto& [s, c] : coeffs_) total += c * walsh_eval(s, x);
  return total;
}

double SparsePoly::fourier_tail(int d) const {
  double total = 0.0;
  for (const auto& [s, c] : coeffs_)
    if (s.cardinality() > d) total += c * c;
  return total;
}

double SparsePoly::concentration_residual(
    const std::vector<SubsetMask>& family) const {
  double total = 0.0;
  for (const auto& [s, c] : coeffs_) {
    bool in_family = false;
    for (const auto& member : family) {
      if (member == s) {
        in_family = true;
        break;
      }
    }
    if (!in_family) total += c * c;
  }
  return total;
}

SparsePoly SparsePoly::operator-(const SparsePoly& other) const {
  require_dim(other.n_);
  SparsePoly out = *this;
  for (const auto& [s, c] : other.coeffs_) out.add_coeff(s, -c);
  return out;
}

SparsePoly SparsePoly::operator+(const SparsePoly& other) const {
  require_dim(other.n_);
  SparsePoly out = *this;
  for (const auto& [s, c] : other.coeffs_) out.add_coeff(s, c);
  return out;
}

SparsePoly SparsePoly::scaled(double factor) const {
  SparsePoly out(n_);
  for (const auto& [s, c] : coeffs_) out.set_coeff(s, c * factor);
  return out;
}

void SparsePoly::require_dim(int dim) const {
  if (dim != n_) throw std::invalid_argument("SparsePoly: dimension mismatch");
}

nlohmann::json SparsePoly::to_json() const {
  // Terms sorted by (cardinality, lexicographic variable list).
  std::vector<std::pair<std::vector<int>, double>> terms;
  terms.reserve(coeffs_.size());
  for (const auto& [s, c] : coeffs_) terms.emplace_back(s.vars(), c);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [vars, value] : terms)
    arr.push_back({{"vars", vars}, {"value", value}});
  return {{"n", n_}, {"coeffs", arr}};
}

SparsePoly SparsePoly::from_json(const nlohmann::json& j) {
  SparsePoly p(j.at("n").get<int>());
  for (const auto& term : j.at("coeffs")) {
    const auto vars = term.at("vars").get<std::vector<int>>();
    p.set_coeff(SubsetMask::of_vars(p.n(), vars), term.at("value").get<double>());
  }
  return p;
}

void wht_in_place(std::vector<double>& values) {
  const std::size_t size = values.size();
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = values[i];
        const double b = values[i + half];
        values[i] = a + b;
        values[i + half] = a - b;
      }
    }
  }
}

SparsePoly wht(const DenseFunction& f) {
  std::vector<double> work = f.values();
  wht_in_place(work);
  const double norm = 1.0 / static_cast<double>(work.size());
  SparsePoly p(f.n());
  for (std::uint64_t mask = 0; mask < work.size(); ++mask) {
    const double c = work[mask] * norm;
    if (std::abs(c) >= SparsePoly::kCoeffEps)
      p.set_coeff(SubsetMask::from_mask(f.n(), mask), c);
  }
  return p;
}

DenseFunction densify(const SparsePoly& p) {
  if (p.n() > DenseFunction::kMaxDenseDim)
    throw std::invalid_argument("densify: dimension too large to enumerate");
  // Scatter coefficients into a table and run the (self-inverse up to
  // normalization) butterfly in the synthesis direction.
  std::vector<double> work(1ULL << p.n(), 0.0);
  for (const auto& [s, c] : p.coeffs()) work[s.mask64()] = c;
  wht_in_place(work);
  return DenseFunction(p.n(), std::move(work));
}

double poly_eval(const SparsePoly& p, const CubePoint& x) {
  return p.evaluate(x);
}

double l2_distance(const DenseFunction& f, const DenseFunction& g) {
  if (f.n() != g.n()) throw std::invalid_argument("l2_distance: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double diff = f.values()[i] - g.values()[i];
    total += diff * diff;
  }
  return std::sqrt(total / static_cast<double>(f.size()));
}

double l2_distance(const SparsePoly& f, const SparsePoly& g) {
  if (f.n() != g.n()) throw std::invalid_argument("l2_distance: dimension mismatch");
  // Parseval on the coefficient difference.
  return std::sqrt((f - g).parseval_mass());
}

double l2_distance(const SparsePoly& f, const DenseFunction& g) {
  if (f.n() != g.n()) throw std::invalid_argument("l2_distance: dimension mismatch");
  return l2_distance(densify(f), g);
}

double fourier_tail(const SparsePoly& p, int d) { return p.fourier_tail(d); }

double concentration_residual(const SparsePoly& p,
                              const std::vector<SubsetMask>& family) {
  return p.concentration_residual(family);
}

int degree(const SparsePoly& p) { return p.degree(); }

}  // namespace lowdeg
