#ifndef LOWDEG_FUNCTION_HPP
#define LOWDEG_FUNCTION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lowdeg/bits.hpp"

namespace lowdeg {

// Truth table of f: {-1,1}^n -> R, indexed by the CubePoint mask.
// Enumeration is capped at n <= 24 to keep full-table work desk-sized.
class DenseFunction {
 public:
  static constexpr int kMaxDenseDim = 24;

  DenseFunction(int n, std::vector<double> values);

  static DenseFunction constant(int n, double value);

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }

  double at_mask(std::uint64_t mask) const { return values_[mask]; }
  double& at_mask(std::uint64_t mask) { return values_[mask]; }
  double operator()(const CubePoint& x) const;

  const std::vector<double>& values() const { return values_; }

  bool is_boolean(double tol = 0.0) const;
  bool is_bounded(double tol = 0.0) const;

 private:
  int n_;
  std::vector<double> values_;
};

// Finite Walsh expansion: map from subset masks to real coefficients.
// Exact zeros are omitted; inserted coefficients below kCoeffEps in
// magnitude are dropped so "exact zero" stays meaningful in floats.
class SparsePoly {
 public:
  static constexpr double kCoeffEps = 1e-15;

  SparsePoly() : n_(0) {}
  explicit SparsePoly(int n) : n_(n) {}

  int n() const { return n_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t term_count() const { return coeffs_.size(); }

  double coeff(const SubsetMask& s) const;
  void set_coeff(const SubsetMask& s, double value);
  void add_coeff(const SubsetMask& s, double value);

  const std::map<SubsetMask, double>& coeffs() const { return coeffs_; }

  int degree() const;
  double parseval_mass() const;

  double evaluate(const CubePoint& x) const;

  // Sum of squared coefficients with |S| > d.
  double fourier_tail(int d) const;

  // Sum of squared coefficients outside the given family.
  double concentration_residual(const std::vector<SubsetMask>& family) const;

  SparsePoly operator-(const SparsePoly& other) const;
  SparsePoly operator+(const SparsePoly& other) const;
  SparsePoly scaled(double factor) const;

  nlohmann::json to_json() const;
  static SparsePoly from_json(const nlohmann::json& j);

  bool operator==(const SparsePoly&) const = default;

 private:
  void require_dim(int dim) const;

  int n_;
  std::map<SubsetMask, double> coeffs_;
};

// Walsh-Hadamard analysis transform: coefficient at S is E_x[f(x) w_S(x)].
// In-place butterfly with the 2^{-n} normalization applied on this forward
// direction, so wht(densify(p)) reproduces p.
SparsePoly wht(const DenseFunction& f);

// Raw transform on a value vector of length 2^n (no sparsification).
void wht_in_place(std::vector<double>& values);

DenseFunction densify(const SparsePoly& p);

double poly_eval(const SparsePoly& p, const CubePoint& x);

// L2 distance sqrt(E[(f-g)^2]) in each representation pairing.
double l2_distance(const DenseFunction& f, const DenseFunction& g);
double l2_distance(const SparsePoly& f, const SparsePoly& g);
double l2_distance(const SparsePoly& f, const DenseFunction& g);
inline double l2_distance(const DenseFunction& f, const SparsePoly& g) {
  return l2_distance(g, f);
}

double fourier_tail(const SparsePoly& p, int d);
double concentration_residual(const SparsePoly& p,
                              const std::vector<SubsetMask>& family);
int degree(const SparsePoly& p);

}  // namespace lowdeg

#endif  // LOWDEG_FUNCTION_HPP
