#include "lowdeg/bounds.hpp"

#include <cmath>

#include "lowdeg/combinatorics.hpp"

namespace lowdeg {

namespace {

void require(bool cond, const char* message) {
  if (!cond) throw std::invalid_argument(message);
}

double checked_pow_nd(int n, int d) {
  double nd = 1.0;
  for (int i = 0; i < d; ++i) {
    nd *= static_cast<double>(n);
    if (nd > 1e300) throw std::overflow_error("q_upper: n^d overflow");
  }
  return nd;
}

}  // namespace

double q_lower(const BoundParams& p, bool randomized) {
  require(p.n >= 1 && p.d >= 1 && p.d <= p.n, "q_lower: need 1 <= d <= n");
  require(p.eps >= 0.0 && p.eps < 1.0, "q_lower: eps in [0,1)");
  const double pow_d = std::ldexp(1.0, p.d - 2);
  const double entropy_branch = (1.0 - std::sqrt(p.eps)) * pow_d * std::log2(p.n) -
                                (p.d + 1) * pow_d;
  const double walsh_branch =
      p.d * std::log2(static_cast<double>(p.n) / p.d);
  double bound = std::max(entropy_branch, walsh_branch);
  if (randomized) {
    require(p.delta > 0.0 && p.delta < 1.0, "q_lower: delta in (0,1)");
    bound += std::log2(1.0 - p.delta);
  }
  return bound;
}

double q_upper(const std::string& kind, const BoundParams& p) {
  if (kind == "lmn") {
    // ceil((2 n^d / eps) ln(2 n^d / delta)); natural log. Kinds that are
    // sample counts (lmn, thresholded, junta) carry the ceiling; the
    // asymptotic bounds stay literal.
    require(p.eps > 0.0 && p.delta > 0.0, "lmn: eps, delta > 0");
    const double nd = checked_pow_nd(p.n, p.d);
    return std::ceil((2.0 * nd / p.eps) * std::log(2.0 * nd / p.delta));
  }
  if (kind == "ei") {
    // min{exp(C d^{3/2} sqrt(ln d)) / eps^{d+1}, 4 d n^d / eps} ln(n/delta).
    require(p.d >= 1, "ei: d >= 1");
    const double c = p.constant("C_ei");
    const double expo = std::exp(c * std::pow(static_cast<double>(p.d), 1.5) *
                                 std::sqrt(std::log(static_cast<double>(p.d))));
    const double first = expo / std::pow(p.eps, p.d + 1);
    const double second = 4.0 * p.d * checked_pow_nd(p.n, p.d) / p.eps;
    return std::min(first, second) * std::log(p.n / p.delta);
  }
  if (kind == "ei2") {
    // e^8 d^2 / eps^{d+1} * B_d^{2d} * ln(n/delta).
    require(p.bh_const >= 1.0, "ei2: Bohnenblust-Hille estimate >= 1 required");
    return std::exp(8.0) * p.d * p.d / std::pow(p.eps, p.d + 1) *
           std::pow(p.bh_const, 2.0 * p.d) * std::log(p.n / p.delta);
  }
  if (kind == "thresholded") {
    // ceil(18 m / eps * ln((2/delta) sum_{r<=d} C(n,r))); natural log.
    require(p.m >= 1.0, "thresholded: m >= 1");
    const double binsum = static_cast<double>(binomial_sum(p.n, p.d));
    return std::ceil(18.0 * p.m / p.eps *
                     std::log((2.0 / p.delta) * binsum));
  }
  if (kind == "junta") {
    // ceil(18/eps sum_{r<=min(d,k)} C(k,r) * ln((2/delta) sum C(n,r))).
    const int dd = std::min(p.d, p.k);
    const double m = static_cast<double>(binomial_sum(p.k, dd));
    const double binsum = static_cast<double>(binomial_sum(p.n, dd));
    return std::ceil(18.0 / p.eps * m * std::log((2.0 / p.delta) * binsum));
  }
  if (kind == "boolean") {
    // 36 d 2^{d^2} / eps * ln(n/delta).
    return 36.0 * p.d * std::exp2(static_cast<double>(p.d) * p.d) / p.eps *
           std::log(p.n / p.delta);
  }
  if (kind == "robust") {
    // 2^{C d^2} / (eta^{2d} eps) * ln(n/delta).
    const double c = p.constant("C_robust");
    require(p.eta > 0.0, "robust: eta > 0");
    return std::exp2(c * p.d * p.d) /
           (std::pow(p.eta, 2.0 * p.d) * p.eps) * std::log(p.n / p.delta);
  }
  if (kind == "robust_boolean") {
    // 2^{C d^2} / eps * ln(n/delta); the eta >= t^{1+o(1)} d^{1/2+o(1)}
    // hypothesis uses the caller's o(1) exponents and is profile-dependent.
    const double c = p.constant("C_robust_boolean");
    return std::exp2(c * p.d * p.d) / p.eps * std::log(p.n / p.delta);
  }
  if (kind == "circuits") {
    // exp((C ln(s/eps))^{d-2} ln s ln(1/eps)) * ln(n/delta).
    const double c = p.constant("C_circuits");
    require(p.s > 1.0, "circuits: s > 1");
    const double inner = std::pow(c * std::log(p.s / p.eps), p.d - 2) *
                         std::log(p.s) * std::log(1.0 / p.eps);
    if (inner > 700.0) throw std::overflow_error("circuits: bound overflows");
    return std::exp(inner) * std::log(p.n / p.delta);
  }
  if (kind == "dfko_remark") {
    // 2^{C d^2} / eps^{2d+1} * ln(n/delta).
    const double c = p.constant("C_dfko");
    return std::exp2(c * p.d * p.d) / std::pow(p.eps, 2.0 * p.d + 1.0) *
           std::log(p.n / p.delta);
  }
  if (kind == "exact_rand") {
    // C d 2^d n^d ln(n/delta).
    const double c = p.constant("C_exact_rand");
    return c * p.d * std::ldexp(1.0, p.d) * checked_pow_nd(p.n, p.d) *
           std::log(p.n / p.delta);
  }
  throw std::invalid_argument("q_upper: unknown kind '" + kind + "'");
}

std::uint64_t q_exact(int n, int d) {
  require(d >= 0 && d <= n, "q_exact: need 0 <= d <= n");
  return binomial_sum(n, d);
}

double bh_subset_bound(int d, double eps, double b_d) {
  require(d >= 0, "bh_subset_bound: d >= 0");
  require(b_d >= 1.0, "bh_subset_bound: B_d >= 1 required");
  if (d == 0) return 1.0;
  require(eps > 0.0, "bh_subset_bound: eps > 0");
  return std::pow(b_d, 2.0 * d) / std::pow(eps, d);
}

}  // namespace lowdeg
