#include "lowdeg/random_learners.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lowdeg/combinatorics.hpp"
#include "spectrum_scan.hpp"

namespace lowdeg {

namespace {

// Natural log throughout: the Chernoff bound behind these counts is
// exponential, so the log in each count formula is base e.
std::uint64_t ceil_to_count(double value, const char* what) {
  if (!(value > 0.0))
    throw std::invalid_argument(std::string(what) + ": non-positive count");
  if (value >= 1e18)
    throw std::overflow_error(std::string(what) + ": count beyond desk scale");
  return static_cast<std::uint64_t>(std::ceil(value));
}

std::vector<double> query_all(QueryOracle& oracle,
                              const std::vector<CubePoint>& samples) {
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& x : samples) values.push_back(oracle(x));
  return values;
}

SparsePoly build_hypothesis(int n,
                            const std::vector<std::pair<SubsetMask, double>>&
                                survivors) {
  SparsePoly h(n);
  for (const auto& [s, alpha] : survivors) h.set_coeff(s, alpha);
  return h;
}

LearnReport run_thresholded(QueryOracle& oracle, const ThresholdConfig& cfg,
                            std::uint64_t seed, std::uint64_t sample_count) {
  cfg.validate();
  if (oracle.n() != cfg.n)
    throw std::invalid_argument("learn_sparse: oracle dimension mismatch");
  const double b = cfg.b();
  const auto samples = draw_samples(cfg.n, sample_count, seed);
  const auto values = query_all(oracle, samples);

  std::vector<std::pair<SubsetMask, double>> survivors;
  if (cfg.family) {
    for (const auto& s : *cfg.family) {
      double sum = 0.0;
      for (std::size_t j = 0; j < samples.size(); ++j)
        sum += values[j] * walsh_eval(s, samples[j]);
      const double alpha = sum / static_cast<double>(samples.size());
      if (std::abs(alpha) >= 2.0 * b) survivors.emplace_back(s, alpha);
    }
  } else {
    survivors =
        internal::scan_select(cfg.n, cfg.d, samples, values, 2.0 * b)
            .survivors;
  }

  LearnReport report;
  report.queries_used = samples.size();
  report.b = b;
  report.seed = seed;
  report.hypothesis = build_hypothesis(cfg.n, survivors);
  report.selected.reserve(survivors.size());
  for (const auto& [s, alpha] : survivors) report.selected.push_back(s);
  return report;
}

}  // namespace

double ThresholdConfig::b() const {
  if (b_override) {
    if (*b_override <= 0.0)
      throw std::invalid_argument("ThresholdConfig: b must be positive");
    return *b_override;
  }
  if (m < 1.0)
    throw std::invalid_argument("ThresholdConfig: m >= 1 required to derive b");
  return std::sqrt(eps / (9.0 * m));
}

void ThresholdConfig::validate() const {
  if (n < 1 || d < 0 || d > n)
    throw std::invalid_argument("ThresholdConfig: need n >= 1, 0 <= d <= n");
  if (eps <= 0.0 || eps >= 1.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("ThresholdConfig: eps, delta must be in (0,1)");
  (void)b();
}

double junta_m_preset(int k, int d) {
  return static_cast<double>(binomial_sum(k, std::min(d, k)));
}

std::uint64_t required_samples(double b, int n, int d, double delta) {
  if (b <= 0.0) throw std::invalid_argument("required_samples: b must be > 0");
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("required_samples: delta must be in (0,1)");
  if (d < 0 || d > n)
    throw std::invalid_argument("required_samples: need 0 <= d <= n");
  const double binsum = static_cast<double>(binomial_sum(n, d));
  const double value = (2.0 / (b * b)) * std::log((2.0 / delta) * binsum);
  return ceil_to_count(value, "required_samples");
}

std::uint64_t lmn_samples(int n, int d, double eps, double delta) {
  if (eps <= 0.0 || eps >= 1.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("lmn_samples: eps, delta must be in (0,1)");
  double nd = 1.0;
  for (int i = 0; i < d; ++i) {
    nd *= static_cast<double>(n);
    if (nd > 1e18) throw std::overflow_error("lmn_samples: n^d overflow");
  }
  const double value = (2.0 * nd / eps) * std::log(2.0 * nd / delta);
  return ceil_to_count(value, "lmn_samples");
}

std::vector<CubePoint> draw_samples(int n, std::uint64_t count,
                                    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CubePoint> samples;
  samples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    samples.push_back(CubePoint::random(n, rng));
  return samples;
}

std::map<SubsetMask, double> estimate_spectrum(
    QueryOracle& oracle, const std::vector<CubePoint>& samples, int d) {
  if (samples.empty())
    throw std::invalid_argument("estimate_spectrum: no samples");
  const int n = oracle.n();
  const auto values = query_all(oracle, samples);
  const auto alpha = internal::scan_dense(n, d, samples, values);
  const auto subsets = subsets_up_to_degree(n, d, internal::kDenseScanLimit);
  std::map<SubsetMask, double> out;
  for (std::size_t i = 0; i < subsets.size(); ++i) out[subsets[i]] = alpha[i];
  return out;
}

std::map<SubsetMask, double> estimate_spectrum(
    QueryOracle& oracle, const std::vector<CubePoint>& samples,
    const std::vector<SubsetMask>& family) {
  if (samples.empty())
    throw std::invalid_argument("estimate_spectrum: no samples");
  const auto values = query_all(oracle, samples);
  std::map<SubsetMask, double> out;
  for (const auto& s : family) {
    double sum = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j)
      sum += values[j] * walsh_eval(s, samples[j]);
    out[s] = sum / static_cast<double>(samples.size());
  }
  return out;
}

std::vector<SubsetMask> threshold_select(
    const std::map<SubsetMask, double>& alpha, double b) {
  if (b <= 0.0) throw std::invalid_argument("threshold_select: b must be > 0");
  std::vector<SubsetMask> out;
  for (const auto& [s, a] : alpha)
    if (std::abs(a) >= 2.0 * b) out.push_back(s);
  return out;
}

LearnReport learn_sparse(QueryOracle& oracle, const ThresholdConfig& cfg,
                         std::uint64_t seed) {
  cfg.validate();
  const std::uint64_t q = required_samples(cfg.b(), cfg.n, cfg.d, cfg.delta);
  return run_thresholded(oracle, cfg, seed, q);
}

LearnReport learn_sparse_with_samples(QueryOracle& oracle,
                                      const ThresholdConfig& cfg,
                                      std::uint64_t seed,
                                      std::uint64_t sample_count) {
  if (sample_count == 0)
    throw std::invalid_argument("learn_sparse_with_samples: empty sample set");
  return run_thresholded(oracle, cfg, seed, sample_count);
}

LearnReport learn_lowdegree_lmn(QueryOracle& oracle, int n, int d, double eps,
                                double delta, std::uint64_t seed) {
  if (oracle.n() != n)
    throw std::invalid_argument("learn_lowdegree_lmn: oracle dimension mismatch");
  const std::uint64_t q = lmn_samples(n, d, eps, delta);
  const auto samples = draw_samples(n, q, seed);
  const auto values = query_all(oracle, samples);
  const auto alpha = internal::scan_dense(n, d, samples, values);
  const auto subsets = subsets_up_to_degree(n, d, internal::kDenseScanLimit);

  LearnReport report;
  report.queries_used = samples.size();
  report.b = 0.0;
  report.seed = seed;
  report.hypothesis = SparsePoly(n);
  for (std::size_t i = 0; i < subsets.size(); ++i)
    report.hypothesis.set_coeff(subsets[i], alpha[i]);
  return report;
}

nlohmann::json LearnReport::to_json() const {
  nlohmann::json sel = nlohmann::json::array();
  for (const auto& s : selected) sel.push_back(s.vars());
  return {{"queries_used", queries_used},
          {"b", b},
          {"selected", sel},
          {"hypothesis", hypothesis.to_json()},
          {"seed", seed}};
}

}  // namespace lowdeg
