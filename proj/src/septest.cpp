#include "consep/septest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "consep/core.hpp"

namespace consep {

SeparabilityScore separability_test(const LabeledDataset& d1,
                                    const LabeledDataset& d2,
                                    const ScoreModel& score,
                                    std::span<const double> x) {
  if (d1.empty() || d2.empty())
    throw std::invalid_argument("both datasets must be nonempty");
  if (d1.dim() != d2.dim())
    throw std::invalid_argument("datasets have mismatched feature dimensions");
  if (d1.num_labels() != d2.num_labels())
    throw std::invalid_argument("datasets have mismatched label alphabets");
  d1.check_point(x);

  const ExpiryVector tau1 = expiry(d1, score, x);
  const ExpiryVector tau2 = expiry(d2, score, x);

  SeparabilityScore out;
  out.per_label.reserve(tau1.size());
  for (std::size_t y = 0; y < tau1.size(); ++y) {
    out.per_label.emplace_back(tau1[y], tau2[y]);
    const double lo = std::min(tau1[y].value(), tau2[y].value());
    out.p_cap = std::max(out.p_cap, lo);
  }
  return out;
}

Detection detect_from_score(const SeparabilityScore& s, double epsilon) {
  return s.p_cap <= epsilon ? Detection::positive : Detection::negative;
}

Detection detect(const LabeledDataset& d1, const LabeledDataset& d2,
                 const ScoreModel& score, std::span<const double> x,
                 double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  return detect_from_score(separability_test(d1, d2, score, x), epsilon);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty())
    throw std::invalid_argument("empirical CDF needs at least one sample");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double t) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
  return static_cast<double>(it - samples_.begin()) / samples_.size();
}

EmpiricalCdf min_pvalue_cdf(std::span<const SeparabilityScore> samples) {
  if (samples.empty())
    throw std::invalid_argument("empirical CDF needs at least one sample");
  std::vector<double> values;
  values.reserve(samples.size());
  for (const SeparabilityScore& s : samples) values.push_back(s.p_cap);
  return EmpiricalCdf(std::move(values));
}

double sup_deviation(const EmpiricalCdf& f, const EmpiricalCdf& g) {
  double sup = 0.0;
  for (double t : f.sorted_samples()) sup = std::max(sup, std::abs(f(t) - g(t)));
  for (double t : g.sorted_samples()) sup = std::max(sup, std::abs(f(t) - g(t)));
  return sup;
}

double dkw_band(std::size_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace consep
