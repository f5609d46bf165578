#pragma once

#include <span>
#include <utility>
#include <vector>

#include "consep/scores.hpp"
#include "consep/types.hpp"

namespace consep {

// Output of the separability test: per-label p-value pairs and
// p_cap = max_y min(p1[y], p2[y]).
struct SeparabilityScore {
  double p_cap = 0.0;
  std::vector<std::pair<PValue, PValue>> per_label;
};

SeparabilityScore separability_test(const LabeledDataset& d1,
                                    const LabeledDataset& d2,
                                    const ScoreModel& score,
                                    std::span<const double> x);

enum class Detection { positive, negative };

// Positive iff p_cap <= epsilon: the two epsilon-level prediction sets have
// empty intersection (set membership is strict p > epsilon).
Detection detect(const LabeledDataset& d1, const LabeledDataset& d2,
                 const ScoreModel& score, std::span<const double> x,
                 double epsilon);

Detection detect_from_score(const SeparabilityScore& s, double epsilon);

// Right-continuous empirical CDF: F(t) = (#samples <= t) / n.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double t) const;
  std::size_t n() const { return samples_.size(); }
  const std::vector<double>& sorted_samples() const { return samples_; }

 private:
  std::vector<double> samples_;  // nondecreasing
};

EmpiricalCdf min_pvalue_cdf(std::span<const SeparabilityScore> samples);

// sup_t |F(t) - G(t)|, evaluated across both jump sets.
double sup_deviation(const EmpiricalCdf& f, const EmpiricalCdf& g);

// DKW radius sqrt(ln(2/alpha) / (2n)).
double dkw_band(std::size_t n, double alpha);

}  // namespace consep
