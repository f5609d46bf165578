#include "consep/core.hpp"

#include <stdexcept>
#include <vector>

#include "consep/simd/kernels.hpp"

namespace consep {

namespace {

// p-value for the last item of an already-augmented bag.
PValue p_value_augmented(const LabeledDataset& augmented, const ScoreModel& score) {
  const std::size_t m = augmented.size();  // n + 1
  const auto ev = score.prepare(augmented);
  std::vector<double> scores(m);
  for (std::size_t i = 0; i < m; ++i)
    scores[i] = ev(augmented.x(i), augmented.y(i));
  const double test_score = scores[m - 1];
  const auto count = simd::count_ge(scores, test_score);
  return PValue{static_cast<int>(count), static_cast<int>(m)};
}

LabeledDataset make_augmented(const LabeledDataset& d, std::span<const double> x,
                              Label y) {
  if (d.empty()) throw std::invalid_argument("calibration dataset must be nonempty");
  d.check_point(x);
  d.check_label(y);
  LabeledDataset augmented = d;
  augmented.push_back(x, y);
  return augmented;
}

}  // namespace

namespace detail {

ExpiryVector expiry_on_augmented(LabeledDataset& augmented, const ScoreModel& score) {
  ExpiryVector out(static_cast<std::size_t>(augmented.num_labels()));
  const std::size_t last = augmented.size() - 1;
  for (Label y = 0; y < augmented.num_labels(); ++y) {
    augmented.set_y(last, y);
    out[static_cast<std::size_t>(y)] = p_value_augmented(augmented, score);
  }
  return out;
}

}  // namespace detail

PValue p_value(const LabeledDataset& d, const ScoreModel& score,
               std::span<const double> x, Label y) {
  const LabeledDataset augmented = make_augmented(d, x, y);
  return p_value_augmented(augmented, score);
}

ExpiryVector expiry(const LabeledDataset& d, const ScoreModel& score,
                    std::span<const double> x) {
  LabeledDataset augmented = make_augmented(d, x, 0);
  return detail::expiry_on_augmented(augmented, score);
}

PredictionSet prediction_set(const LabeledDataset& d, const ScoreModel& score,
                             std::span<const double> x, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  const ExpiryVector tau = expiry(d, score, x);
  PredictionSet set;
  set.epsilon = epsilon;
  for (Label y = 0; y < d.num_labels(); ++y)
    if (tau[static_cast<std::size_t>(y)].value() > epsilon) set.labels.push_back(y);
  return set;
}

Label conformal_classify(const LabeledDataset& d, const ScoreModel& score,
                         std::span<const double> x) {
  const ExpiryVector tau = expiry(d, score, x);
  Label best = 0;
  for (Label y = 1; y < d.num_labels(); ++y)
    if (tau[static_cast<std::size_t>(y)] > tau[static_cast<std::size_t>(best)]) best = y;
  return best;
}

}  // namespace consep
