#pragma once

#include <span>

#include "consep/scores.hpp"
#include "consep/types.hpp"

namespace consep {

// Conformal p-value of candidate (x, y) against calibration data d: the bag
// is augmented with the candidate and the count runs over all n+1 items of
// the augmented bag (the candidate included, so the result is >= 1/(n+1)).
// Ties in scores count via >=.
PValue p_value(const LabeledDataset& d, const ScoreModel& score,
               std::span<const double> x, Label y);

// p_value for every label of the alphabet at input x.
ExpiryVector expiry(const LabeledDataset& d, const ScoreModel& score,
                    std::span<const double> x);

// Labels with p-value strictly above epsilon.  May be empty.
PredictionSet prediction_set(const LabeledDataset& d, const ScoreModel& score,
                             std::span<const double> x, double epsilon);

// argmax_y p-value; ties broken by lowest label id.
Label conformal_classify(const LabeledDataset& d, const ScoreModel& score,
                         std::span<const double> x);

namespace detail {

// Expiry computed on a caller-provided augmented bag whose last item is the
// test point; relabels the last item per candidate label in place.
ExpiryVector expiry_on_augmented(LabeledDataset& augmented, const ScoreModel& score);

}  // namespace detail

}  // namespace consep
