#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "consep/types.hpp"

namespace consep {

// Non-conformity score: A(bag, x, y) -> real, symmetric under permutations of
// the bag.  prepare() returns an evaluator bound to a fixed bag so repeated
// candidate evaluations can reuse per-bag state (centroids, fitted
// classifier); it must agree exactly with eval() on the same bag.
class ScoreModel {
 public:
  using Evaluator = std::function<double(std::span<const double>, Label)>;

  virtual ~ScoreModel() = default;
  virtual double eval(const LabeledDataset& bag, std::span<const double> x,
                      Label y) const = 0;
  virtual Evaluator prepare(const LabeledDataset& bag) const;
};

// Distance from x to the centroid of the bag items carrying label y
// (Euclidean metric for every label).  No bag item with label y ->
// +infinity sentinel (maximal non-conformity).
class CentroidScore final : public ScoreModel {
 public:
  double eval(const LabeledDataset& bag, std::span<const double> x,
              Label y) const override;
  Evaluator prepare(const LabeledDataset& bag) const override;
};

// Evaluates the base score against a frozen calibration bag, discarding the
// bag argument; symmetric by construction.
class InductiveScore final : public ScoreModel {
 public:
  InductiveScore(std::shared_ptr<const ScoreModel> base, LabeledDataset frozen);
  double eval(const LabeledDataset& bag, std::span<const double> x,
              Label y) const override;
  Evaluator prepare(const LabeledDataset& bag) const override;

  const LabeledDataset& frozen() const { return frozen_; }

 private:
  std::shared_ptr<const ScoreModel> base_;
  LabeledDataset frozen_;
};

// Temperature softmax over negated centroid distances; the plug-in
// probabilistic classifier behind the entropy-relative score.
struct SoftmaxCentroidClassifier {
  int dim = 0;
  int num_labels = 0;
  double beta = 0.0;
  std::vector<double> centroids;    // flat, num_labels x dim
  std::vector<bool> label_present;  // labels absent from the fit get probability 0

  // P(y | x)_y = softmax_y(-beta * ||x - centroid_y||)
  std::vector<double> predict_proba(std::span<const double> x) const;
};

// Requires every label to appear in D at least once.
SoftmaxCentroidClassifier fit_softmax_centroid(const LabeledDataset& d, double beta);

// -entropy(s) / (s_y * ln s_y), with s = predict_proba(x) and s_y clamped to
// [1e-12, 1 - 1e-12] before the division.
double entropy_relative_score(const SoftmaxCentroidClassifier& clf,
                              std::span<const double> x, Label y);

// Full (transductive) score: fits the softmax-centroid classifier on the bag
// it is given, then applies entropy_relative_score.  Labels missing from the
// bag get probability 0 (clamped); the fit is permutation-invariant.
class EntropyRelativeScore final : public ScoreModel {
 public:
  explicit EntropyRelativeScore(double beta = 4.0);
  double eval(const LabeledDataset& bag, std::span<const double> x,
              Label y) const override;
  Evaluator prepare(const LabeledDataset& bag) const override;

  double beta() const { return beta_; }

 private:
  double beta_;
};

std::shared_ptr<const ScoreModel> make_score(const std::string& kind);

}  // namespace consep
