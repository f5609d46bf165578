#include "consep/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "consep/simd/kernels.hpp"

namespace consep {

namespace {

constexpr double kProbClamp = 1e-12;

// Per-label centroids over the bag; count 0 marks a missing label.
struct Centroids {
  int dim;
  std::vector<double> sums;   // num_labels x dim
  std::vector<int> counts;

  std::span<const double> centroid(Label y) const {
    return {sums.data() + static_cast<std::size_t>(y) * dim,
            static_cast<std::size_t>(dim)};
  }
};

Centroids compute_centroids(const LabeledDataset& bag) {
  Centroids c{bag.dim(),
              std::vector<double>(static_cast<std::size_t>(bag.num_labels()) * bag.dim(), 0.0),
              std::vector<int>(bag.num_labels(), 0)};
  for (std::size_t i = 0; i < bag.size(); ++i) {
    const Label y = bag.y(i);
    std::span<double> sum{c.sums.data() + static_cast<std::size_t>(y) * c.dim,
                          static_cast<std::size_t>(c.dim)};
    simd::accumulate(sum, bag.x(i));
    ++c.counts[y];
  }
  for (Label y = 0; y < bag.num_labels(); ++y) {
    if (c.counts[y] == 0) continue;
    const double inv = 1.0 / c.counts[y];
    double* sum = c.sums.data() + static_cast<std::size_t>(y) * c.dim;
    for (int j = 0; j < c.dim; ++j) sum[j] *= inv;
  }
  return c;
}

double centroid_distance(const Centroids& c, std::span<const double> x, Label y) {
  if (c.counts[y] == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(simd::squared_distance(x, c.centroid(y)));
}

std::vector<double> proba_from_centroids(const Centroids& c, double beta,
                                         std::span<const double> x) {
  const int k = static_cast<int>(c.counts.size());
  std::vector<double> logits(k);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (Label y = 0; y < k; ++y) {
    logits[y] = (c.counts[y] == 0)
                    ? -std::numeric_limits<double>::infinity()
                    : -beta * std::sqrt(simd::squared_distance(x, c.centroid(y)));
    max_logit = std::max(max_logit, logits[y]);
  }
  std::vector<double> p(k, 0.0);
  double z = 0.0;
  for (Label y = 0; y < k; ++y) {
    if (std::isinf(logits[y])) continue;
    p[y] = std::exp(logits[y] - max_logit);
    z += p[y];
  }
  for (double& v : p) v /= z;
  return p;
}

double entropy_relative_from_proba(const std::vector<double>& s, Label y) {
  double entropy = 0.0;
  for (double v : s)
    if (v > 0.0) entropy -= v * std::log(v);
  const double sy = std::clamp(s[static_cast<std::size_t>(y)], kProbClamp, 1.0 - kProbClamp);
  return -entropy / (sy * std::log(sy));
}

}  // namespace

ScoreModel::Evaluator ScoreModel::prepare(const LabeledDataset& bag) const {
  return [this, &bag](std::span<const double> x, Label y) {
    return eval(bag, x, y);
  };
}

double CentroidScore::eval(const LabeledDataset& bag, std::span<const double> x,
                           Label y) const {
  bag.check_point(x);
  bag.check_label(y);
  return centroid_distance(compute_centroids(bag), x, y);
}

ScoreModel::Evaluator CentroidScore::prepare(const LabeledDataset& bag) const {
  auto centroids = std::make_shared<Centroids>(compute_centroids(bag));
  return [centroids](std::span<const double> x, Label y) {
    return centroid_distance(*centroids, x, y);
  };
}

InductiveScore::InductiveScore(std::shared_ptr<const ScoreModel> base,
                               LabeledDataset frozen)
    : base_(std::move(base)), frozen_(std::move(frozen)) {
  if (!base_) throw std::invalid_argument("inductive score needs a base score");
  if (frozen_.empty())
    throw std::invalid_argument("inductive score needs a nonempty frozen bag");
}

double InductiveScore::eval(const LabeledDataset& bag, std::span<const double> x,
                            Label y) const {
  (void)bag;  // discarded; symmetry is trivial
  return base_->eval(frozen_, x, y);
}

ScoreModel::Evaluator InductiveScore::prepare(const LabeledDataset& bag) const {
  (void)bag;
  return base_->prepare(frozen_);
}

std::vector<double> SoftmaxCentroidClassifier::predict_proba(
    std::span<const double> x) const {
  Centroids c{dim, centroids, std::vector<int>(num_labels, 0)};
  for (Label y = 0; y < num_labels; ++y) c.counts[y] = label_present[y] ? 1 : 0;
  return proba_from_centroids(c, beta, x);
}

SoftmaxCentroidClassifier fit_softmax_centroid(const LabeledDataset& d, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("softmax temperature must be positive");
  const Centroids c = compute_centroids(d);
  for (Label y = 0; y < d.num_labels(); ++y)
    if (c.counts[y] == 0)
      throw std::invalid_argument("cannot fit classifier: no items with label " +
                                  std::to_string(y));
  SoftmaxCentroidClassifier clf;
  clf.dim = d.dim();
  clf.num_labels = d.num_labels();
  clf.beta = beta;
  clf.centroids = c.sums;
  clf.label_present.assign(static_cast<std::size_t>(d.num_labels()), true);
  return clf;
}

double entropy_relative_score(const SoftmaxCentroidClassifier& clf,
                              std::span<const double> x, Label y) {
  if (y < 0 || y >= clf.num_labels) throw std::invalid_argument("label out of range");
  return entropy_relative_from_proba(clf.predict_proba(x), y);
}

EntropyRelativeScore::EntropyRelativeScore(double beta) : beta_(beta) {
  if (beta <= 0.0) throw std::invalid_argument("softmax temperature must be positive");
}

double EntropyRelativeScore::eval(const LabeledDataset& bag,
                                  std::span<const double> x, Label y) const {
  bag.check_point(x);
  bag.check_label(y);
  return entropy_relative_from_proba(
      proba_from_centroids(compute_centroids(bag), beta_, x), y);
}

ScoreModel::Evaluator EntropyRelativeScore::prepare(const LabeledDataset& bag) const {
  auto centroids = std::make_shared<Centroids>(compute_centroids(bag));
  const double beta = beta_;
  return [centroids, beta](std::span<const double> x, Label y) {
    return entropy_relative_from_proba(proba_from_centroids(*centroids, beta, x), y);
  };
}

std::shared_ptr<const ScoreModel> make_score(const std::string& kind) {
  if (kind == "centroid") return std::make_shared<CentroidScore>();
  if (kind == "entropy") return std::make_shared<EntropyRelativeScore>();
  throw std::invalid_argument("unknown score kind: " + kind +
                              " (expected centroid or entropy)");
}

}  // namespace consep
