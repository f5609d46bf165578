#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace consep {

using Label = int;

// Exact conformal p-value k/(n+1), k in [1, n+1].
struct PValue {
  int count = 0;  // numerator k
  int denom = 0;  // n + 1

  double value() const { return static_cast<double>(count) / denom; }

  friend bool operator==(const PValue& a, const PValue& b) {
    return a.count == b.count && a.denom == b.denom;
  }
};

inline bool operator<(const PValue& a, const PValue& b) {
  // cross-multiplied exact comparison; denominators are small ints
  return static_cast<long long>(a.count) * b.denom <
         static_cast<long long>(b.count) * a.denom;
}
inline bool operator>(const PValue& a, const PValue& b) { return b < a; }

// p-value per label at a fixed input, indexed by label id.
using ExpiryVector = std::vector<PValue>;

struct PredictionSet {
  std::vector<Label> labels;  // sorted ascending
  double epsilon = 0.0;

  bool contains(Label y) const {
    for (Label l : labels)
      if (l == y) return true;
    return false;
  }
};

// Ordered multiset of (feature vector, label) pairs with a shared dimension
// and a contiguous 0-based label alphabet of size num_labels.  Features are
// stored row-major in one flat buffer.
class LabeledDataset {
 public:
  LabeledDataset(int dim, int num_labels) : dim_(dim), num_labels_(num_labels) {
    if (dim <= 0) throw std::invalid_argument("dataset dimension must be positive");
    if (num_labels < 2) throw std::invalid_argument("label alphabet needs at least 2 labels");
  }

  int dim() const { return dim_; }
  int num_labels() const { return num_labels_; }
  std::size_t size() const { return ys_.size(); }
  bool empty() const { return ys_.empty(); }

  std::span<const double> x(std::size_t i) const {
    return {xs_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  std::span<double> mutable_x(std::size_t i) {
    return {xs_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  Label y(std::size_t i) const { return ys_[i]; }
  void set_y(std::size_t i, Label y) {
    check_label(y);
    ys_[i] = y;
  }

  void push_back(std::span<const double> x, Label y) {
    if (static_cast<int>(x.size()) != dim_)
      throw std::invalid_argument("feature vector dimension mismatch");
    check_label(y);
    for (double v : x)
      if (!std::isfinite(v))
        throw std::invalid_argument("feature vector entries must be finite");
    xs_.insert(xs_.end(), x.begin(), x.end());
    ys_.push_back(y);
  }

  void reserve(std::size_t n) {
    xs_.reserve(n * static_cast<std::size_t>(dim_));
    ys_.reserve(n);
  }

  void check_label(Label y) const {
    if (y < 0 || y >= num_labels_)
      throw std::invalid_argument("label out of range");
  }
  void check_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
      throw std::invalid_argument("feature vector dimension mismatch");
  }

  friend bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
    return a.dim_ == b.dim_ && a.num_labels_ == b.num_labels_ &&
           a.xs_ == b.xs_ && a.ys_ == b.ys_;
  }

 private:
  int dim_;
  int num_labels_;
  std::vector<double> xs_;
  std::vector<Label> ys_;
};

}  // namespace consep
