#include "consep/synth.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "consep/rng.hpp"

namespace consep {

void MixtureSpec::validate() const {
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(separation > 0.0)) throw std::invalid_argument("separation must be positive");
  if (!(noise_sigma > 0.0)) throw std::invalid_argument("noise_sigma must be positive");
  if (!class_weights.empty()) {
    if (static_cast<int>(class_weights.size()) != num_classes)
      throw std::invalid_argument("class_weights length must equal num_classes");
    double sum = 0.0;
    for (double w : class_weights) {
      if (!(w > 0.0)) throw std::invalid_argument("class_weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("class_weights must sum to 1");
  }
}

std::vector<double> MixtureSpec::centroid(Label c) const {
  // Axis-aligned placement: |centroid_a - centroid_b| = separation for
  // distinct axes, so scale by separation / sqrt(2).
  std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
  const double mag = separation / std::sqrt(2.0);
  const int axis = c % dim;
  const double sign = (c / dim) % 2 == 0 ? 1.0 : -1.0;
  out[static_cast<std::size_t>(axis)] = sign * mag;
  return out;
}

LabeledDataset sample_dataset(const MixtureSpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("n must be >= 1");

  std::vector<double> cum(static_cast<std::size_t>(spec.num_classes));
  {
    double acc = 0.0;
    for (int c = 0; c < spec.num_classes; ++c) {
      acc += spec.class_weights.empty() ? 1.0 / spec.num_classes
                                        : spec.class_weights[static_cast<std::size_t>(c)];
      cum[static_cast<std::size_t>(c)] = acc;
    }
    cum.back() = 1.0;
  }

  Rng rng(seed);
  LabeledDataset d(spec.dim, spec.num_classes);
  d.reserve(static_cast<std::size_t>(n));
  std::vector<double> x(static_cast<std::size_t>(spec.dim));
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    Label c = 0;
    while (u >= cum[static_cast<std::size_t>(c)]) ++c;
    const std::vector<double> mu = spec.centroid(c);
    for (int j = 0; j < spec.dim; ++j)
      x[static_cast<std::size_t>(j)] =
          mu[static_cast<std::size_t>(j)] + spec.noise_sigma * rng.normal();
    d.push_back(x, c);
  }
  return d;
}

LabeledDataset permute(const LabeledDataset& d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = d.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(order[i - 1], order[j]);
  }
  LabeledDataset out(d.dim(), d.num_labels());
  out.reserve(d.size());
  for (std::size_t i : order) out.push_back(d.x(i), d.y(i));
  return out;
}

}  // namespace consep
