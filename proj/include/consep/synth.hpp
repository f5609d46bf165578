#pragma once

#include <cstdint>
#include <vector>

#include "consep/types.hpp"

namespace consep {

// Isotropic Gaussian mixture: one centroid per class, pairwise-equidistant
// along coordinate axes, IID draws (hence exchangeable).
struct MixtureSpec {
  int num_classes = 4;
  int dim = 16;
  double separation = 4.0;   // inter-centroid distance
  double noise_sigma = 1.0;
  std::vector<double> class_weights;  // empty = uniform

  void validate() const;
  // Centroid of class c; axis e_{c mod dim}, sign flipped on wrap.
  std::vector<double> centroid(Label c) const;
};

LabeledDataset sample_dataset(const MixtureSpec& spec, int n, std::uint64_t seed);

// Uniform random permutation of item order; item multiset unchanged.
LabeledDataset permute(const LabeledDataset& d, std::uint64_t seed);

}  // namespace consep
