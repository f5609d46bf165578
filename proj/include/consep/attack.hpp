#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "consep/scores.hpp"
#include "consep/types.hpp"

namespace consep {

// Partition of dataset positions into a to-be-poisoned part and its clean
// complement; reunification restores original positions.
struct SplitPlan {
  std::vector<int> poison_indices;  // sorted ascending
  std::vector<int> clean_indices;   // sorted ascending
  int k = 0;
  std::uint64_t seed = 0;
};

enum class Placement { fixed, uniform_window };

// Patch transform plus constant target label.
struct TriggerSpec {
  std::vector<int> patch_coords;
  std::vector<double> patch_values;
  Placement placement = Placement::fixed;
  Label target_label = 0;
};

struct PoisonedDataset {
  LabeledDataset items;
  SplitPlan plan;
  TriggerSpec spec;
  double rate = 0.0;  // k / n
};

// Deterministic split: the first k positions matching the selector (all
// positions when the selector is empty).
SplitPlan split_first_k(int n, int k,
                        const std::function<bool(int)>& selector = {});

// k positions drawn uniformly without replacement; same seed, same plan.
SplitPlan split_uniform(int n, int k, std::uint64_t seed);

// Greedy surrogate for optimized poison selection: picks the k items whose
// leave-one-out p-value for the target label is highest, ties by position.
SplitPlan split_score_guided(const LabeledDataset& d, const ScoreModel& score,
                             Label target, int k);

// Overwrites the patch window (optionally shifted by a seeded uniform offset
// that keeps it inside [0, d)) and sets the target label.
std::pair<std::vector<double>, Label> apply_trigger(
    std::span<const double> x, Label y, const TriggerSpec& spec, int dim,
    std::uint64_t seed);

// Applies the trigger to exactly the planned positions, leaving every other
// item bit-identical to the source.
PoisonedDataset poison(const LabeledDataset& d, const SplitPlan& plan,
                       const TriggerSpec& spec, std::uint64_t seed);

// k = round(rate * n) clamped to [1, n-1]; rate must lie in (0, 1).
int poison_count_for_rate(double rate, int n);

}  // namespace consep
