#include "consep/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "consep/core.hpp"
#include "consep/rng.hpp"

namespace consep {

namespace {

void check_split_args(int n, int k) {
  if (!(k > 0 && k < n))
    throw std::invalid_argument("split size must satisfy 0 < k < n");
}

SplitPlan plan_from_poison_set(int n, std::vector<int> poison, std::uint64_t seed) {
  std::sort(poison.begin(), poison.end());
  SplitPlan plan;
  plan.k = static_cast<int>(poison.size());
  plan.seed = seed;
  plan.poison_indices = std::move(poison);
  plan.clean_indices.reserve(n - plan.k);
  auto it = plan.poison_indices.begin();
  for (int i = 0; i < n; ++i) {
    if (it != plan.poison_indices.end() && *it == i)
      ++it;
    else
      plan.clean_indices.push_back(i);
  }
  return plan;
}

void check_window(const TriggerSpec& spec, int dim) {
  if (spec.patch_coords.size() != spec.patch_values.size())
    throw std::invalid_argument("patch coords and values must have equal length");
  if (spec.patch_coords.empty())
    throw std::invalid_argument("patch must cover at least one coordinate");
  for (int c : spec.patch_coords)
    if (c < 0 || c >= dim)
      throw std::invalid_argument("patch coordinate outside [0, dim)");
  for (double v : spec.patch_values)
    if (!std::isfinite(v))
      throw std::invalid_argument("patch values must be finite");
}

}  // namespace

SplitPlan split_first_k(int n, int k, const std::function<bool(int)>& selector) {
  check_split_args(n, k);
  std::vector<int> poison;
  poison.reserve(k);
  for (int i = 0; i < n && static_cast<int>(poison.size()) < k; ++i)
    if (!selector || selector(i)) poison.push_back(i);
  if (static_cast<int>(poison.size()) < k)
    throw std::invalid_argument("selector matched fewer than k positions");
  return plan_from_poison_set(n, std::move(poison), 0);
}

SplitPlan split_uniform(int n, int k, std::uint64_t seed) {
  check_split_args(n, k);
  Rng rng(seed);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return plan_from_poison_set(n, std::move(idx), seed);
}

SplitPlan split_score_guided(const LabeledDataset& d, const ScoreModel& score,
                             Label target, int k) {
  const int n = static_cast<int>(d.size());
  check_split_args(n, k);
  d.check_label(target);

  // leave-one-out p-value of (x_i, target)
  std::vector<double> pvals(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    LabeledDataset rest(d.dim(), d.num_labels());
    rest.reserve(d.size() - 1);
    for (std::size_t j = 0; j < d.size(); ++j)
      if (j != i) rest.push_back(d.x(j), d.y(j));
    pvals[i] = p_value(rest, score, d.x(i), target).value();
  }

  std::vector<int> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return pvals[a] > pvals[b]; });
  order.resize(k);
  return plan_from_poison_set(n, std::move(order), 0);
}

std::pair<std::vector<double>, Label> apply_trigger(std::span<const double> x,
                                                    Label y,
                                                    const TriggerSpec& spec,
                                                    int dim, std::uint64_t seed) {
  (void)y;
  check_window(spec, dim);
  int offset = 0;
  if (spec.placement == Placement::uniform_window) {
    const auto [lo_it, hi_it] =
        std::minmax_element(spec.patch_coords.begin(), spec.patch_coords.end());
    const int lo = *lo_it, hi = *hi_it;
    const int slack = (dim - 1 - hi) + lo;  // admissible offsets: [-lo, dim-1-hi]
    if (slack < 0) throw std::invalid_argument("patch window does not fit");
    Rng rng(seed);
    offset = -lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(slack) + 1));
  }
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < spec.patch_coords.size(); ++i)
    out[static_cast<std::size_t>(spec.patch_coords[i] + offset)] = spec.patch_values[i];
  return {std::move(out), spec.target_label};
}

PoisonedDataset poison(const LabeledDataset& d, const SplitPlan& plan,
                       const TriggerSpec& spec, std::uint64_t seed) {
  const int n = static_cast<int>(d.size());
  if (plan.k <= 0 || plan.k >= n ||
      static_cast<int>(plan.poison_indices.size()) != plan.k)
    throw std::invalid_argument("split plan does not match dataset size");
  for (int i : plan.poison_indices)
    if (i < 0 || i >= n)
      throw std::invalid_argument("split plan index out of range");
  d.check_label(spec.target_label);
  check_window(spec, d.dim());

  PoisonedDataset out{d, plan, spec, static_cast<double>(plan.k) / n};
  for (int i : plan.poison_indices) {
    auto [px, py] = apply_trigger(d.x(static_cast<std::size_t>(i)),
                                  d.y(static_cast<std::size_t>(i)), spec, d.dim(),
                                  mix_seed(seed, static_cast<std::uint64_t>(i)));
    auto row = out.items.mutable_x(static_cast<std::size_t>(i));
    std::copy(px.begin(), px.end(), row.begin());
    out.items.set_y(static_cast<std::size_t>(i), py);
  }
  return out;
}

int poison_count_for_rate(double rate, int n) {
  if (!(rate > 0.0 && rate < 1.0))
    throw std::invalid_argument("poison rate must lie in (0, 1)");
  const int k = static_cast<int>(std::lround(rate * n));
  return std::clamp(k, 1, n - 1);
}

}  // namespace consep
