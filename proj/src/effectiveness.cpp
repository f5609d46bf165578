#include "consep/effectiveness.hpp"

#include <algorithm>
#include <stdexcept>

namespace consep {

namespace {

void check_instance(const AttackInstance& a) {
  if (a.tau_d.empty() || a.tau_d.size() != a.tau_p.size())
    throw std::invalid_argument("attack instance expiry vectors must be nonempty and equal-length");
  const auto k = static_cast<Label>(a.tau_d.size());
  if (a.y < 0 || a.y >= k || a.t_y < 0 || a.t_y >= k)
    throw std::invalid_argument("attack instance labels out of range");
}

double at(const ExpiryVector& tau, Label y) {
  return tau[static_cast<std::size_t>(y)].value();
}

// max over all labels except t_y
double max_excluding(const ExpiryVector& tau, Label excluded) {
  double m = 0.0;
  for (std::size_t y = 0; y < tau.size(); ++y)
    if (static_cast<Label>(y) != excluded) m = std::max(m, tau[y].value());
  return m;
}

double max_all(const ExpiryVector& tau) {
  double m = 0.0;
  for (const PValue& p : tau) m = std::max(m, p.value());
  return m;
}

}  // namespace

bool is_non_trivial(const AttackInstance& a) {
  check_instance(a);
  return at(a.tau_d, a.t_y) < at(a.tau_d, a.y);
}

bool is_weakly_effective(const AttackInstance& a) {
  check_instance(a);
  return at(a.tau_p, a.y) < at(a.tau_p, a.t_y);
}

bool is_empirically_effective(const AttackInstance& a, double r) {
  check_instance(a);
  const bool re1 = at(a.tau_d, a.t_y) < std::min(r, at(a.tau_d, a.y));
  const bool re2 =
      max_excluding(a.tau_p, a.t_y) <= r && r < at(a.tau_p, a.t_y);
  return re1 && re2;
}

std::optional<DerivedR> derive_r(const AttackInstance& a, DeriveMode mode) {
  check_instance(a);
  if (!is_non_trivial(a)) return std::nullopt;

  const double pd_ty = at(a.tau_d, a.t_y);
  const double pd_y = at(a.tau_d, a.y);
  const double pp_ty = at(a.tau_p, a.t_y);
  const double max_p_other = max_excluding(a.tau_p, a.t_y);
  const double max_d = max_all(a.tau_d);

  const bool cond1 = max_p_other < pp_ty;
  const bool cond2 = max_d < pp_ty;

  switch (mode) {
    case DeriveMode::lemma: {
      if (!(cond1 && cond2)) return std::nullopt;
      const double r = std::max(pd_y, max_p_other);
      return DerivedR{r, r, r};
    }
    case DeriveMode::obs_i: {
      if (!(cond1 && cond2)) return std::nullopt;
      const double lo = std::max(pd_ty, max_p_other);
      const double hi = pp_ty;
      if (!(lo < hi)) return std::nullopt;
      return DerivedR{(lo + hi) / 2.0, lo, hi};
    }
    case DeriveMode::obs_ii: {
      if (!cond1 || !(pd_ty < max_p_other)) return std::nullopt;
      return DerivedR{max_p_other, max_p_other, max_p_other};
    }
    case DeriveMode::obs_iii: {
      if (!cond2 || !(max_p_other < pd_ty)) return std::nullopt;
      const double lo = pd_ty;
      const double hi = pp_ty;
      if (!(lo < hi)) return std::nullopt;
      return DerivedR{(lo + hi) / 2.0, lo, hi};
    }
  }
  return std::nullopt;
}

double effective_rate(std::span<const AttackInstance> instances, double r) {
  if (instances.empty())
    throw std::invalid_argument("effective_rate needs at least one instance");
  std::size_t hits = 0;
  for (const AttackInstance& a : instances)
    if (is_empirically_effective(a, r)) ++hits;
  return static_cast<double>(hits) / instances.size();
}

}  // namespace consep
