#pragma once

#include <optional>
#include <span>

#include "consep/types.hpp"

namespace consep {

// Clean and poisoned expiry vectors at the triggered input, with the original
// label y and the attack's target label t_y.
struct AttackInstance {
  ExpiryVector tau_d;  // expiry at t_x for the clean dataset
  ExpiryVector tau_p;  // expiry at t_x for the poisoned dataset
  Label y = 0;
  Label t_y = 0;
};

// tau_d[t_y] < tau_d[y], strictly.
bool is_non_trivial(const AttackInstance& a);

// tau_p[y] < tau_p[t_y], strictly.
bool is_weakly_effective(const AttackInstance& a);

// [re.1]: tau_d[t_y] < min(r, tau_d[y])
// [re.2]: max_{y' != t_y} tau_p[y'] <= r < tau_p[t_y]
// Boundary note: [re.2] admits tau_p[y'] = r on the left, strict on the right.
bool is_empirically_effective(const AttackInstance& a, double r);

enum class DeriveMode { lemma, obs_i, obs_ii, obs_iii };

// Admissible poison level; interval modes carry their open-interval endpoints
// and return the midpoint as r, point modes have lo == r == hi.
struct DerivedR {
  double r = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Returns an r whose empirical (1-r)-effectiveness is guaranteed by the
// selected derivation, or nullopt when that derivation's hypotheses fail.
std::optional<DerivedR> derive_r(const AttackInstance& a, DeriveMode mode);

// Fraction of instances empirically (1-r)-effective.
double effective_rate(std::span<const AttackInstance> instances, double r);

}  // namespace consep
