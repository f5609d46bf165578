#include <doctest.h>

#include <vector>

#include "consep/effectiveness.hpp"
#include "consep/rng.hpp"

using namespace consep;

namespace {

ExpiryVector ev(std::vector<int> counts, int denom) {
  ExpiryVector out;
  for (int c : counts) out.push_back(PValue{c, denom});
  return out;
}

// tau_d = (0.8, 0.1, 0.3), tau_p = (0.1, 0.9, 0.2), y = 0, t_y = 1
AttackInstance instance_a() {
  return AttackInstance{ev({8, 1, 3}, 10), ev({1, 9, 2}, 10), 0, 1};
}

// tau_d = (0.7, 0.3, 0.2), tau_p = (0.1, 0.9, 0.2), y = 0, t_y = 1
AttackInstance instance_b() {
  return AttackInstance{ev({7, 3, 2}, 10), ev({1, 9, 2}, 10), 0, 1};
}

}  // namespace

TEST_CASE("non-trivial and weakly effective predicates are strict") {
  const AttackInstance a = instance_a();
  CHECK(is_non_trivial(a));
  CHECK(is_weakly_effective(a));

  AttackInstance flat = a;
  flat.tau_d = ev({5, 5, 3}, 10);  // tau_d[t_y] == tau_d[y]
  CHECK_FALSE(is_non_trivial(flat));

  AttackInstance weak = a;
  weak.tau_p = ev({9, 9, 2}, 10);  // tau_p[y] == tau_p[t_y]
  CHECK_FALSE(is_weakly_effective(weak));
}

TEST_CASE("empirical effectiveness window has a closed left, open right edge") {
  const AttackInstance a = instance_a();
  // admissible r: max_p_other = 0.2 <= r < tau_p[t_y] = 0.9, with
  // tau_d[t_y] = 0.1 < min(r, tau_d[y] = 0.8)
  CHECK(is_empirically_effective(a, 0.5));
  CHECK(is_empirically_effective(a, 0.2));        // left edge admits equality
  CHECK_FALSE(is_empirically_effective(a, 0.9));  // right edge strict
  CHECK_FALSE(is_empirically_effective(a, 0.15));
  CHECK_FALSE(is_empirically_effective(a, 0.1));  // re.1 strict at tau_d[t_y]
}

TEST_CASE("instance validation") {
  AttackInstance bad = instance_a();
  bad.tau_p.pop_back();
  CHECK_THROWS_AS(is_non_trivial(bad), std::invalid_argument);
  bad = instance_a();
  bad.t_y = 3;
  CHECK_THROWS_AS(is_weakly_effective(bad), std::invalid_argument);
  bad = instance_a();
  bad.y = -1;
  CHECK_THROWS_AS(is_empirically_effective(bad, 0.5), std::invalid_argument);
}

TEST_CASE("derive_r hand values per mode") {
  const AttackInstance a = instance_a();

  const auto lemma = derive_r(a, DeriveMode::lemma);
  REQUIRE(lemma.has_value());
  // max(tau_d[y] = 0.8, max_p_other = 0.2)
  CHECK(lemma->r == doctest::Approx(0.8));
  CHECK(lemma->lo == lemma->r);
  CHECK(lemma->hi == lemma->r);
  CHECK(is_empirically_effective(a, lemma->r));

  const auto i = derive_r(a, DeriveMode::obs_i);
  REQUIRE(i.has_value());
  CHECK(i->lo == doctest::Approx(0.2));  // max(tau_d[t_y], max_p_other)
  CHECK(i->hi == doctest::Approx(0.9));  // tau_p[t_y]
  CHECK(i->r == doctest::Approx(0.55));
  CHECK(is_empirically_effective(a, i->r));

  const auto ii = derive_r(a, DeriveMode::obs_ii);
  REQUIRE(ii.has_value());
  CHECK(ii->r == doctest::Approx(0.2));  // tau_d[t_y] < max_p_other
  CHECK(is_empirically_effective(a, ii->r));

  // obs_iii needs max_p_other < tau_d[t_y]; instance A has 0.2 > 0.1
  CHECK_FALSE(derive_r(a, DeriveMode::obs_iii).has_value());

  const AttackInstance b = instance_b();
  const auto iii = derive_r(b, DeriveMode::obs_iii);
  REQUIRE(iii.has_value());
  CHECK(iii->lo == doctest::Approx(0.3));  // tau_d[t_y]
  CHECK(iii->hi == doctest::Approx(0.9));
  CHECK(iii->r == doctest::Approx(0.6));
  CHECK(is_empirically_effective(b, iii->r));
}

TEST_CASE("derive_r refuses trivial attacks") {
  AttackInstance a = instance_a();
  a.tau_d = ev({1, 8, 3}, 10);  // tau_d[t_y] > tau_d[y]
  for (DeriveMode m : {DeriveMode::lemma, DeriveMode::obs_i, DeriveMode::obs_ii,
                       DeriveMode::obs_iii})
    CHECK_FALSE(derive_r(a, m).has_value());
}

TEST_CASE("derive_r refuses when its hypotheses fail") {
  // some other label dominates the poisoned expiry: max_p_other >= tau_p[t_y]
  AttackInstance a{ev({4, 1, 2}, 10), ev({9, 5, 2}, 10), 0, 1};
  REQUIRE(is_non_trivial(a));
  for (DeriveMode m : {DeriveMode::lemma, DeriveMode::obs_i, DeriveMode::obs_ii,
                       DeriveMode::obs_iii})
    CHECK_FALSE(derive_r(a, m).has_value());
}

TEST_CASE("any derived r certifies empirical effectiveness") {
  Rng rng(424242);
  int derived = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    const int denom = 10 + static_cast<int>(rng.below(20));
    auto draw = [&] {
      std::vector<int> c(4);
      for (int& v : c) v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(denom)));
      return ev(c, denom);
    };
    AttackInstance a{draw(), draw(), static_cast<Label>(rng.below(4)),
                     static_cast<Label>(rng.below(4))};
    for (DeriveMode m : {DeriveMode::lemma, DeriveMode::obs_i, DeriveMode::obs_ii,
                         DeriveMode::obs_iii}) {
      const auto r = derive_r(a, m);
      if (!r) continue;
      ++derived;
      CHECK(is_empirically_effective(a, r->r));
      CHECK(r->lo <= r->r);
      CHECK(r->r <= r->hi);
    }
  }
  CHECK(derived > 100);  // the property test actually exercised the modes
}

TEST_CASE("effective_rate counts the qualifying fraction") {
  AttackInstance dud = instance_a();
  dud.tau_p = ev({9, 1, 2}, 10);  // target label suppressed
  const std::vector<AttackInstance> xs{instance_a(), instance_b(), dud};
  CHECK(effective_rate(xs, 0.5) == doctest::Approx(2.0 / 3.0));
  CHECK(effective_rate(xs, 0.95) == 0.0);
  const std::vector<AttackInstance> none;
  CHECK_THROWS_AS(effective_rate(none, 0.5), std::invalid_argument);
}
