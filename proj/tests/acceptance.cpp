// End-to-end acceptance gate: one Monte-Carlo or property check per release
// criterion, each printing a single pass/fail line.  Exits nonzero if any
// criterion fails.  argv[1] (optional) is the CLI binary used by the
// determinism check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "consep/core.hpp"
#include "consep/effectiveness.hpp"
#include "consep/harness.hpp"
#include "consep/io.hpp"
#include "consep/rng.hpp"
#include "consep/scores.hpp"
#include "consep/septest.hpp"
#include "consep/synth.hpp"

using namespace consep;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool pass, const std::string& detail) {
  std::printf("criterion %2d [%s] %s (%s)\n", id, pass ? "PASS" : "FAIL", what,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

// ---- 1: marginal coverage at three levels --------------------------------

void check_coverage() {
  const MixtureSpec spec;
  const CentroidScore score;
  const int reps = 2000, n = 200;
  bool pass = true;
  std::string detail;
  for (double eps : {0.01, 0.05, 0.1}) {
    const BoundCheck c = run_coverage_suite(
        spec, n, eps, reps, mix_seed(1001, static_cast<std::uint64_t>(eps * 1000)),
        score);
    pass = pass && c.pass;
    detail += fmt("eps %.2f: %.4f ", eps, c.observed);
  }
  report(1, "marginal coverage >= (1-eps) - 3sigma", pass, detail);
}

// ---- 2: joint coverage over independent dataset pairs --------------------

void check_joint() {
  const MixtureSpec spec;
  const CentroidScore score;
  const BoundCheck c = run_joint_bound_suite(spec, 200, 0.1, 0.1, 2000, 1002, score);
  report(2, "joint coverage >= 0.81 - 0.027", c.pass,
         fmt("observed %.4f vs bound %.4f", c.observed, c.bound));
}

// ---- 3: rarity of clean/clean false alarms -------------------------------

void check_rarity() {
  const MixtureSpec spec;
  const CentroidScore score;
  const BoundCheck c = run_rarity_suite(spec, 200, 0.1, 2000, 1003, score);
  report(3, "clean-pair positive rate <= 0.19 + 0.027", c.pass,
         fmt("observed %.4f vs bound %.4f", c.observed, c.bound));
}

// ---- 4: effectiveness forces a positive detection ------------------------

// Random instance empirically (1-r)-effective by construction.
std::pair<AttackInstance, double> random_effective_instance(Rng& rng) {
  for (;;) {
    const int k = 2 + static_cast<int>(rng.below(4));
    const int denom = 20 + static_cast<int>(rng.below(80));
    const Label t_y = static_cast<Label>(rng.below(static_cast<std::uint64_t>(k)));
    Label y = t_y;
    while (y == t_y) y = static_cast<Label>(rng.below(static_cast<std::uint64_t>(k)));
    const double r = 0.1 + 0.8 * rng.next_double();

    const int r_floor = static_cast<int>(std::floor(r * denom));  // count <= r_floor -> p <= r
    const int r_below = (r * denom == r_floor) ? r_floor - 1 : r_floor;  // p < r
    if (r_floor < 1 || r_below < 1 || r_floor >= denom) continue;

    AttackInstance a;
    a.y = y;
    a.t_y = t_y;
    a.tau_d.assign(static_cast<std::size_t>(k), PValue{1, denom});
    a.tau_p.assign(static_cast<std::size_t>(k), PValue{1, denom});

    // poisoned expiry: target above r, everything else at or below
    a.tau_p[static_cast<std::size_t>(t_y)] =
        PValue{r_floor + 1 + static_cast<int>(rng.below(
                   static_cast<std::uint64_t>(denom - r_floor))), denom};
    for (Label l = 0; l < k; ++l)
      if (l != t_y)
        a.tau_p[static_cast<std::size_t>(l)] =
            PValue{1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(r_floor))),
                   denom};

    // clean expiry: tau_d[t_y] < min(r, tau_d[y])
    const int cy = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(denom - 1)));
    const int ct_max = std::min(r_below, cy - 1);
    if (ct_max < 1) continue;
    a.tau_d[static_cast<std::size_t>(y)] = PValue{cy, denom};
    a.tau_d[static_cast<std::size_t>(t_y)] =
        PValue{1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(ct_max))), denom};
    for (Label l = 0; l < k; ++l)
      if (l != t_y && l != y)
        a.tau_d[static_cast<std::size_t>(l)] =
            PValue{1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(denom))),
                   denom};

    if (is_empirically_effective(a, r)) return {a, r};
  }
}

void check_effective_forces_detection() {
  Rng rng(1004);
  int misses = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const auto [a, r] = random_effective_instance(rng);
    SeparabilityScore s;
    for (std::size_t l = 0; l < a.tau_d.size(); ++l) {
      s.per_label.emplace_back(a.tau_d[l], a.tau_p[l]);
      s.p_cap = std::max(s.p_cap, std::min(a.tau_d[l].value(), a.tau_p[l].value()));
    }
    if (detect_from_score(s, r) != Detection::positive) ++misses;
  }
  report(4, "effective attacks always detected", misses == 0,
         fmt("%.0f misses over %.0f instances", misses, trials));
}

// ---- 5: p_cap threshold equals brute-force intersection ------------------

void check_algorithm_oracle() {
  const MixtureSpec spec;
  const CentroidScore score;
  Rng rng(1005);
  int mismatches = 0;
  const int trials = 1000;
  const std::vector<double> eps_grid{0.02, 0.05, 0.1, 0.2, 0.4, 0.7};
  for (int t = 0; t < trials; ++t) {
    const auto base = static_cast<std::uint64_t>(t);
    const LabeledDataset d1 = sample_dataset(spec, 15 + static_cast<int>(rng.below(20)),
                                             mix_seed(1005, 3 * base));
    const LabeledDataset d2 = sample_dataset(spec, 15 + static_cast<int>(rng.below(20)),
                                             mix_seed(1005, 3 * base + 1));
    const LabeledDataset z = sample_dataset(spec, 1, mix_seed(1005, 3 * base + 2));
    const SeparabilityScore s = separability_test(d1, d2, score, z.x(0));
    for (double eps : eps_grid) {
      const auto g1 = prediction_set(d1, score, z.x(0), eps);
      const auto g2 = prediction_set(d2, score, z.x(0), eps);
      bool nonempty = false;
      for (Label y : g1.labels) nonempty = nonempty || g2.contains(y);
      if ((s.p_cap > eps) != nonempty) ++mismatches;
    }
  }
  report(5, "p_cap threshold == brute-force set intersection", mismatches == 0,
         fmt("%.0f mismatches over %.0f instance-eps pairs", mismatches,
             trials * static_cast<double>(eps_grid.size())));
}

// ---- 6 & 7: end-to-end sweep ---------------------------------------------

void check_sweep() {
  SweepConfig cfg;  // library defaults
  const SweepReport rep = run_poison_sweep(cfg);

  const auto threshold_index = [&](double eps) {
    for (std::size_t i = 0; i < rep.thresholds.size(); ++i)
      if (rep.thresholds[i] == eps) return i;
    return rep.thresholds.size();
  };
  const std::size_t ti = threshold_index(0.1);
  const auto row_for_rate = [&](double rate) -> const SweepRow* {
    for (const SweepRow& r : rep.rows)
      if (r.rate == rate) return &r;
    return nullptr;
  };

  const SweepRow* attack = row_for_rate(0.2);
  bool pass6 = attack != nullptr && ti < rep.thresholds.size();
  std::string detail6 = "missing rate 0.2 or eps 0.1";
  if (pass6) {
    const SweepCell& cell = attack->cells[ti];
    pass6 = attack->success_rate >= 0.95 && cell.fnr <= 0.19 && cell.fnr <= 0.05 &&
            cell.fpr <= 0.05;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "success %.3f fnr %.3f fpr %.3f",
                  attack->success_rate, cell.fnr, cell.fpr);
    detail6 = buf;
  }
  report(6, "rate-0.2 sweep: success>=0.95 fnr<=0.05 fpr<=0.05 at eps 0.1",
         pass6, detail6);

  const SweepRow* clean = row_for_rate(0.0);
  bool pass7 = clean != nullptr && !rep.rows.empty();
  std::string detail7 = "missing rate 0";
  if (pass7) {
    const double chance = 1.0 / cfg.spec.num_classes;
    const double sigma =
        std::sqrt(chance * (1.0 - chance) / cfg.n_holdout_poison);
    const bool at_chance = std::abs(clean->success_rate - chance) <= 3.0 * sigma;
    const bool saturates = rep.rows.back().success_rate >= 0.95;
    bool monotone = true;
    const double slack = 3.0 * std::sqrt(0.25 / cfg.n_holdout_poison);
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      monotone = monotone &&
                 rep.rows[i].success_rate >= rep.rows[i - 1].success_rate - slack;
    pass7 = at_chance && saturates && monotone;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "success at 0: %.3f (chance %.3f), at max rate: %.3f%s",
                  clean->success_rate, chance, rep.rows.back().success_rate,
                  monotone ? "" : ", non-monotone");
    detail7 = buf;
  }
  report(7, "phase transition: chance at rate 0, >=0.95 at max, monotone",
         pass7, detail7);
}

// ---- 8: empirical CDF concentration (DKW) --------------------------------

void check_dkw() {
  MixtureSpec spec;
  spec.dim = 4;
  const CentroidScore score;
  // frozen dataset pair; only the probe point varies across samples
  const LabeledDataset d1 = sample_dataset(spec, 20, 1008);
  const LabeledDataset d2 = sample_dataset(spec, 20, 1009);

  const auto draw_pcap = [&](std::uint64_t seed) {
    const LabeledDataset z = sample_dataset(spec, 1, seed);
    return separability_test(d1, d2, score, z.x(0)).p_cap;
  };

  std::vector<double> ref(1000000);
  for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = draw_pcap(mix_seed(42000, i));
  const EmpiricalCdf f_ref(std::move(ref));

  const int trials = 500, n = 1000;
  const double band = dkw_band(static_cast<std::size_t>(n), 0.05);
  int within = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> sample(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      sample[static_cast<std::size_t>(i)] = draw_pcap(
          mix_seed(43000 + static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)));
    if (sup_deviation(EmpiricalCdf(std::move(sample)), f_ref) <= band) ++within;
  }
  const double frac = static_cast<double>(within) / trials;
  report(8, "sup-deviation within DKW band in >= 93% of trials", frac >= 0.93,
         fmt("within-band fraction %.3f (band %.4f)", frac, band));
}

// ---- 9: derive_r always certifies effectiveness --------------------------

void check_derive_r() {
  Rng rng(1010);
  int derived = 0, violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const int k = 2 + static_cast<int>(rng.below(4));
    const int denom = 5 + static_cast<int>(rng.below(45));
    const auto draw = [&] {
      ExpiryVector tau;
      for (int l = 0; l < k; ++l)
        tau.push_back(PValue{
            1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(denom))), denom});
      return tau;
    };
    AttackInstance a{draw(), draw(),
                     static_cast<Label>(rng.below(static_cast<std::uint64_t>(k))),
                     static_cast<Label>(rng.below(static_cast<std::uint64_t>(k)))};
    for (DeriveMode m : {DeriveMode::lemma, DeriveMode::obs_i, DeriveMode::obs_ii,
                         DeriveMode::obs_iii}) {
      const auto r = derive_r(a, m);
      if (!r) continue;
      ++derived;
      if (!is_empirically_effective(a, r->r)) ++violations;
    }
  }
  report(9, "derive_r output always empirically effective",
         violations == 0 && derived > 0,
         fmt("%.0f derivations, %.0f violations", derived, violations));
}

// ---- 10: byte-identical CLI evaluation -----------------------------------

void check_determinism(const char* cli_path) {
  if (cli_path == nullptr) {
    report(10, "evaluate twice -> byte-identical reports", false,
           "CLI path not supplied");
    return;
  }
  const std::string config = R"({
    "sweep": {
      "n_train": 60,
      "n_holdout_clean": 100,
      "n_holdout_poison": 100,
      "poison_rates": [0.0, 0.2],
      "thresholds": [0.1],
      "seed": 314159
    },
    "suites": {
      "coverage_epsilons": [0.1],
      "coverage_reps": 300,
      "joint_reps": 300,
      "rarity_reps": 300,
      "n": 60
    },
    "out_prefix": "acceptance_eval"
  })";
  try {
    write_text_file("acceptance_cfg.json", config);
    std::vector<std::string> outputs;
    for (int run = 0; run < 2; ++run) {
      const std::string cmd =
          std::string(cli_path) + " evaluate --config acceptance_cfg.json > /dev/null";
      const int rc = std::system(cmd.c_str());
      if (rc != 0 && rc != 2 * 256) {  // all-pass or bound-failure both acceptable here
        report(10, "evaluate twice -> byte-identical reports", false,
               "CLI exited with unexpected status " + std::to_string(rc));
        return;
      }
      outputs.push_back(read_text_file("acceptance_eval.txt") +
                        read_text_file("acceptance_eval.csv") +
                        read_text_file("acceptance_eval.json"));
    }
    report(10, "evaluate twice -> byte-identical reports", outputs[0] == outputs[1],
           fmt("%.0f bytes compared per run", static_cast<double>(outputs[0].size()),
               0.0));
  } catch (const std::exception& e) {
    report(10, "evaluate twice -> byte-identical reports", false, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  check_coverage();
  check_joint();
  check_rarity();
  check_effective_forces_detection();
  check_algorithm_oracle();
  check_sweep();
  check_dkw();
  check_derive_r();
  check_determinism(argc > 1 ? argv[1] : nullptr);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
