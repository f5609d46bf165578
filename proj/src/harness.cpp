#include "consep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "consep/core.hpp"
#include "consep/effectiveness.hpp"
#include "consep/rng.hpp"
#include "consep/septest.hpp"

#include <nlohmann/json.hpp>

namespace consep {

namespace {

double binomial_margin(double p, int reps) {
  return 3.0 * std::sqrt(p * (1.0 - p) / reps);
}

void check_suite_args(double eps, int reps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (reps < 100) throw std::invalid_argument("need at least 100 repetitions");
}

// one fresh labeled point from the mixture
std::pair<std::vector<double>, Label> sample_point(const MixtureSpec& spec,
                                                   std::uint64_t seed) {
  const LabeledDataset one = sample_dataset(spec, 1, seed);
  const auto x = one.x(0);
  return {{x.begin(), x.end()}, one.y(0)};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

std::string fmt_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

BoundCheck run_coverage_suite(const MixtureSpec& spec, int n, double eps,
                              int reps, std::uint64_t seed,
                              const ScoreModel& score) {
  check_suite_args(eps, reps);
  int covered = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const LabeledDataset d =
        sample_dataset(spec, n, mix_seed(seed, 2 * static_cast<std::uint64_t>(rep)));
    const auto [x, y] =
        sample_point(spec, mix_seed(seed, 2 * static_cast<std::uint64_t>(rep) + 1));
    if (prediction_set(d, score, x, eps).contains(y)) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  const double bound = (1.0 - eps) - binomial_margin(eps, reps);
  return BoundCheck{"coverage(eps=" + fmt_rate(eps) + ")", bound, coverage,
                    coverage >= bound, ">="};
}

BoundCheck run_joint_bound_suite(const MixtureSpec& spec, int n, double eps,
                                 double gamma, int reps, std::uint64_t seed,
                                 const ScoreModel& score) {
  check_suite_args(eps, reps);
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0, 1)");
  int joint = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto r = static_cast<std::uint64_t>(rep);
    const LabeledDataset d1 = sample_dataset(spec, n, mix_seed(seed, 3 * r));
    const LabeledDataset d2 = sample_dataset(spec, n, mix_seed(seed, 3 * r + 1));
    const auto [x, y] = sample_point(spec, mix_seed(seed, 3 * r + 2));
    if (prediction_set(d1, score, x, eps).contains(y) &&
        prediction_set(d2, score, x, gamma).contains(y))
      ++joint;
  }
  const double freq = static_cast<double>(joint) / reps;
  const double delta = (1.0 - eps) * (1.0 - gamma);
  const double bound = delta - binomial_margin(delta, reps);
  return BoundCheck{"joint-coverage", bound, freq, freq >= bound, ">="};
}

BoundCheck run_rarity_suite(const MixtureSpec& spec, int n, double eps,
                            int reps, std::uint64_t seed,
                            const ScoreModel& score) {
  check_suite_args(eps, reps);
  int positives = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto r = static_cast<std::uint64_t>(rep);
    const LabeledDataset d1 = sample_dataset(spec, n, mix_seed(seed, 3 * r));
    const LabeledDataset d2 = sample_dataset(spec, n, mix_seed(seed, 3 * r + 1));
    const auto [x, y] = sample_point(spec, mix_seed(seed, 3 * r + 2));
    (void)y;
    if (detect(d1, d2, score, x, eps) == Detection::positive) ++positives;
  }
  const double rate = static_cast<double>(positives) / reps;
  const double b = 1.0 - (1.0 - eps) * (1.0 - eps);
  const double bound = b + binomial_margin(b, reps);
  return BoundCheck{"rarity", bound, rate, rate <= bound, "<="};
}

void SweepConfig::validate() const {
  spec.validate();
  if (n_train < 2) throw std::invalid_argument("n_train must be >= 2");
  if (n_holdout_clean < 1 || n_holdout_poison < 1)
    throw std::invalid_argument("holdout sizes must be >= 1");
  if (poison_rates.empty()) throw std::invalid_argument("poison_rates must be nonempty");
  if (!std::is_sorted(poison_rates.begin(), poison_rates.end()))
    throw std::invalid_argument("poison_rates must be sorted ascending");
  for (double r : poison_rates)
    if (r < 0.0 || r >= 1.0)
      throw std::invalid_argument("poison rates must lie in [0, 1)");
  if (thresholds.empty()) throw std::invalid_argument("thresholds must be nonempty");
  if (!std::is_sorted(thresholds.rbegin(), thresholds.rend()))
    throw std::invalid_argument("thresholds must be sorted descending");
  for (double t : thresholds)
    if (!(t > 0.0 && t < 1.0))
      throw std::invalid_argument("thresholds must lie in (0, 1)");
  (void)make_score(score_kind);
}

MixtureSpec default_sweep_mixture() {
  MixtureSpec spec;
  spec.num_classes = 8;
  spec.dim = 5;
  spec.separation = 1.5;
  return spec;
}

TriggerSpec default_trigger(const MixtureSpec& spec) {
  TriggerSpec t;
  const int width = (spec.dim + 7) / 8;
  for (int i = 0; i < width; ++i) t.patch_coords.push_back(spec.dim - width + i);
  t.patch_values.assign(static_cast<std::size_t>(width), -3.5 * spec.noise_sigma);
  t.placement = Placement::fixed;
  t.target_label = spec.num_classes > 1 ? 1 : 0;
  return t;
}

SweepReport run_poison_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const TriggerSpec trigger =
      cfg.trigger.patch_coords.empty() ? default_trigger(cfg.spec) : cfg.trigger;
  const auto score = make_score(cfg.score_kind);
  const Label target = trigger.target_label;

  const LabeledDataset train = sample_dataset(cfg.spec, cfg.n_train, mix_seed(cfg.seed, 0));
  const LabeledDataset holdout_clean =
      sample_dataset(cfg.spec, cfg.n_holdout_clean, mix_seed(cfg.seed, 1));
  const LabeledDataset holdout_src =
      sample_dataset(cfg.spec, cfg.n_holdout_poison, mix_seed(cfg.seed, 2));

  // triggered holdout: every item patched and aimed at the target label
  LabeledDataset holdout_trig(cfg.spec.dim, cfg.spec.num_classes);
  holdout_trig.reserve(holdout_src.size());
  for (std::size_t i = 0; i < holdout_src.size(); ++i) {
    auto [px, py] = apply_trigger(holdout_src.x(i), holdout_src.y(i), trigger,
                                  cfg.spec.dim, mix_seed(cfg.seed, 100 + i));
    holdout_trig.push_back(px, py);
  }

  SweepReport report;
  report.dataset_id = cfg.dataset_id;
  report.thresholds = cfg.thresholds;

  for (std::size_t ri = 0; ri < cfg.poison_rates.size(); ++ri) {
    const double rate = cfg.poison_rates[ri];
    LabeledDataset poisoned = train;
    if (rate > 0.0) {
      const int k = poison_count_for_rate(rate, cfg.n_train);
      const SplitPlan plan =
          split_uniform(cfg.n_train, k, mix_seed(cfg.seed, 200 + ri));
      poisoned = poison(train, plan, trigger, mix_seed(cfg.seed, 300 + ri)).items;
    }

    SweepRow row;
    row.rate = rate;

    std::size_t successes = 0;
    // per triggered item: p_cap plus both expiries for the effectiveness subset
    std::vector<double> trig_pcap(holdout_trig.size());
    std::vector<AttackInstance> instances(holdout_trig.size());
    for (std::size_t i = 0; i < holdout_trig.size(); ++i) {
      const auto x = holdout_trig.x(i);
      if (conformal_classify(poisoned, *score, x) == target) ++successes;
      const SeparabilityScore s = separability_test(train, poisoned, *score, x);
      trig_pcap[i] = s.p_cap;
      AttackInstance& a = instances[i];
      a.y = holdout_src.y(i);
      a.t_y = target;
      a.tau_d.reserve(s.per_label.size());
      a.tau_p.reserve(s.per_label.size());
      for (const auto& [p1, p2] : s.per_label) {
        a.tau_d.push_back(p1);
        a.tau_p.push_back(p2);
      }
    }
    row.success_rate = static_cast<double>(successes) / holdout_trig.size();

    std::size_t clean_correct = 0;
    std::vector<double> clean_pcap(holdout_clean.size());
    for (std::size_t i = 0; i < holdout_clean.size(); ++i) {
      const auto x = holdout_clean.x(i);
      if (conformal_classify(poisoned, *score, x) == holdout_clean.y(i))
        ++clean_correct;
      clean_pcap[i] = separability_test(train, poisoned, *score, x).p_cap;
    }
    row.eval_clean_accuracy = static_cast<double>(clean_correct) / holdout_clean.size();

    for (double eps : cfg.thresholds) {
      SweepCell cell;
      cell.threshold = eps;
      std::size_t misses = 0;
      std::size_t eff = 0, eff_misses = 0;
      for (std::size_t i = 0; i < trig_pcap.size(); ++i) {
        const bool negative = trig_pcap[i] > eps;
        if (negative) ++misses;
        if (is_empirically_effective(instances[i], eps)) {
          ++eff;
          if (negative) ++eff_misses;
        }
      }
      cell.fnr = static_cast<double>(misses) / trig_pcap.size();
      cell.effective_count = eff;
      cell.fnr_on_effective =
          eff == 0 ? 0.0 : static_cast<double>(eff_misses) / eff;
      std::size_t alarms = 0;
      for (double p : clean_pcap)
        if (p <= eps) ++alarms;
      cell.fpr = static_cast<double>(alarms) / clean_pcap.size();
      row.cells.push_back(cell);
    }
    report.rows.push_back(std::move(row));
  }

  // Theorem-shaped checks over the sweep output.
  for (std::size_t ti = 0; ti < cfg.thresholds.size(); ++ti) {
    const double eps = cfg.thresholds[ti];
    const double b = 1.0 - (1.0 - eps) * (1.0 - eps);
    double worst_eff_fnr = 0.0;
    double worst_fpr = 0.0;
    for (const SweepRow& row : report.rows) {
      worst_eff_fnr = std::max(worst_eff_fnr, row.cells[ti].fnr_on_effective);
      worst_fpr = std::max(worst_fpr, row.cells[ti].fpr);
    }
    report.bound_checks.push_back(BoundCheck{
        "fnr-on-effective(eps=" + fmt_rate(eps) + ")", b, worst_eff_fnr,
        worst_eff_fnr <= b, "<="});
    const double fpr_bound = b + dkw_band(cfg.n_holdout_clean, 0.05);
    report.bound_checks.push_back(BoundCheck{
        "fpr(eps=" + fmt_rate(eps) + ")", fpr_bound, worst_fpr,
        worst_fpr <= fpr_bound, "<="});
  }
  return report;
}

bool SweepReport::all_pass() const {
  for (const BoundCheck& c : bound_checks)
    if (!c.pass) return false;
  return true;
}

std::string emit_report(const SweepReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    nlohmann::ordered_json j;
    j["dataset_id"] = report.dataset_id;
    j["thresholds"] = report.thresholds;
    j["rows"] = nlohmann::ordered_json::array();
    for (const SweepRow& row : report.rows) {
      nlohmann::ordered_json r;
      r["poison_rate"] = row.rate;
      r["eval_clean"] = row.eval_clean_accuracy;
      r["success_rate"] = row.success_rate;
      r["cells"] = nlohmann::ordered_json::array();
      for (const SweepCell& c : row.cells) {
        r["cells"].push_back({{"threshold", c.threshold},
                              {"fnr", c.fnr},
                              {"fpr", c.fpr},
                              {"effective_count", c.effective_count},
                              {"fnr_on_effective", c.fnr_on_effective}});
      }
      j["rows"].push_back(std::move(r));
    }
    j["bound_checks"] = nlohmann::ordered_json::array();
    for (const BoundCheck& c : report.bound_checks)
      j["bound_checks"].push_back({{"name", c.name},
                                   {"direction", c.direction},
                                   {"bound", c.bound},
                                   {"observed", c.observed},
                                   {"pass", c.pass}});
    return j.dump(2) + "\n";
  }

  const char sep = format == ReportFormat::csv ? ',' : ' ';
  std::string out;
  out += "dataset-id";
  out += sep;
  out += "poison_rate";
  out += sep;
  out += "eval_clean";
  out += sep;
  out += "success_rate";
  for (double t : report.thresholds) {
    out += sep;
    out += "fnr@" + fmt_rate(t);
    out += sep;
    out += "fpr@" + fmt_rate(t);
  }
  out += '\n';
  for (const SweepRow& row : report.rows) {
    out += report.dataset_id;
    out += sep;
    out += fmt_rate(row.rate);
    out += sep;
    out += fmt(row.eval_clean_accuracy);
    out += sep;
    out += fmt(row.success_rate);
    for (const SweepCell& c : row.cells) {
      out += sep;
      out += fmt(c.fnr);
      out += sep;
      out += fmt(c.fpr);
    }
    out += '\n';
  }
  if (format == ReportFormat::table_text) {
    for (const BoundCheck& c : report.bound_checks) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "check %s observed %.4f %s bound %.4f [%s]\n",
                    c.name.c_str(), c.observed, c.direction.c_str(), c.bound,
                    c.pass ? "pass" : "FAIL");
      out += buf;
    }
  }
  return out;
}

}  // namespace consep
