// Command-line front end: dataset generation, poisoning, separability scans,
// and the bound-verification evaluate pipeline.
//
// Exit codes: 0 success / all checks pass, 1 usage error, 2 bound-check
// failure, 3 I/O error.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "consep/core.hpp"
#include "consep/harness.hpp"
#include "consep/rng.hpp"
#include "consep/io.hpp"
#include "consep/septest.hpp"

namespace {

using namespace consep;

ReportFormat parse_format(const std::string& f) {
  if (f == "table") return ReportFormat::table_text;
  if (f == "csv") return ReportFormat::csv;
  if (f == "json") return ReportFormat::json;
  throw CLI::ValidationError("--format", "expected table, csv or json");
}

int cmd_generate(const std::string& config_path, int n, std::uint64_t seed,
                 const std::string& out_path) {
  MixtureSpec spec;
  if (!config_path.empty()) spec = load_run_config(config_path).sweep.spec;
  const LabeledDataset d = sample_dataset(spec, n, seed);
  save_dataset(d, out_path);
  std::vector<int> counts(static_cast<std::size_t>(d.num_labels()), 0);
  for (std::size_t i = 0; i < d.size(); ++i) ++counts[static_cast<std::size_t>(d.y(i))];
  std::printf("wrote %s: n=%zu d=%d classes=%d\n", out_path.c_str(), d.size(),
              d.dim(), d.num_labels());
  for (std::size_t c = 0; c < counts.size(); ++c)
    std::printf("  class %zu: %d\n", c, counts[c]);
  return 0;
}

int cmd_poison(const std::string& in_path, const std::string& config_path,
               double rate, std::uint64_t seed, const std::string& out_path) {
  const LabeledDataset d = load_dataset(in_path);
  const int n = static_cast<int>(d.size());

  RunConfig rc;
  if (!config_path.empty()) rc = load_run_config(config_path);
  rc.sweep.spec.dim = d.dim();
  rc.sweep.spec.num_classes = d.num_labels();
  TriggerSpec trigger = rc.sweep.trigger.patch_coords.empty()
                            ? default_trigger(rc.sweep.spec)
                            : rc.sweep.trigger;

  int k = 0;
  try {
    k = poison_count_for_rate(rate, n);
  } catch (const std::invalid_argument&) {
    std::fprintf(stderr,
                 "error: rate %g with n=%d yields no valid split; a splitting "
                 "requires 0 < k < n\n",
                 rate, n);
    return 1;
  }
  const SplitPlan plan = split_uniform(n, k, seed);
  const PoisonedDataset p = poison(d, plan, trigger, seed);
  save_dataset(p.items, out_path);
  write_text_file(out_path + ".manifest.json", manifest_to_json(p, seed));
  std::printf("wrote %s (+ manifest): n=%d poisoned=%d rate=%g target=%d\n",
              out_path.c_str(), n, k, p.rate, trigger.target_label);
  return 0;
}

int cmd_scan(const std::string& clean_path, const std::string& suspect_path,
             const std::string& test_path, const std::string& score_kind,
             double epsilon, const std::string& out_path) {
  const LabeledDataset clean = load_dataset(clean_path);
  const LabeledDataset suspect = load_dataset(suspect_path, clean.num_labels());
  const LabeledDataset test = load_dataset(test_path, clean.num_labels());
  const auto score = make_score(score_kind);

  std::string out = "index,p_cap,flag\n";
  std::size_t positives = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const SeparabilityScore s = separability_test(clean, suspect, *score, test.x(i));
    const bool positive = detect_from_score(s, epsilon) == Detection::positive;
    positives += positive ? 1 : 0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%s\n", i, s.p_cap,
                  positive ? "positive" : "negative");
    out += buf;
  }
  const double rarity = 1.0 - (1.0 - epsilon) * (1.0 - epsilon);
  char summary[160];
  std::snprintf(summary, sizeof(summary),
                "# positives %zu / %zu (clean-data rarity bound %.4f)\n",
                positives, test.size(), rarity);
  out += summary;
  if (out_path.empty())
    std::fputs(out.c_str(), stdout);
  else
    write_text_file(out_path, out);
  return 0;
}

int cmd_evaluate(const std::string& config_path) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
  const auto score = make_score(cfg.sweep.score_kind);

  SweepReport report = run_poison_sweep(cfg.sweep);
  for (double eps : cfg.coverage_epsilons)
    report.bound_checks.push_back(run_coverage_suite(
        cfg.sweep.spec, cfg.suite_n, eps, cfg.coverage_reps,
        mix_seed(cfg.sweep.seed, 7001), *score));
  report.bound_checks.push_back(run_joint_bound_suite(
      cfg.sweep.spec, cfg.suite_n, cfg.joint_eps, cfg.joint_gamma, cfg.joint_reps,
      mix_seed(cfg.sweep.seed, 7002), *score));
  report.bound_checks.push_back(run_rarity_suite(
      cfg.sweep.spec, cfg.suite_n, cfg.rarity_eps, cfg.rarity_reps,
      mix_seed(cfg.sweep.seed, 7003), *score));

  write_text_file(cfg.out_prefix + ".txt", emit_report(report, ReportFormat::table_text));
  write_text_file(cfg.out_prefix + ".csv", emit_report(report, ReportFormat::csv));
  write_text_file(cfg.out_prefix + ".json", emit_report(report, ReportFormat::json));

  for (const BoundCheck& c : report.bound_checks)
    std::printf("check %-28s observed %.4f %s bound %.4f [%s]\n", c.name.c_str(),
                c.observed, c.direction.c_str(), c.bound, c.pass ? "pass" : "FAIL");
  return report.all_pass() ? 0 : 2;
}

int cmd_report(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
  const SweepReport report = report_from_json(read_text_file(in_path));
  const std::string rendered = emit_report(report, parse_format(format));
  if (out_path.empty())
    std::fputs(rendered.c_str(), stdout);
  else
    write_text_file(out_path, rendered);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal separability toolkit"};
  app.require_subcommand(1);

  std::string config_path, in_path, out_path, clean_path, suspect_path, test_path;
  std::string score_kind = "centroid";
  std::string format = "table";
  std::uint64_t seed = 1;
  double rate = 0.1;
  double epsilon = 0.1;
  int n = 200;

  auto* generate = app.add_subcommand("generate", "sample a synthetic dataset");
  generate->add_option("--config", config_path);
  generate->add_option("--n", n);
  generate->add_option("--seed", seed);
  generate->add_option("--out", out_path)->required();

  auto* poison = app.add_subcommand("poison", "apply a trigger attack to a dataset file");
  poison->add_option("--in", in_path)->required();
  poison->add_option("--config", config_path);
  poison->add_option("--rate", rate);
  poison->add_option("--seed", seed);
  poison->add_option("--out", out_path)->required();

  auto* scan = app.add_subcommand("scan", "separability test per test item");
  scan->add_option("--clean", clean_path)->required();
  scan->add_option("--suspect", suspect_path)->required();
  scan->add_option("--test", test_path)->required();
  scan->add_option("--score", score_kind)->check(CLI::IsMember({"centroid", "entropy"}));
  scan->add_option("--epsilon", epsilon);
  scan->add_option("--out", out_path);

  auto* evaluate = app.add_subcommand("evaluate", "run the sweep and bound suites");
  evaluate->add_option("--config", config_path);

  auto* report = app.add_subcommand("report", "re-render a saved JSON report");
  report->add_option("--in", in_path)->required();
  report->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));
  report->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(config_path, n, seed, out_path);
    if (poison->parsed()) return cmd_poison(in_path, config_path, rate, seed, out_path);
    if (scan->parsed())
      return cmd_scan(clean_path, suspect_path, test_path, score_kind, epsilon, out_path);
    if (evaluate->parsed()) return cmd_evaluate(config_path);
    if (report->parsed()) return cmd_report(in_path, format, out_path);
  } catch (const consep::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
