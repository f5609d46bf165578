#pragma once

#include <stdexcept>
#include <string>

#include "consep/attack.hpp"
#include "consep/harness.hpp"
#include "consep/types.hpp"

namespace consep {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CSV dataset files: header f0..f{d-1},label then one item per line,
// comma-separated reals followed by an integer label, '\n' line endings.
std::string dataset_to_csv(const LabeledDataset& d);
// num_labels: alphabet size; 0 = infer as max label + 1 (at least 2).
LabeledDataset dataset_from_csv(const std::string& text, int num_labels = 0);

LabeledDataset load_dataset(const std::string& path, int num_labels = 0);
void save_dataset(const LabeledDataset& d, const std::string& path);

// Sidecar ground-truth manifest for a poisoning run.
std::string manifest_to_json(const PoisonedDataset& p, std::uint64_t seed);

// cmd_evaluate run configuration; unknown keys are a hard error.
struct RunConfig {
  SweepConfig sweep;
  // bound-suite settings
  std::vector<double> coverage_epsilons = {0.01, 0.05, 0.1};
  int coverage_reps = 2000;
  int joint_reps = 2000;
  double joint_eps = 0.1;
  double joint_gamma = 0.1;
  int rarity_reps = 2000;
  double rarity_eps = 0.1;
  int suite_n = 200;
  std::string out_prefix = "consep_report";
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Parses a report previously produced by emit_report(..., json).
SweepReport report_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace consep
