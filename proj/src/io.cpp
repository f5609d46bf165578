#include "consep/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace consep {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw std::runtime_error("dataset parse error at line " + std::to_string(line) +
                           ": " + what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::string dataset_to_csv(const LabeledDataset& d) {
  std::string out;
  for (int j = 0; j < d.dim(); ++j) {
    out += "f" + std::to_string(j);
    out += ',';
  }
  out += "label\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto x = d.x(i);
    for (double v : x) {
      out += format_double(v);
      out += ',';
    }
    out += std::to_string(d.y(i));
    out += '\n';
  }
  return out;
}

LabeledDataset dataset_from_csv(const std::string& text, int num_labels) {
  std::istringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) parse_error(1, "empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "label")
    parse_error(1, "expected header f0..f{d-1},label");
  const int dim = static_cast<int>(header.size()) - 1;

  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::size_t lineno = 1;
  Label max_label = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != dim + 1)
      parse_error(lineno, "expected " + std::to_string(dim + 1) + " columns, got " +
                              std::to_string(fields.size()));
    std::vector<double> x(static_cast<std::size_t>(dim));
    try {
      for (int j = 0; j < dim; ++j)
        x[static_cast<std::size_t>(j)] = std::stod(fields[static_cast<std::size_t>(j)]);
      labels.push_back(std::stoi(fields.back()));
    } catch (const std::exception&) {
      parse_error(lineno, "malformed number");
    }
    if (labels.back() < 0) parse_error(lineno, "negative label");
    max_label = std::max(max_label, labels.back());
    rows.push_back(std::move(x));
  }
  if (rows.empty()) parse_error(lineno, "no data rows");
  if (num_labels == 0) num_labels = std::max(max_label + 1, 2);
  if (max_label >= num_labels)
    throw std::runtime_error("label " + std::to_string(max_label) +
                             " outside alphabet of size " + std::to_string(num_labels));

  LabeledDataset d(dim, num_labels);
  d.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) d.push_back(rows[i], labels[i]);
  return d;
}

LabeledDataset load_dataset(const std::string& path, int num_labels) {
  return dataset_from_csv(read_text_file(path), num_labels);
}

void save_dataset(const LabeledDataset& d, const std::string& path) {
  write_text_file(path, dataset_to_csv(d));
}

std::string manifest_to_json(const PoisonedDataset& p, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["poison_indices"] = p.plan.poison_indices;
  j["k"] = p.plan.k;
  j["rate"] = p.rate;
  j["seed"] = seed;
  j["trigger"] = {
      {"patch_coords", p.spec.patch_coords},
      {"patch_values", p.spec.patch_values},
      {"placement", p.spec.placement == Placement::fixed ? "fixed" : "uniform-window"},
      {"target_label", p.spec.target_label}};
  return j.dump(2) + "\n";
}

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw std::runtime_error("config error at key '" + key + "': " + what);
}

void check_known_keys(const json& obj, const std::string& scope,
                      std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end())
      config_error(scope.empty() ? key : scope + "." + key, "unknown key");
  }
}

template <typename T>
void read_field(const json& obj, const std::string& scope, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(scope.empty() ? key : scope + "." + std::string(key), e.what());
  }
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  check_known_keys(j, "", {"dataset", "sweep", "suites", "out_prefix"});
  read_field(j, "", "out_prefix", cfg.out_prefix);

  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    check_known_keys(d, "dataset",
                     {"num_classes", "dim", "separation", "noise_sigma", "class_weights"});
    read_field(d, "dataset", "num_classes", cfg.sweep.spec.num_classes);
    read_field(d, "dataset", "dim", cfg.sweep.spec.dim);
    read_field(d, "dataset", "separation", cfg.sweep.spec.separation);
    read_field(d, "dataset", "noise_sigma", cfg.sweep.spec.noise_sigma);
    read_field(d, "dataset", "class_weights", cfg.sweep.spec.class_weights);
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_known_keys(s, "sweep",
                     {"dataset_id", "n_train", "n_holdout_clean", "n_holdout_poison",
                      "poison_rates", "thresholds", "score", "seed", "trigger"});
    read_field(s, "sweep", "dataset_id", cfg.sweep.dataset_id);
    read_field(s, "sweep", "n_train", cfg.sweep.n_train);
    read_field(s, "sweep", "n_holdout_clean", cfg.sweep.n_holdout_clean);
    read_field(s, "sweep", "n_holdout_poison", cfg.sweep.n_holdout_poison);
    read_field(s, "sweep", "poison_rates", cfg.sweep.poison_rates);
    read_field(s, "sweep", "thresholds", cfg.sweep.thresholds);
    read_field(s, "sweep", "score", cfg.sweep.score_kind);
    read_field(s, "sweep", "seed", cfg.sweep.seed);
    if (s.contains("trigger")) {
      const json& t = s.at("trigger");
      check_known_keys(t, "sweep.trigger",
                       {"patch_coords", "patch_values", "placement", "target_label"});
      read_field(t, "sweep.trigger", "patch_coords", cfg.sweep.trigger.patch_coords);
      read_field(t, "sweep.trigger", "patch_values", cfg.sweep.trigger.patch_values);
      std::string placement = "fixed";
      read_field(t, "sweep.trigger", "placement", placement);
      if (placement == "fixed")
        cfg.sweep.trigger.placement = Placement::fixed;
      else if (placement == "uniform-window")
        cfg.sweep.trigger.placement = Placement::uniform_window;
      else
        config_error("sweep.trigger.placement", "expected fixed or uniform-window");
      read_field(t, "sweep.trigger", "target_label", cfg.sweep.trigger.target_label);
    }
  }

  if (j.contains("suites")) {
    const json& s = j.at("suites");
    check_known_keys(s, "suites",
                     {"coverage_epsilons", "coverage_reps", "joint_reps", "joint_eps",
                      "joint_gamma", "rarity_reps", "rarity_eps", "n"});
    read_field(s, "suites", "coverage_epsilons", cfg.coverage_epsilons);
    read_field(s, "suites", "coverage_reps", cfg.coverage_reps);
    read_field(s, "suites", "joint_reps", cfg.joint_reps);
    read_field(s, "suites", "joint_eps", cfg.joint_eps);
    read_field(s, "suites", "joint_gamma", cfg.joint_gamma);
    read_field(s, "suites", "rarity_reps", cfg.rarity_reps);
    read_field(s, "suites", "rarity_eps", cfg.rarity_eps);
    read_field(s, "suites", "n", cfg.suite_n);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(read_text_file(path));
}

SweepReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
  }
  SweepReport report;
  try {
    report.dataset_id = j.at("dataset_id").get<std::string>();
    report.thresholds = j.at("thresholds").get<std::vector<double>>();
    for (const json& r : j.at("rows")) {
      SweepRow row;
      row.rate = r.at("poison_rate").get<double>();
      row.eval_clean_accuracy = r.at("eval_clean").get<double>();
      row.success_rate = r.at("success_rate").get<double>();
      for (const json& c : r.at("cells")) {
        SweepCell cell;
        cell.threshold = c.at("threshold").get<double>();
        cell.fnr = c.at("fnr").get<double>();
        cell.fpr = c.at("fpr").get<double>();
        cell.effective_count = c.at("effective_count").get<std::size_t>();
        cell.fnr_on_effective = c.at("fnr_on_effective").get<double>();
        row.cells.push_back(cell);
      }
      report.rows.push_back(std::move(row));
    }
    for (const json& c : j.at("bound_checks")) {
      BoundCheck check;
      check.name = c.at("name").get<std::string>();
      check.direction = c.at("direction").get<std::string>();
      check.bound = c.at("bound").get<double>();
      check.observed = c.at("observed").get<double>();
      check.pass = c.at("pass").get<bool>();
      report.bound_checks.push_back(std::move(check));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report JSON missing fields: ") + e.what());
  }
  return report;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace consep
