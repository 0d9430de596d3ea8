#pragma once

// Experiment files, metrics CSVs and the comparison table behind the CLI.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safl/orchestrator.hpp"
#include "safl/scenarios.hpp"
#include "safl/verifier.hpp"

namespace safl {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TaskKind { isotropic_ridge, gaussian_classes, csv };

struct TaskSpec {
  TaskKind kind = TaskKind::isotropic_ridge;
  // isotropic_ridge
  Index d = 10;
  double reg = 1.0;
  double feature_scale = 0.1;
  // gaussian_classes
  int classes = 3;
  Index samples_per_class = 2000;
  double separation = 2.0;
  // csv
  std::filesystem::path path;
  LossKind objective = LossKind::logistic;
  // gaussian_classes and csv
  PartitionSpec partition;
};

struct ExperimentFile {
  std::string name = "experiment";
  TaskSpec task;
  std::uint64_t data_seed = 0;
  SimConfig sim;
  bool relative_rate = false;  // alpha = value/(2 lambda - mu), alpha_0 = value/mu
  int repetitions = 1;
  std::vector<Algorithm> variants;
};

ExperimentFile parse_experiment(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentFile load_experiment(const std::filesystem::path& path);

// The task is a function of the task spec and data_seed only, so every
// variant and every repetition sees identical shards.
Task build_task(const ExperimentFile& exp);

// The simulation config of one variant and repetition, with relative learning
// rates resolved against the task's curvature.
SimConfig resolve_config(const ExperimentFile& exp, const Task& task, Algorithm variant, int repetition);

BoundInputs bound_inputs(const SimConfig& config, const Task& task);

struct MetricsRow {
  std::string variant;
  std::uint64_t seed = 0;
  int round = 0;
  double mse = 0;
  double accuracy_proxy = 0;
  long uploads_cumulative = 0;
  double p = 0;
  std::optional<double> bound_theorem1;
  std::optional<double> bound_corollary1;

  bool operator==(const MetricsRow&) const = default;
};

std::vector<MetricsRow> metrics_rows(const std::string& variant, const SimConfig& config, const Task& task,
                                     const std::vector<RoundRecord>& records);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::vector<std::string> variants;  // empty: all variants of the file
  bool quiet = false;
  unsigned threads = 1;
};

struct VariantSummary {
  std::string variant;
  int seeds = 0;
  double final_mse_mean = 0;
  double final_mse_stderr = 0;
  double final_accuracy_mean = 0;
  double uploads_mean = 0;
  double upload_fraction = 0;  // uploads / (n T)
};

// Runs every selected variant for every repetition; writes <variant>.csv and
// summary.csv into out_dir.
std::vector<VariantSummary> run_experiment(const ExperimentFile& exp, const RunOptions& opts);

// Exit codes: 0 ok, 1 config error, 2 divergence, 3 I/O.
int run_experiment_main(const std::filesystem::path& config_path, const RunOptions& opts, std::ostream& log);

// First round with mse < threshold for each seed; nullopt when never reached.
std::vector<std::optional<int>> rounds_to_threshold(const std::vector<MetricsRow>& rows, double threshold);
// Median with unreached seeds counted as +infinity.
double median_rounds(const std::vector<std::optional<int>>& rounds);

struct ComparisonRow {
  int round = 0;
  std::vector<double> mse_mean, mse_stderr, acc_mean, acc_stderr;
};

struct Comparison {
  std::vector<std::string> labels;
  std::vector<ComparisonRow> rows;
  std::optional<double> threshold;
  std::vector<double> median_rounds_to_threshold;
};

Comparison compare(const std::vector<std::filesystem::path>& paths, std::optional<double> threshold);
void print_comparison(std::ostream& out, const Comparison& cmp);

}  // namespace safl
