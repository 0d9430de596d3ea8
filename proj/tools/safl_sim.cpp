// safl_sim: run experiment files and compare their metrics.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "safl/experiment.hpp"

namespace {

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SAFL_SIM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      std::cerr << "ignoring SAFL_SIM_THREADS=" << env << '\n';
    }
  }
  return n;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated simulation runner (fedavg, safl, safl_extended)"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment file and write metrics CSVs");
  std::string config;
  safl::RunOptions opts;
  std::string out_dir = ".";
  std::string variants;
  std::uint64_t seed_override = 0;
  run->add_option("--config", config, "Experiment JSON file")->required();
  run->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run->add_option("--seed-override", seed_override, "Base seed replacing the file's seed");
  run->add_option("--variants", variants, "Comma-separated subset of variants");
  run->add_flag("--quiet", opts.quiet, "No progress output");

  auto* cmp = app.add_subcommand("compare", "Tabulate two or more metrics CSVs");
  std::vector<std::string> files;
  double threshold = 0;
  cmp->add_option("files", files, "Metrics CSV files")->required()->expected(2, -1);
  auto* thr_opt = cmp->add_option("--threshold", threshold, "MSE threshold for rounds-to-threshold");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    opts.out_dir = out_dir;
    if (*seed_opt) opts.seed_override = seed_override;
    opts.variants = split_list(variants);
    opts.threads = thread_cap();
    return safl::run_experiment_main(config, opts, std::cerr);
  }

  try {
    std::vector<std::filesystem::path> paths(files.begin(), files.end());
    std::optional<double> thr;
    if (*thr_opt) thr = threshold;
    safl::print_comparison(std::cout, safl::compare(paths, thr));
    return 0;
  } catch (const safl::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
