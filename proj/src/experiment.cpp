#include "safl/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace safl {

using json = nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing required key '" + key + "' in " + where);
  return j.at(key);
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return require(j, key, where).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' in " + where + " has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

PartitionSpec parse_partition(const json& j) {
  const std::string where = "task.partition";
  check_keys(j, {"mean_size", "size_var", "max_labels_per_device", "min_labels_per_device", "biased_devices",
                 "holdout_fraction", "label_universe"},
             where);
  PartitionSpec p;
  p.mean_size = get<double>(j, "mean_size", where);
  p.size_var = get_or<double>(j, "size_var", 0.0, where);
  p.max_labels_per_device = get<int>(j, "max_labels_per_device", where);
  p.min_labels_per_device = get_or<int>(j, "min_labels_per_device", 1, where);
  p.biased_devices = get_or<Index>(j, "biased_devices", 0, where);
  p.holdout_fraction = get_or<double>(j, "holdout_fraction", 0.2, where);
  if (j.contains("label_universe")) p.label_universe = get<std::vector<int>>(j, "label_universe", where);
  return p;
}

TaskSpec parse_task(const json& j, const std::filesystem::path& base_dir) {
  const std::string where = "task";
  const auto kind = get<std::string>(j, "kind", where);
  TaskSpec t;
  if (kind == "isotropic_ridge") {
    check_keys(j, {"kind", "d", "reg", "feature_scale"}, where);
    t.kind = TaskKind::isotropic_ridge;
    t.d = get<Index>(j, "d", where);
    t.reg = get<double>(j, "reg", where);
    t.feature_scale = get_or<double>(j, "feature_scale", 0.1, where);
  } else if (kind == "gaussian_classes") {
    check_keys(j, {"kind", "classes", "d", "samples_per_class", "separation", "reg", "partition"}, where);
    t.kind = TaskKind::gaussian_classes;
    t.objective = LossKind::logistic;
    t.classes = get<int>(j, "classes", where);
    t.d = get<Index>(j, "d", where);
    t.samples_per_class = get<Index>(j, "samples_per_class", where);
    t.separation = get_or<double>(j, "separation", 2.0, where);
    t.reg = get<double>(j, "reg", where);
    t.partition = parse_partition(require(j, "partition", where));
  } else if (kind == "csv") {
    check_keys(j, {"kind", "path", "objective", "reg", "classes", "partition"}, where);
    t.kind = TaskKind::csv;
    t.path = get<std::string>(j, "path", where);
    if (t.path.is_relative() && !base_dir.empty()) t.path = base_dir / t.path;
    t.objective = loss_kind_from_string(get<std::string>(j, "objective", where));
    if (t.objective == LossKind::lasso) throw ConfigError("task.objective: lasso cannot be trained with SGD");
    t.reg = get_or<double>(j, "reg", 0.0, where);
    t.classes = get_or<int>(j, "classes", 0, where);
    t.partition = parse_partition(require(j, "partition", where));
  } else {
    throw ConfigError("task.kind must be isotropic_ridge, gaussian_classes or csv, got '" + kind + "'");
  }
  return t;
}

template <typename E>
E enum_value(const std::string& v, const std::map<std::string, E>& names, const std::string& key) {
  const auto it = names.find(v);
  if (it == names.end()) throw ConfigError("key '" + key + "' has unknown value '" + v + "'");
  return it->second;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentFile parse_experiment(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("experiment file is not valid JSON: ") + e.what());
  }
  const std::string top = "experiment";
  check_keys(j,
             {"name", "task", "data_seed", "n", "s", "T", "E", "sample_order", "learning_rate", "anneal", "gate",
              "weights", "init_scale", "seed", "repetitions", "mse_threshold", "variants"},
             top);
  ExperimentFile exp;
  exp.name = get_or<std::string>(j, "name", "experiment", top);
  exp.sim.n = get<Index>(j, "n", top);
  exp.sim.s = get_or<Index>(j, "s", exp.sim.n, top);
  exp.sim.T = get<int>(j, "T", top);
  exp.sim.E = get<int>(j, "E", top);
  exp.task = parse_task(require(j, "task", top), base_dir);
  exp.task.partition.n = exp.sim.n;
  exp.data_seed = get_or<std::uint64_t>(j, "data_seed", 0, top);
  exp.task.partition.seed = exp.data_seed;
  exp.sim.order = enum_value<SampleOrder>(get_or<std::string>(j, "sample_order", "iid", top),
                                          {{"iid", SampleOrder::iid}, {"shuffle", SampleOrder::shuffle}},
                                          "sample_order");

  const auto& lr = require(j, "learning_rate", top);
  check_keys(lr, {"schedule", "value", "relative"}, "learning_rate");
  exp.sim.lr.kind = enum_value<LrSchedule::Kind>(
      get<std::string>(lr, "schedule", "learning_rate"),
      {{"constant", LrSchedule::Kind::constant}, {"inverse", LrSchedule::Kind::inverse}}, "learning_rate.schedule");
  exp.sim.lr.alpha = get<double>(lr, "value", "learning_rate");
  exp.relative_rate = get_or<bool>(lr, "relative", false, "learning_rate");

  if (j.contains("anneal")) {
    const auto& a = j.at("anneal");
    check_keys(a, {"L", "epsilon", "clock", "mask"}, "anneal");
    exp.sim.anneal.L = get_or<double>(a, "L", exp.sim.anneal.L, "anneal");
    exp.sim.anneal.epsilon = get_or<double>(a, "epsilon", exp.sim.anneal.epsilon, "anneal");
    exp.sim.anneal.clock = enum_value<AnnealClock>(
        get_or<std::string>(a, "clock", "rounds", "anneal"),
        {{"rounds", AnnealClock::rounds}, {"local_steps", AnnealClock::local_steps}}, "anneal.clock");
    exp.sim.anneal.mode = enum_value<MaskMode>(
        get_or<std::string>(a, "mask", "per_coordinate", "anneal"),
        {{"per_coordinate", MaskMode::per_coordinate}, {"scalar", MaskMode::scalar}}, "anneal.mask");
  }
  if (j.contains("gate")) {
    const auto& g = j.at("gate");
    check_keys(g, {"nu", "eps_div", "proxy"}, "gate");
    exp.sim.gate.nu = get_or<double>(g, "nu", exp.sim.gate.nu, "gate");
    exp.sim.gate.eps_div = get_or<double>(g, "eps_div", exp.sim.gate.eps_div, "gate");
    exp.sim.gate.proxy = enum_value<AccuracyProxy>(
        get_or<std::string>(g, "proxy", "holdout_accuracy", "gate"),
        {{"holdout_accuracy", AccuracyProxy::holdout_accuracy}, {"inverse_risk", AccuracyProxy::inverse_risk}},
        "gate.proxy");
  } else if (exp.task.objective != LossKind::logistic || exp.task.kind == TaskKind::isotropic_ridge) {
    exp.sim.gate.proxy = AccuracyProxy::inverse_risk;
  }
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    check_keys(w, {"kind", "custom"}, "weights");
    exp.sim.weights.kind = enum_value<WeightKind>(get<std::string>(w, "kind", "weights"),
                                                  {{"uniform", WeightKind::uniform},
                                                   {"size_proportional", WeightKind::size_proportional},
                                                   {"ida", WeightKind::ida},
                                                   {"custom", WeightKind::custom}},
                                                  "weights.kind");
    if (exp.sim.weights.kind == WeightKind::custom)
      exp.sim.weights.custom = get<std::vector<double>>(w, "custom", "weights");
  }
  exp.sim.init_scale = get_or<double>(j, "init_scale", 0.1, top);
  exp.sim.seed = get_or<std::uint64_t>(j, "seed", 0, top);
  exp.repetitions = get_or<int>(j, "repetitions", 1, top);
  if (exp.repetitions < 1) throw ConfigError("key 'repetitions' must be >= 1");
  if (j.contains("mse_threshold") && !j.at("mse_threshold").is_null())
    exp.sim.mse_threshold = get<double>(j, "mse_threshold", top);
  for (const auto& v : get<std::vector<std::string>>(j, "variants", top)) {
    try {
      exp.variants.push_back(algorithm_from_string(v));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key 'variants': ") + e.what());
    }
  }
  if (exp.variants.empty()) throw ConfigError("key 'variants' must list at least one algorithm");
  try {
    exp.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return exp;
}

ExperimentFile load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read experiment file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), path.parent_path());
}

Task build_task(const ExperimentFile& exp) {
  const auto& t = exp.task;
  try {
    switch (t.kind) {
      case TaskKind::isotropic_ridge:
        return isotropic_ridge_task({exp.sim.n, t.d, t.reg, t.feature_scale, exp.data_seed});
      case TaskKind::gaussian_classes: {
        const auto data = gaussian_classes_dataset({t.classes, t.d, t.samples_per_class, t.separation, exp.data_seed});
        return Task::from_shards(ObjectiveXd::logistic(t.d, t.classes, t.reg), partition(data, t.partition));
      }
      case TaskKind::csv: {
        DatasetXd data;
        try {
          data = read_dataset_csv(t.path);
        } catch (const std::ios_base::failure& e) {
          throw IoError(e.what());
        }
        ObjectiveXd obj;
        if (t.objective == LossKind::logistic) {
          const int classes = t.classes > 0 ? t.classes : static_cast<int>(data.targets.maxCoeff()) + 1;
          obj = ObjectiveXd::logistic(data.dim(), classes, t.reg);
        } else if (t.objective == LossKind::ridge) {
          obj = ObjectiveXd::ridge(data.dim(), t.reg);
        } else {
          obj = ObjectiveXd::least_squares(data.dim());
        }
        return Task::from_shards(obj, partition(data, t.partition));
      }
    }
  } catch (const IoError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unsupported task kind");
}

SimConfig resolve_config(const ExperimentFile& exp, const Task& task, Algorithm variant, int repetition) {
  SimConfig cfg = exp.sim;
  cfg.algorithm = variant;
  cfg.seed = exp.sim.seed + static_cast<std::uint64_t>(repetition);
  if (exp.relative_rate) {
    if (task.curvature.empty()) throw ConfigError("relative learning rates need a smooth objective");
    const double mu = task.mu();
    const double lambda = task.lambda();
    cfg.lr.alpha = cfg.lr.kind == LrSchedule::Kind::constant ? exp.sim.lr.alpha / (2 * lambda - mu)
                                                             : exp.sim.lr.alpha / mu;
  }
  return cfg;
}

BoundInputs bound_inputs(const SimConfig& config, const Task& task) {
  BoundInputs in;
  in.mu = task.mu();
  in.lambda = task.lambda();
  for (const auto& c : task.curvature) in.sigma_sq.push_back(c.sigma_sq);
  in.alpha = config.lr.alpha;
  in.epsilon = config.algorithm == Algorithm::fedavg ? 1.0 : config.anneal.epsilon;
  in.p = 1.0;
  in.q_local = static_cast<long>(config.E) * static_cast<long>(task.max_shard_size());
  const auto devices = init_devices(config, task);
  in.eta = estimate_weights(config.weights, devices, std::nullopt);
  for (const auto& d : devices) in.initial_sq_dist.push_back((d.w - task.optimum).squaredNorm());
  return in;
}

std::vector<MetricsRow> metrics_rows(const std::string& variant, const SimConfig& config, const Task& task,
                                     const std::vector<RoundRecord>& records) {
  std::optional<BoundInputs> in;
  bool thm1 = false;
  bool cor1 = false;
  if (!task.curvature.empty() && task.mu() > 0) {
    thm1 = satisfies_theorem1_rate(config.lr, task.mu(), task.lambda());
    cor1 = satisfies_corollary1_rate(config.lr, task.mu());
    if (thm1 || cor1) in = bound_inputs(config, task);
  }
  const double c1 = cor1 ? corollary1_constant(*in) : 0.0;
  std::vector<MetricsRow> rows;
  long uploads = 0;
  for (const auto& r : records) {
    uploads += r.uploads;
    MetricsRow row{variant, config.seed, r.round, r.mse, r.accuracy, uploads, r.p, std::nullopt, std::nullopt};
    const auto t = static_cast<double>(r.local_steps);
    if (thm1) row.bound_theorem1 = theorem1_bound(*in, t);
    if (cor1) row.bound_corollary1 = corollary1_bound(c1, t);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {
const char* kMetricsHeader =
    "variant,seed,round,mse,accuracy_proxy,uploads_cumulative,p,bound_theorem1,bound_corollary1";
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.variant << ',' << r.seed << ',' << r.round << ',' << fmt_double(r.mse) << ','
        << fmt_double(r.accuracy_proxy) << ',' << r.uploads_cumulative << ',' << fmt_double(r.p) << ','
        << (r.bound_theorem1 ? fmt_double(*r.bound_theorem1) : "") << ','
        << (r.bound_corollary1 ? fmt_double(*r.bound_corollary1) : "") << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw ConfigError("metrics file has an unexpected header");
  std::vector<MetricsRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 9) throw ConfigError("metrics line " + std::to_string(lineno) + " needs 9 columns");
    try {
      MetricsRow r;
      r.variant = cells[0];
      r.seed = std::stoull(cells[1]);
      r.round = std::stoi(cells[2]);
      r.mse = std::stod(cells[3]);
      r.accuracy_proxy = std::stod(cells[4]);
      r.uploads_cumulative = std::stol(cells[5]);
      r.p = std::stod(cells[6]);
      if (!cells[7].empty()) r.bound_theorem1 = std::stod(cells[7]);
      if (!cells[8].empty()) r.bound_corollary1 = std::stod(cells[8]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ConfigError("metrics line " + std::to_string(lineno) + " has a malformed number");
    }
  }
  return rows;
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read metrics file " + path.string());
  return read_metrics_csv(in);
}

std::vector<VariantSummary> run_experiment(const ExperimentFile& exp, const RunOptions& opts) {
  ExperimentFile run = exp;
  if (opts.seed_override) run.sim.seed = *opts.seed_override;
  run.sim.threads = std::max(1u, opts.threads);
  std::vector<Algorithm> variants = run.variants;
  if (!opts.variants.empty()) {
    variants.clear();
    for (const auto& v : opts.variants) {
      try {
        variants.push_back(algorithm_from_string(v));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--variants: ") + e.what());
      }
    }
  }
  const Task task = build_task(run);

  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + opts.out_dir.string() + ": " + ec.message());

  std::vector<VariantSummary> summaries;
  for (Algorithm variant : variants) {
    const std::string name = to_string(variant);
    std::vector<MetricsRow> rows;
    VariantSummary sum;
    sum.variant = name;
    sum.seeds = run.repetitions;
    std::vector<double> final_mse;
    double acc = 0;
    double uploads = 0;
    for (int rep = 0; rep < run.repetitions; ++rep) {
      SimConfig cfg;
      try {
        cfg = resolve_config(run, task, variant, rep);
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const auto records = safl::run(cfg, task);
      auto seed_rows = metrics_rows(name, cfg, task, records);
      if (!seed_rows.empty()) {
        final_mse.push_back(seed_rows.back().mse);
        acc += seed_rows.back().accuracy_proxy;
        uploads += static_cast<double>(seed_rows.back().uploads_cumulative);
      }
      rows.insert(rows.end(), seed_rows.begin(), seed_rows.end());
      if (!opts.quiet && !records.empty())
        std::cerr << name << " seed " << cfg.seed << ": " << records.size() << " rounds, final mse "
                  << records.back().mse << '\n';
    }
    const auto reps = static_cast<double>(std::max<std::size_t>(final_mse.size(), 1));
    if (!final_mse.empty()) {
      sum.final_mse_mean = std::accumulate(final_mse.begin(), final_mse.end(), 0.0) / reps;
      double var = 0;
      for (double v : final_mse) var += (v - sum.final_mse_mean) * (v - sum.final_mse_mean);
      sum.final_mse_stderr = final_mse.size() > 1 ? std::sqrt(var / (reps - 1) / reps) : 0.0;
    }
    sum.final_accuracy_mean = acc / reps;
    sum.uploads_mean = uploads / reps;
    sum.upload_fraction = run.sim.T > 0 ? sum.uploads_mean / (static_cast<double>(run.sim.n) * run.sim.T) : 0.0;
    summaries.push_back(sum);

    const auto path = opts.out_dir / (name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_metrics_csv(out, rows);
    if (!out) throw IoError("write failed for " + path.string());
  }

  const auto path = opts.out_dir / "summary.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "variant,seeds,final_mse_mean,final_mse_stderr,final_accuracy_mean,uploads_mean,upload_fraction\n";
  for (const auto& s : summaries)
    out << s.variant << ',' << s.seeds << ',' << fmt_double(s.final_mse_mean) << ',' << fmt_double(s.final_mse_stderr)
        << ',' << fmt_double(s.final_accuracy_mean) << ',' << fmt_double(s.uploads_mean) << ','
        << fmt_double(s.upload_fraction) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
  return summaries;
}

int run_experiment_main(const std::filesystem::path& config_path, const RunOptions& opts, std::ostream& log) {
  try {
    run_experiment(load_experiment(config_path), opts);
    return 0;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const DivergenceError& e) {
    log << "diverged: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return 1;
  }
}

std::vector<std::optional<int>> rounds_to_threshold(const std::vector<MetricsRow>& rows, double threshold) {
  std::map<std::uint64_t, std::optional<int>> first;
  for (const auto& r : rows) {
    auto& slot = first[r.seed];
    if (!slot && r.mse < threshold) slot = r.round;
  }
  std::vector<std::optional<int>> out;
  for (const auto& [seed, v] : first) out.push_back(v);
  return out;
}

double median_rounds(const std::vector<std::optional<int>>& rounds) {
  if (rounds.empty()) throw std::invalid_argument("median_rounds: no seeds");
  std::vector<double> v;
  for (const auto& r : rounds) v.push_back(r ? static_cast<double>(*r) : std::numeric_limits<double>::infinity());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

Comparison compare(const std::vector<std::filesystem::path>& paths, std::optional<double> threshold) {
  if (paths.size() < 2) throw ConfigError("compare needs at least two metrics files");
  Comparison cmp;
  cmp.threshold = threshold;
  std::vector<std::map<int, std::vector<const MetricsRow*>>> by_round(paths.size());
  std::vector<std::vector<MetricsRow>> files;
  files.reserve(paths.size());
  for (const auto& p : paths) files.push_back(read_metrics_csv(p));
  std::set<int> common;
  for (std::size_t f = 0; f < files.size(); ++f) {
    if (files[f].empty()) throw ConfigError(paths[f].string() + " has no rows");
    std::set<int> rounds;
    for (const auto& r : files[f]) {
      by_round[f][r.round].push_back(&r);
      rounds.insert(r.round);
    }
    if (f == 0) {
      common = rounds;
    } else {
      std::set<int> both;
      std::set_intersection(common.begin(), common.end(), rounds.begin(), rounds.end(),
                            std::inserter(both, both.begin()));
      common = std::move(both);
    }
    cmp.labels.push_back(files[f].front().variant + " (" + paths[f].filename().string() + ")");
  }
  if (common.empty()) throw ConfigError("metrics files have incompatible round grids");

  auto stats = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, v.size() > 1 ? std::sqrt(var / (n - 1) / n) : 0.0};
  };
  for (int round : common) {
    ComparisonRow row;
    row.round = round;
    for (std::size_t f = 0; f < files.size(); ++f) {
      std::vector<double> mse, acc;
      for (const auto* r : by_round[f][round]) {
        mse.push_back(r->mse);
        acc.push_back(r->accuracy_proxy);
      }
      const auto [mm, ms] = stats(mse);
      const auto [am, as] = stats(acc);
      row.mse_mean.push_back(mm);
      row.mse_stderr.push_back(ms);
      row.acc_mean.push_back(am);
      row.acc_stderr.push_back(as);
    }
    cmp.rows.push_back(std::move(row));
  }
  if (threshold)
    for (const auto& f : files) cmp.median_rounds_to_threshold.push_back(median_rounds(rounds_to_threshold(f, *threshold)));
  return cmp;
}

void print_comparison(std::ostream& out, const Comparison& cmp) {
  out << "round";
  for (const auto& l : cmp.labels) out << " | " << l << " mse (+-se) acc (+-se)";
  out << " | mse diff vs first\n";
  out << std::setprecision(6);
  for (const auto& row : cmp.rows) {
    out << std::setw(5) << row.round;
    for (std::size_t f = 0; f < cmp.labels.size(); ++f)
      out << " | " << row.mse_mean[f] << " (" << row.mse_stderr[f] << ") " << row.acc_mean[f] << " ("
          << row.acc_stderr[f] << ")";
    out << " |";
    for (std::size_t f = 1; f < cmp.labels.size(); ++f) out << ' ' << row.mse_mean[f] - row.mse_mean[0];
    out << '\n';
  }
  if (cmp.threshold) {
    out << "rounds to mse < " << *cmp.threshold << " (median over seeds):\n";
    for (std::size_t f = 0; f < cmp.labels.size(); ++f)
      out << "  " << cmp.labels[f] << ": " << cmp.median_rounds_to_threshold[f] << '\n';
  }
}

}  // namespace safl
