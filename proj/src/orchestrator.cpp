#include "safl/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

namespace safl {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::fedavg: return "fedavg";
    case Algorithm::safl: return "safl";
    case Algorithm::safl_extended: return "safl_extended";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "fedavg") return Algorithm::fedavg;
  if (name == "safl") return Algorithm::safl;
  if (name == "safl_extended") return Algorithm::safl_extended;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

double Task::mu() const {
  double out = curvature.at(0).mu;
  for (const auto& c : curvature) out = std::min(out, c.mu);
  return out;
}

double Task::lambda() const {
  double out = curvature.at(0).lambda;
  for (const auto& c : curvature) out = std::max(out, c.lambda);
  return out;
}

Index Task::max_shard_size() const {
  Index out = 0;
  for (const auto& s : shards) out = std::max(out, s.train.size());
  return out;
}

Task Task::from_shards(const ObjectiveXd& objective, std::vector<Shard> shards) {
  if (shards.empty()) throw std::invalid_argument("task: no shards");
  Task task;
  task.objective = objective;
  for (const auto& s : shards) {
    if (s.train.empty()) throw std::invalid_argument("task: empty training shard");
    task.pooled_train = concatenate(task.pooled_train, s.train);
    task.pooled_eval = concatenate(task.pooled_eval, s.holdout);
  }
  if (task.pooled_eval.empty()) task.pooled_eval = task.pooled_train;
  task.optimum = optimum_oracle(objective, task.pooled_train);
  if (objective.smooth())
    for (const auto& s : shards) task.curvature.push_back(safl::curvature(objective, s.train, std::optional(task.optimum)));
  task.shards = std::move(shards);
  return task;
}

void SimConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (s < 1 || s > n) throw std::invalid_argument("s must lie in [1, n]");
  if (T < 0) throw std::invalid_argument("T must be >= 0");
  if (E < 1) throw std::invalid_argument("E must be >= 1");
  if (!(init_scale >= 0)) throw std::invalid_argument("init_scale must be >= 0");
  anneal.validate();
  gate.validate();
  LrSchedule::checked(lr);
}

std::vector<DeviceState> init_devices(const SimConfig& config, const Task& task) {
  config.validate();
  if (task.devices() != config.n)
    throw std::invalid_argument("task has " + std::to_string(task.devices()) + " shards but n = " +
                                std::to_string(config.n));
  const Index dim = task.objective.param_size();
  std::vector<DeviceState> devices(static_cast<std::size_t>(config.n));
  for (Index k = 0; k < config.n; ++k) {
    auto& dev = devices[static_cast<std::size_t>(k)];
    const auto id = static_cast<std::uint64_t>(k);
    dev.id = k;
    dev.shard = task.shards[static_cast<std::size_t>(k)].train;
    dev.holdout = task.shards[static_cast<std::size_t>(k)].holdout;
    dev.sgd_rng = make_stream(config.seed, Stream::sgd, id);
    dev.mask_rng = make_stream(config.seed, Stream::mask, id);
    dev.gate_rng = make_stream(config.seed, Stream::gate, id);
    Rng init = make_stream(config.seed, Stream::init, id);
    std::normal_distribution<double> normal(0.0, 1.0);
    dev.w = VectorXd::NullaryExpr(dim, [&] { return config.init_scale * normal(init); });
  }
  return devices;
}

ServerState init_server(const SimConfig& config) {
  return ServerState{std::nullopt, 0, make_stream(config.seed, Stream::selection, 0)};
}

std::vector<double> estimate_weights(const WeightScheme& scheme, const std::vector<DeviceState>& devices,
                                     const std::optional<VectorXd>& z_ref) {
  std::vector<Update<double>> all;
  all.reserve(devices.size());
  for (const auto& d : devices) all.push_back({d.id, d.w, static_cast<double>(d.shard.size())});
  if (scheme.kind == WeightKind::ida && !z_ref) return weights(WeightScheme{WeightKind::uniform, {}}, all);
  return weights(scheme, all, z_ref);
}

VectorXd global_estimate(const std::vector<DeviceState>& devices, const std::vector<double>& eta) {
  if (devices.empty() || devices.size() != eta.size())
    throw std::invalid_argument("global_estimate: need one weight per device");
  VectorXd out = VectorXd::Zero(devices.front().w.size());
  for (std::size_t k = 0; k < devices.size(); ++k) out += eta[k] * devices[k].w;
  return out;
}

namespace {

struct DeviceOutcome {
  bool upload = true;
  double q = 1;
  VectorXd z;
  std::exception_ptr error;
};

double anneal_probability(const SimConfig& config, const DeviceState& dev, int round) {
  const double t = config.anneal.clock == AnnealClock::rounds ? static_cast<double>(round)
                                                               : static_cast<double>(dev.steps);
  return selection_probability(t, config.anneal.L);
}

void device_round(DeviceState& dev, const SimConfig& config, const Task& task,
                  const std::optional<VectorXd>& z_prev, int round, DeviceOutcome& out) {
  if (z_prev) {
    if (config.algorithm == Algorithm::fedavg) {
      dev.w = *z_prev;
    } else {
      const VectorXd u = draw_mask(config.anneal, dev.w.size(), anneal_probability(config, dev, round), dev.mask_rng);
      dev.w = mix(u, *z_prev, dev.w);
    }
  }
  LocalResult local = run_local_epochs(dev, task.objective, config.E, config.lr, config.order);
  if (config.algorithm == Algorithm::safl_extended) {
    if (z_prev) {
      const auto& eval = dev.eval_set();
      const double h_global = accuracy_proxy(*z_prev, eval, task.objective, config.gate.proxy);
      const double h_local = accuracy_proxy(local.z, eval, task.objective, config.gate.proxy);
      dev.gate.q = upload_probability(performance_gap(h_global, h_local, config.gate.eps_div), config.gate.nu);
    }
    out.q = dev.gate.q;
    out.upload = decide_upload(dev.gate.q, dev.gate_rng);
  }
  dev.w = local.z;
  dev.trained = true;
  out.z = std::move(local.z);
}

}  // namespace

RoundRecord run_round(ServerState& server, std::vector<DeviceState>& devices, const SimConfig& config,
                      const Task& task, int round) {
  const Index n = static_cast<Index>(devices.size());
  if (n != config.n) throw std::invalid_argument("run_round: device count differs from n");

  std::vector<Index> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), Index{0});
  for (Index i = 0; i < config.s; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(pick(server.rng))]);
  }
  std::vector<Index> selected(ids.begin(), ids.begin() + config.s);
  std::sort(selected.begin(), selected.end());

  const std::optional<VectorXd> z_prev = server.z_bar;
  std::vector<DeviceOutcome> outcomes(selected.size());
  auto work = [&](std::size_t i) {
    try {
      device_round(devices[static_cast<std::size_t>(selected[i])], config, task, z_prev, round, outcomes[i]);
    } catch (...) {
      outcomes[i].error = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1u, config.threads), selected.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < selected.size(); ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < selected.size(); i += workers) work(i);
      });
  }
  for (const auto& o : outcomes) {
    if (!o.error) continue;
    try {
      std::rethrow_exception(o.error);
    } catch (const NonFiniteError& e) {
      throw DivergenceError(round, e.what());
    }
  }

  RoundRecord rec;
  rec.round = round;
  rec.selected = config.s;
  std::vector<Update<double>> received;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    rec.expected_uploads += outcomes[i].q;
    if (!outcomes[i].upload) continue;
    const auto& dev = devices[static_cast<std::size_t>(selected[i])];
    received.push_back({dev.id, std::move(outcomes[i].z), static_cast<double>(dev.shard.size())});
    rec.uploaders.push_back(dev.id);
  }
  rec.uploads = static_cast<Index>(received.size());
  if (!received.empty()) {
    const bool ida_without_ref = config.weights.kind == WeightKind::ida && !z_prev;
    const auto eta = ida_without_ref ? weights(WeightScheme{WeightKind::uniform, {}}, received)
                                     : weights(config.weights, received, z_prev);
    server.z_bar = aggregate(received, eta);
    if (!server.z_bar->allFinite()) throw DivergenceError(round, "non-finite global model");
  }
  server.round = round;

  if (config.anneal.clock == AnnealClock::rounds) {
    rec.p = selection_probability(round, config.anneal.L);
  } else {
    double sum = 0;
    for (Index id : selected) sum += selection_probability(static_cast<double>(devices[static_cast<std::size_t>(id)].steps), config.anneal.L);
    rec.p = sum / static_cast<double>(selected.size());
  }
  for (const auto& d : devices) rec.local_steps = std::max(rec.local_steps, d.steps);

  const VectorXd w_hat = global_estimate(devices, estimate_weights(config.weights, devices, server.z_bar));
  if (!w_hat.allFinite()) throw DivergenceError(round, "non-finite device parameters");
  rec.mse = (w_hat - task.optimum).squaredNorm();
  rec.accuracy = accuracy_proxy(w_hat, task.pooled_eval, task.objective,
                                task.objective.classification() ? AccuracyProxy::holdout_accuracy
                                                                : AccuracyProxy::inverse_risk);
  return rec;
}

std::vector<RoundRecord> run(const SimConfig& config, const Task& task) {
  auto devices = init_devices(config, task);
  auto server = init_server(config);
  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(config.T));
  for (int r = 1; r <= config.T; ++r) {
    records.push_back(run_round(server, devices, config, task, r));
    if (config.mse_threshold && records.back().mse < *config.mse_threshold) break;
  }
  return records;
}

}  // namespace safl
