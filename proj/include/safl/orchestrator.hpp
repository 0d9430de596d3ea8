#pragma once

// The synchronous round loop shared by FedAvg, SAFL and extended SAFL.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safl/aggregator.hpp"
#include "safl/device.hpp"
#include "safl/local_trainer.hpp"
#include "safl/objectives.hpp"
#include "safl/partitioner.hpp"
#include "safl/sa_mixer.hpp"
#include "safl/upload_gate.hpp"

namespace safl {

enum class Algorithm { fedavg, safl, safl_extended };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

// A learning problem split across devices, with its precomputed optimum and
// per-device curvature constants (evaluated at the optimum).
struct Task {
  ObjectiveXd objective;
  std::vector<Shard> shards;
  VectorXd optimum;
  DatasetXd pooled_train;
  DatasetXd pooled_eval;
  std::vector<CurvatureBounds<double>> curvature;

  Index devices() const { return static_cast<Index>(shards.size()); }
  double mu() const;      // min over devices
  double lambda() const;  // max over devices
  Index max_shard_size() const;

  // The optimum is the minimizer of the risk over the union of the training
  // shards (the size-weighted global objective).
  static Task from_shards(const ObjectiveXd& objective, std::vector<Shard> shards);
};

struct SimConfig {
  Index n = 1;
  Index s = 1;
  int T = 1;
  int E = 1;
  Algorithm algorithm = Algorithm::safl;
  AnnealConfig anneal;
  GateConfig gate;
  WeightScheme weights;
  LrSchedule lr;
  SampleOrder order = SampleOrder::iid;
  double init_scale = 0.1;
  std::uint64_t seed = 0;
  std::optional<double> mse_threshold;  // early stop once mse < threshold
  unsigned threads = 1;                 // speed only, never results

  void validate() const;
};

struct ServerState {
  std::optional<VectorXd> z_bar;
  int round = 0;
  Rng rng;
};

struct RoundRecord {
  int round = 0;
  double mse = 0;
  double accuracy = 0;
  Index uploads = 0;
  double expected_uploads = 0;  // sum of upload probabilities of the selected devices
  double p = 0;
  long local_steps = 0;         // largest cumulative local step count
  Index selected = 0;
  std::vector<Index> uploaders;  // device ids whose update reached the server
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
  int round() const { return round_; }

 private:
  int round_;
};

// Device states after initialization: per-device N(0, init_scale^2) models
// drawn from streams that depend only on (seed, device id).
std::vector<DeviceState> init_devices(const SimConfig& config, const Task& task);
ServerState init_server(const SimConfig& config);

// One round: select, apply the previous round's server feedback to the
// selected devices, train locally, optionally gate the upload, aggregate.
RoundRecord run_round(ServerState& server, std::vector<DeviceState>& devices, const SimConfig& config,
                      const Task& task, int round);

std::vector<RoundRecord> run(const SimConfig& config, const Task& task);

// Weights over all devices used for the global estimate w_hat.
std::vector<double> estimate_weights(const WeightScheme& scheme, const std::vector<DeviceState>& devices,
                                     const std::optional<VectorXd>& z_ref);

VectorXd global_estimate(const std::vector<DeviceState>& devices, const std::vector<double>& eta);

}  // namespace safl
