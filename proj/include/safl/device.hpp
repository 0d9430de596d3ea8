#pragma once

#include "safl/rng.hpp"
#include "safl/types.hpp"
#include "safl/upload_gate.hpp"

namespace safl {

struct DeviceState {
  Index id = 0;
  VectorXd w;       // current model
  DatasetXd shard;  // training samples
  DatasetXd holdout;
  Rng sgd_rng;
  Rng mask_rng;
  Rng gate_rng;
  GateState gate;
  long steps = 0;   // cumulative local SGD steps
  bool trained = false;

  // Evaluation data for the accuracy proxy: the holdout, or the shard when the
  // holdout is empty.
  const DatasetXd& eval_set() const { return holdout.empty() ? shard : holdout; }
};

}  // namespace safl
