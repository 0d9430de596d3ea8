#include <doctest.h>

#include <algorithm>

#include "safl/orchestrator.hpp"
#include "safl/scenarios.hpp"
#include "support.hpp"

using namespace safl;

namespace {

SimConfig ridge_config(Index n, int T, Algorithm algo) {
  SimConfig c;
  c.n = n;
  c.s = n;
  c.T = T;
  c.E = 1;
  c.algorithm = algo;
  c.lr = LrSchedule::constant(0.2);
  c.weights = {WeightKind::uniform, {}};
  c.gate.proxy = AccuracyProxy::inverse_risk;
  c.seed = 17;
  return c;
}

Task small_classes(Index n, Index biased, std::uint64_t seed) {
  const auto data = gaussian_classes_dataset({3, 4, 400, 2.0, seed});
  PartitionSpec spec;
  spec.n = n;
  spec.mean_size = 40;
  spec.size_var = 16;
  spec.max_labels_per_device = 3;
  spec.min_labels_per_device = 3;
  spec.biased_devices = biased;
  spec.seed = seed;
  return Task::from_shards(ObjectiveXd::logistic(4, 3, 0.05), partition(data, spec));
}

bool same_records(const std::vector<RoundRecord>& a, const std::vector<RoundRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].mse != b[i].mse || a[i].accuracy != b[i].accuracy || a[i].uploads != b[i].uploads ||
        a[i].uploaders != b[i].uploaders || a[i].p != b[i].p)
      return false;
  return true;
}

}  // namespace

TEST_CASE("safl with epsilon one is fedavg") {
  const auto task = isotropic_ridge_task({10, 6, 1.0, 0.1, 3});
  auto fed = ridge_config(10, 20, Algorithm::fedavg);
  auto safl = ridge_config(10, 20, Algorithm::safl);
  safl.anneal.epsilon = 1.0;
  for (double L : {0.5, 10.0, 1e6}) {
    safl.anneal.L = L;
    fed.anneal = safl.anneal;
    CHECK(same_records(run(fed, task), run(safl, task)));
  }
  fed.s = safl.s = 4;
  CHECK(same_records(run(fed, task), run(safl, task)));
}

TEST_CASE("annealed-out safl coincides with fedavg") {
  const auto task = isotropic_ridge_task({8, 5, 1.0, 0.1, 4});
  auto fed = ridge_config(8, 15, Algorithm::fedavg);
  auto safl = ridge_config(8, 15, Algorithm::safl);
  safl.anneal.epsilon = 0.2;
  safl.anneal.L = 1.0 / 40;  // p = exp(-40 r) < 1e-17 from the first round
  fed.anneal = safl.anneal;
  CHECK(same_records(run(fed, task), run(safl, task)));
}

TEST_CASE("epsilon zero with p near one keeps devices purely local") {
  const auto task = isotropic_ridge_task({6, 4, 1.0, 0.1, 5});
  auto cfg = ridge_config(6, 12, Algorithm::safl);
  cfg.anneal = {1e9, 0.0, AnnealClock::rounds, MaskMode::scalar};
  auto devices = init_devices(cfg, task);
  auto local = init_devices(cfg, task);
  auto server = init_server(cfg);
  for (int r = 1; r <= cfg.T; ++r) {
    run_round(server, devices, cfg, task, r);
    for (auto& d : local) d.w = run_local_epochs(d, task.objective, cfg.E, cfg.lr, cfg.order).z;
    for (std::size_t k = 0; k < devices.size(); ++k) CHECK(devices[k].w == local[k].w);
  }
}

TEST_CASE("communication accounting and annealing schedule") {
  const auto task = small_classes(12, 4, 2);
  for (auto algo : {Algorithm::fedavg, Algorithm::safl, Algorithm::safl_extended}) {
    SimConfig cfg;
    cfg.n = 12;
    cfg.s = 7;
    cfg.T = 25;
    cfg.algorithm = algo;
    cfg.lr = LrSchedule::constant(0.1);
    cfg.seed = 5;
    const auto recs = run(cfg, task);
    REQUIRE(recs.size() == 25);
    long total = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(recs[i].round == static_cast<int>(i) + 1);
      CHECK(recs[i].mse >= 0);
      CHECK(std::is_sorted(recs[i].uploaders.begin(), recs[i].uploaders.end()));
      if (algo == Algorithm::safl_extended)
        CHECK(recs[i].uploads <= cfg.s);
      else
        CHECK(recs[i].uploads == cfg.s);
      if (i > 0) CHECK(recs[i].p < recs[i - 1].p);
      total += recs[i].uploads;
    }
    CHECK(total <= cfg.n * cfg.T);
  }
}

TEST_CASE("worker count never changes results") {
  const auto task = small_classes(10, 3, 6);
  SimConfig cfg;
  cfg.n = 10;
  cfg.s = 6;
  cfg.T = 10;
  cfg.algorithm = Algorithm::safl_extended;
  cfg.lr = LrSchedule::constant(0.1);
  cfg.seed = 99;
  const auto base = run(cfg, task);
  for (unsigned threads : {2u, 3u, 8u}) {
    cfg.threads = threads;
    CHECK(same_records(base, run(cfg, task)));
  }
}

TEST_CASE("run edge cases") {
  const auto task = isotropic_ridge_task({3, 4, 1.0, 0.1, 1});
  auto cfg = ridge_config(3, 0, Algorithm::safl);
  CHECK(run(cfg, task).empty());

  cfg.T = 40;
  cfg.mse_threshold = 1e-3;
  const auto early = run(cfg, task);
  REQUIRE(!early.empty());
  CHECK(early.back().mse < 1e-3);
  CHECK(early.size() < 40);
  for (std::size_t i = 0; i + 1 < early.size(); ++i) CHECK(early[i].mse >= 1e-3);

  cfg.n = 4;
  CHECK_THROWS_AS(run(cfg, task), std::invalid_argument);
  cfg.n = 3;
  cfg.s = 4;
  CHECK_THROWS_AS(run(cfg, task), std::invalid_argument);
}

TEST_CASE("fedavg with one device is plain sgd") {
  const auto task = isotropic_ridge_task({1, 5, 1.0, 0.1, 8});
  const auto cfg = ridge_config(1, 10, Algorithm::fedavg);
  const auto recs = run(cfg, task);
  auto dev = init_devices(cfg, task);
  for (int r = 0; r < cfg.T; ++r) dev[0].w = run_local_epochs(dev[0], task.objective, cfg.E, cfg.lr).z;
  CHECK(recs.back().mse == (dev[0].w - task.optimum).squaredNorm());
}

TEST_CASE("divergence is reported with its round") {
  const auto task = isotropic_ridge_task({3, 4, 1.0, 0.1, 2});
  auto cfg = ridge_config(3, 200, Algorithm::fedavg);
  cfg.lr = LrSchedule::constant(50.0);
  try {
    run(cfg, task);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.round() >= 1);
    CHECK(std::string(e.what()).find("round") != std::string::npos);
  }
}

TEST_CASE("toy averaging is worse than the better local optimum") {
  const auto shards = lasso_toy_shards();
  const auto obj = ObjectiveXd::lasso(2, 1.0);
  std::vector<Update<double>> ups;
  for (Index k = 0; k < 2; ++k) ups.push_back({k, optimum_oracle(obj, shards[static_cast<std::size_t>(k)].train), 1});
  const VectorXd z_bar = aggregate(ups, weights({WeightKind::uniform, {}}, ups));
  const VectorXd w_star = optimum_oracle(obj, concatenate(shards[0].train, shards[1].train));
  CHECK(z_bar == Eigen::Vector2d(0, 2.0 / 9.0));
  CHECK(std::abs((w_star - z_bar).norm() - 2.0 / 9.0) < 1e-12);
  CHECK((w_star - ups[1].z).norm() == 0.0);

  std::vector<DeviceState> devices(2);
  for (std::size_t k = 0; k < 2; ++k) devices[k].w = ups[k].z;
  CHECK(global_estimate(devices, {0.5, 0.5}) == z_bar);
}

TEST_CASE("a label-pure device uploads at its gate rate") {
  const auto task = small_classes(5, 1, 13);
  SimConfig cfg;
  cfg.n = 5;
  cfg.s = 5;
  cfg.T = 200;
  cfg.algorithm = Algorithm::safl_extended;
  cfg.lr = LrSchedule::constant(0.1);
  cfg.gate.nu = 0.1;
  cfg.seed = 31;
  auto devices = init_devices(cfg, task);
  auto server = init_server(cfg);
  std::vector<double> q_biased, gap_biased;
  double sum_q = 0, var_q = 0;
  int biased_uploads = 0;
  long total_uploads = 0, other_uploads = 0;
  for (int r = 1; r <= cfg.T; ++r) {
    const auto rec = run_round(server, devices, cfg, task, r);
    for (const auto& d : devices) {
      sum_q += d.gate.q;
      var_q += d.gate.q * (1 - d.gate.q);
    }
    total_uploads += rec.uploads;
    const bool up = std::count(rec.uploaders.begin(), rec.uploaders.end(), Index{0}) > 0;
    biased_uploads += up;
    other_uploads += rec.uploads - up;
    q_biased.push_back(devices[0].gate.q);
    gap_biased.push_back(-cfg.gate.nu * std::log(devices[0].gate.q));
  }
  CHECK(task.shards[0].labels.size() == 1);
  CHECK(test::mean_of(gap_biased) > 0.05);

  // Bernoulli aggregate of the recorded probabilities
  double var = 0;
  for (double q : q_biased) var += q * (1 - q);
  const double T = cfg.T;
  const double rate = biased_uploads / T;
  CHECK(rate <= test::mean_of(q_biased) + 3 * std::sqrt(var) / T);
  CHECK(rate < other_uploads / (4 * T));

  CHECK(sum_q <= static_cast<double>(cfg.n * cfg.T));
  CHECK(std::abs(total_uploads - sum_q) <= 4 * std::sqrt(var_q));
}

TEST_CASE("devices with no gap always upload") {
  // every device holds the same single sample, so local and global accuracies coincide
  DatasetXd one;
  one.features = Eigen::RowVector2d(1.0, -1.0);
  one.targets = VectorXd::Zero(1);
  std::vector<Shard> shards(4, Shard{one, one, {0}});
  DatasetXd two = one;
  two.features.conservativeResize(2, 2);
  two.targets.conservativeResize(2);
  two.features.row(1) << -1.0, 1.0;
  two.targets(1) = 1;
  for (auto& s : shards) s.train = two, s.holdout = two;
  const auto task = Task::from_shards(ObjectiveXd::logistic(2, 2, 0.1), shards);
  SimConfig cfg;
  cfg.n = 4;
  cfg.s = 4;
  cfg.T = 30;
  cfg.algorithm = Algorithm::safl_extended;
  cfg.lr = LrSchedule::constant(0.1);
  cfg.init_scale = 0;
  for (const auto& rec : run(cfg, task)) CHECK(rec.uploads == 4);
}

TEST_CASE("ida weighting falls back to uniform before a global model exists") {
  const auto task = isotropic_ridge_task({4, 3, 1.0, 0.1, 9});
  auto cfg = ridge_config(4, 6, Algorithm::safl);
  cfg.weights = {WeightKind::ida, {}};
  const auto recs = run(cfg, task);
  CHECK(recs.size() == 6);
  auto devices = init_devices(cfg, task);
  const auto eta = estimate_weights(cfg.weights, devices, std::nullopt);
  for (double e : eta) CHECK(e == 0.25);
}
