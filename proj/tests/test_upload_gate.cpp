#include <doctest.h>

#include "safl/upload_gate.hpp"
#include "support.hpp"

using namespace safl;

TEST_CASE("accuracy proxy") {
  const auto obj = ObjectiveXd::logistic(2, 2, 0.1);
  DatasetXd eval;
  eval.features.resize(10, 2);
  eval.targets.resize(10);
  for (Index i = 0; i < 10; ++i) {
    const double sign = i % 2 ? 1.0 : -1.0;
    eval.features.row(i) << sign, 0.5;
    eval.targets(i) = i % 2;
  }
  // class 1 scores x_0, class 0 scores -x_0: a perfect separator
  VectorXd w(4);
  w << -1, 0, 1, 0;
  CHECK(accuracy_proxy(w, eval, obj, AccuracyProxy::holdout_accuracy) == 1.0);
  for (Index i = 0; i < 3; ++i) eval.targets(i) = 1 - eval.targets(i);
  CHECK(accuracy_proxy(w, eval, obj, AccuracyProxy::holdout_accuracy) == doctest::Approx(0.7).epsilon(1e-15));

  const auto ls = ObjectiveXd::least_squares(2);
  const auto data = test::random_regression(6, 2, 3, 0.0);
  CHECK(accuracy_proxy(optimum_oracle(ls, data), data, ls, AccuracyProxy::inverse_risk) == doctest::Approx(1.0));
  const double r = empirical_risk(ls, VectorXd(VectorXd::Zero(2)), data);
  CHECK(accuracy_proxy(VectorXd(VectorXd::Zero(2)), data, ls, AccuracyProxy::inverse_risk) == 1.0 / (1.0 + r));
  CHECK_THROWS_AS(accuracy_proxy(VectorXd(VectorXd::Zero(2)), data, ls, AccuracyProxy::holdout_accuracy),
                  UnsupportedOperation);
  CHECK_THROWS(accuracy_proxy(VectorXd(VectorXd::Zero(2)), DatasetXd{}, ls, AccuracyProxy::inverse_risk));
}

TEST_CASE("performance gap and upload probability") {
  CHECK(performance_gap(0.6, 0.6, 1e-6) == 0.0);
  CHECK(performance_gap(0.0, 0.0, 1e-6) == 0.0);
  CHECK(performance_gap(0.9, 0.3, 1e-6) == doctest::Approx(0.6 / 1.200001).epsilon(1e-14));
  CHECK(performance_gap(0.3, 0.9, 1e-6) == performance_gap(0.9, 0.3, 1e-6));
  CHECK(performance_gap(0.9, 0.3, 1e-6) == doctest::Approx(0.49999958).epsilon(1e-8));
  CHECK_THROWS(performance_gap(-0.1, 0.3, 1e-6));

  CHECK(upload_probability(0.0, 0.1) == 1.0);
  CHECK(upload_probability(0.25, 0.25) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(upload_probability(1.0, 0.01) > 0.0);
  CHECK(upload_probability(1.0, 1e-9) > 0.0);
  CHECK(upload_probability(0.1, 0.2) > upload_probability(0.2, 0.2));
  CHECK_THROWS(upload_probability(-0.1, 0.1));
  CHECK_THROWS(upload_probability(0.1, 0.0));
}

TEST_CASE("upload decisions") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) CHECK(decide_upload(1.0, rng));
  CHECK_THROWS(decide_upload(0.0, rng));
  CHECK_THROWS(decide_upload(1.5, rng));

  Rng a = make_stream(3, Stream::gate, 7), b = make_stream(3, Stream::gate, 7);
  for (int i = 0; i < 100; ++i) CHECK(decide_upload(0.3, a) == decide_upload(0.3, b));

  Rng c = make_stream(12, Stream::gate, 0);
  const int trials = 100000;
  int yes = 0;
  for (int i = 0; i < trials; ++i) yes += decide_upload(0.5, c);
  CHECK(std::abs(yes / double(trials) - 0.5) < 3 * std::sqrt(0.25 / trials));
}

TEST_CASE("gate config validation") {
  GateConfig g;
  CHECK_NOTHROW(g.validate());
  g.nu = 0;
  CHECK_THROWS(g.validate());
  g.nu = 0.1;
  g.eps_div = 0;
  CHECK_THROWS(g.validate());
}
