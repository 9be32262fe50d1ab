#include <doctest.h>

#include <limits>

#include "gradient_check.hpp"
#include "motifgrid/trainer.hpp"

using namespace motifgrid;
using namespace motifgrid::trainer;

namespace {

bool masked_weights_are_zero(const DenseNet& net) {
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (((net.masks[l].array() == 0.0) && (net.weights[l].array() != 0.0)).any()) return false;
  }
  return true;
}

bool subset_of(const MaskStack& inner, const MaskStack& outer) {
  for (std::size_t l = 0; l < inner.size(); ++l) {
    for (std::size_t i = 0; i < inner[l].size(); ++i) {
      if (inner[l].entries()[i] && !outer[l].entries()[i]) return false;
    }
  }
  return true;
}

SweepConfig small_sweep() {
  SweepConfig c;
  c.population = 2;
  c.layer_dims = {4, 6, 5, 3};
  c.task.samples = 400;
  c.initial_training.max_steps = 200;
  c.initial_training.batch_size = 32;
  c.schedule.fractions = {0.5, 0.9};
  c.schedule.retrain.max_steps = 60;
  c.schedule.retrain.batch_size = 32;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("task generation") {
  TaskConfig cfg;
  const Dataset a = make_task(cfg);
  const Dataset b = make_task(cfg);
  CHECK(a.train_x == b.train_x);
  CHECK(a.val_y == b.val_y);
  CHECK(a.train_x.rows() == 8000);
  CHECK(a.val_x.rows() == 2000);
  CHECK(a.train_x.cols() == 10);
  CHECK(a.train_y.cols() == 7);
  CHECK(a.target(a.train_x) == a.train_y);
  CHECK(a.target(a.val_x) == a.val_y);
  cfg.seed = 2;
  CHECK(make_task(cfg).train_x != a.train_x);
}

TEST_CASE("network initialization") {
  const auto net = DenseNet::init({3, 4, 2}, 9);
  CHECK(net.layer_count() == 2);
  CHECK(net.weights[0].rows() == 3);
  CHECK(net.weights[0].cols() == 4);
  CHECK(net.total_weights() == 20);
  CHECK(net.active_weights() == 20);
  CHECK(net.global_sparsity() == 0.0);
  const double limit = std::sqrt(6.0 / 7.0);
  CHECK(net.weights[0].cwiseAbs().maxCoeff() <= limit);
  CHECK(net.mask_stack("n") == MaskStack({MaskMatrix::full(3, 4), MaskMatrix::full(4, 2)}, "n"));
}

TEST_CASE("analytic gradient matches finite differences") {
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto net = testing::random_small_net(seed);
    const auto x = testing::random_matrix(rng, 7, net.layer_dims.front());
    const auto y = testing::random_matrix(rng, 7, net.layer_dims.back());
    const auto check = testing::check_gradient(net, x, y);
    CHECK(check.compared > 0);
    CHECK(check.worst_relative < 1e-4);
  }
}

TEST_CASE("masked gradient entries are exactly zero") {
  const auto net = testing::random_small_net(3);
  Rng rng(1);
  const auto g = gradient(net, testing::random_matrix(rng, 5, net.layer_dims.front()),
                          testing::random_matrix(rng, 5, net.layer_dims.back()));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    CHECK(((net.masks[l].array() == 0.0) && (g.weights[l].array() != 0.0)).count() == 0);
  }
}

TEST_CASE("a fully masked network keeps zero weights through training") {
  TaskConfig task;
  task.samples = 300;
  task.inputs = 3;
  task.outputs = 2;
  const Dataset data = make_task(task);
  DenseNet net = DenseNet::init({3, 4, 2}, 1);
  for (auto& m : net.masks) m.setZero();
  TrainConfig cfg;
  cfg.max_steps = 100;
  const auto result = train(net, data, cfg);
  for (const auto& w : result.net.weights) CHECK(w.isZero(0.0));
}

TEST_CASE("training keeps pruned weights at zero and lowers the loss") {
  TaskConfig task;
  task.samples = 2000;
  const Dataset data = make_task(task);
  DenseNet net = prune_step(DenseNet::init({10, 12, 7}, 3), 0.5);
  const double before = mse(net, data.val_x, data.val_y);
  TrainConfig cfg;
  cfg.max_steps = 400;
  const auto result = train(net, data, cfg);
  CHECK(masked_weights_are_zero(result.net));
  CHECK(result.net.masks == net.masks);
  CHECK(result.val_mse < before);
  CHECK(result.val_mse == doctest::Approx(mse(result.net, data.val_x, data.val_y)));
}

TEST_CASE("a linear target is learned to below 1e-3 held-out error") {
  Rng rng(4);
  Dataset data;
  const Matrix map = (Matrix(2, 2) << 0.4, -0.2, 0.1, 0.3).finished();
  data.train_x = testing::random_matrix(rng, 2000, 2);
  data.val_x = testing::random_matrix(rng, 500, 2);
  data.train_y = data.train_x * map;
  data.val_y = data.val_x * map;
  TrainConfig cfg;
  cfg.max_steps = 3000;
  cfg.batch_size = 64;
  const auto result = train(DenseNet::init({2, 4, 2}, 8), data, cfg);
  CHECK(result.val_mse < 1e-3);
}

TEST_CASE("divergence is reported") {
  TaskConfig task;
  task.samples = 200;
  const Dataset data = make_task(task);
  TrainConfig cfg;
  cfg.learning_rate = std::numeric_limits<double>::quiet_NaN();
  cfg.max_steps = 50;
  CHECK_THROWS_AS(train(DenseNet::init({10, 8, 7}, 1), data, cfg), TrainingDiverged);
}

TEST_CASE("pruning removes the smaller magnitude") {
  DenseNet net = DenseNet::init({2, 1}, 1);
  net.weights[0](0, 0) = 0.99;
  net.weights[0](1, 0) = 0.01;
  const auto pruned = prune_step(net, 0.5);
  CHECK(pruned.masks[0](0, 0) == 1.0);
  CHECK(pruned.masks[0](1, 0) == 0.0);
  CHECK(pruned.weights[0](1, 0) == 0.0);
}

TEST_CASE("pruning to the current sparsity changes nothing") {
  const DenseNet net = prune_step(DenseNet::init({5, 4, 3}, 2), 0.4);
  const DenseNet again = prune_step(net, net.global_sparsity());
  CHECK(again.masks == net.masks);
  CHECK(again.weights == net.weights);
  CHECK_THROWS_AS(prune_step(net, 0.2), std::invalid_argument);
}

TEST_CASE("pruned count is the floor of target times total") {
  CHECK(pruned_target(0.3, 10) == 3);
  CHECK(pruned_target(0.95, 32) == 30);
  CHECK(pruned_target(1.0, 7) == 7);
  const DenseNet net = DenseNet::init({10, 32, 32, 16, 7}, 6);
  for (double level : {0.15, 0.55, 0.9, 0.95}) {
    const auto pruned = prune_step(net, level);
    CHECK(net.total_weights() - pruned.active_weights() == pruned_target(level, net.total_weights()));
  }
}

TEST_CASE("pruning ties go to the lexicographically first position") {
  DenseNet net = DenseNet::init({2, 2, 1}, 1);
  net.weights[0].setConstant(0.5);
  net.weights[1].setConstant(0.5);
  const auto pruned = prune_step(net, 3.0 / 6.0);
  CHECK(pruned.masks[0](0, 0) == 0.0);
  CHECK(pruned.masks[0](0, 1) == 0.0);
  CHECK(pruned.masks[0](1, 0) == 0.0);
  CHECK(pruned.masks[0](1, 1) == 1.0);
  CHECK(pruned.masks[1].sum() == 2.0);
}

TEST_CASE("per-layer pruning hits the level in every layer") {
  const DenseNet net = DenseNet::init({6, 10, 4}, 12);
  const auto pruned = prune_step(net, 0.5, PruneScope::kPerLayer);
  CHECK(pruned.masks[0].sum() == 30.0);
  CHECK(pruned.masks[1].sum() == 20.0);
}

TEST_CASE("schedule validation") {
  PruneSchedule s;
  s.fractions = {0.5, 0.5};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.fractions = {0.5, 1.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.fractions = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.fractions = {0.0, 0.3};
  CHECK_NOTHROW(s.validate());
  CHECK_NOTHROW(default_schedule().validate());
}

TEST_CASE("sweep with a single zero level yields dense masks") {
  SweepConfig c = small_sweep();
  c.schedule.fractions = {0.0};
  const auto result = sweep(c);
  REQUIRE(result.snapshots.size() == 2);
  for (const auto& s : result.snapshots) {
    CHECK(sparsity_profile(s.pruned).global_sparsity == 0.0);
    CHECK(s.removed == 0);
  }
}

TEST_CASE("sweep emits one snapshot per network and level") {
  const auto result = sweep(small_sweep());
  CHECK(result.diagnostics.empty());
  REQUIRE(result.snapshots.size() == 4);
  CHECK(result.snapshots[0].pruned.label() == "net0-s0.5");
  CHECK(result.snapshots[3].pruned.label() == "net1-s0.9");
  const std::uint64_t total = 4 * 6 + 6 * 5 + 5 * 3;
  for (const auto& s : result.snapshots) {
    const auto profile = sparsity_profile(s.pruned);
    CHECK(profile.total_possible - profile.total_edges == pruned_target(s.level, total));
    CHECK(s.global_sparsity == profile.global_sparsity);
    CHECK(subset_of(s.cleaned, s.pruned));
    CHECK(clean_dead(s.cleaned).removed == 0);
  }
  CHECK(subset_of(result.snapshots[1].pruned, result.snapshots[0].pruned));
  CHECK(subset_of(result.snapshots[3].pruned, result.snapshots[2].pruned));
}

TEST_CASE("sweep output does not depend on the worker count") {
  SweepConfig c = small_sweep();
  const auto serial = sweep(c);
  c.jobs = 2;
  const auto parallel = sweep(c);
  REQUIRE(serial.snapshots.size() == parallel.snapshots.size());
  for (std::size_t i = 0; i < serial.snapshots.size(); ++i) {
    CHECK(serial.snapshots[i].pruned == parallel.snapshots[i].pruned);
    CHECK(serial.snapshots[i].val_mse == parallel.snapshots[i].val_mse);
  }
}

TEST_CASE("a diverging network is skipped with a diagnostic") {
  SweepConfig c = small_sweep();
  c.initial_training.learning_rate = std::numeric_limits<double>::quiet_NaN();
  const auto result = sweep(c);
  CHECK(result.snapshots.empty());
  CHECK(result.diagnostics.size() == 2);
}
