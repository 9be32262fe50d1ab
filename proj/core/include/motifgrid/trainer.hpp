#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "motifgrid/mask.hpp"

namespace motifgrid::trainer {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

// ---------------------------------------------------------------------------
// Synthetic regression task

/// Fixed random two-layer tanh teacher. Inputs are rows; outputs stay
/// inside (-output_scale, output_scale), well within the atan range.
struct TargetFunction {
  Matrix hidden_weights;   // inputs x teacher_hidden
  RowVector hidden_bias;
  Matrix output_weights;   // teacher_hidden x outputs
  RowVector output_bias;
  double output_scale = 0.8;

  Matrix operator()(const Matrix& inputs) const;
};

struct TaskConfig {
  std::size_t inputs = 10;
  std::size_t outputs = 7;
  std::size_t samples = 10000;
  double validation_fraction = 0.2;
  std::size_t teacher_hidden = 16;
  std::uint64_t seed = 1;
};

struct Dataset {
  Matrix train_x, train_y;
  Matrix val_x, val_y;
  TargetFunction target;
};

/// Deterministic in the seed. Inputs are uniform in [-1, 1].
Dataset make_task(const TaskConfig& config);

// ---------------------------------------------------------------------------
// Network

/// Multilayer perceptron with atan applied at every layer. weights[l] is
/// (source x target), matching MaskMatrix orientation; masks[l] holds 0/1
/// and masked weights are kept at exactly zero.
struct DenseNet {
  std::vector<std::size_t> layer_dims;
  std::vector<Matrix> weights;
  std::vector<RowVector> biases;
  std::vector<Matrix> masks;

  /// Glorot-uniform weights, zero biases, all-ones masks.
  static DenseNet init(const std::vector<std::size_t>& layer_dims, std::uint64_t seed);

  std::size_t layer_count() const noexcept { return weights.size(); }
  std::uint64_t total_weights() const noexcept;
  std::uint64_t active_weights() const noexcept;
  double global_sparsity() const noexcept;

  MaskStack mask_stack(std::string label = {}) const;
  void apply_masks();
};

Matrix forward(const DenseNet& net, const Matrix& inputs);

/// Mean over samples and outputs of the squared error.
double mse(const DenseNet& net, const Matrix& inputs, const Matrix& targets);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<RowVector> biases;
  double loss = 0.0;
};

/// Analytic gradient of mse() by backpropagation. Weight gradients are
/// masked, so pruned positions receive exactly zero.
Gradients gradient(const DenseNet& net, const Matrix& inputs, const Matrix& targets);

// ---------------------------------------------------------------------------
// Training

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Optimizer { kMomentum, kAdam };

struct TrainConfig {
  Optimizer optimizer = Optimizer::kMomentum;
  std::size_t max_steps = 4000;
  std::size_t batch_size = 128;
  double learning_rate = 0.05;
  double momentum = 0.9;        // also Adam's first-moment decay
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t eval_every = 50;
  std::size_t patience = 1000;  // batches without min_delta improvement
  double min_delta = 1e-5;
  std::uint64_t seed = 1;
};

struct TrainResult {
  DenseNet net;
  double train_mse = 0.0;
  double val_mse = 0.0;
  std::size_t steps = 0;
  bool early_stopped = false;
};

/// Mini-batch SGD with momentum (or Adam) on the masked network. Returns the weights
/// with the best validation loss seen (evaluated every eval_every batches,
/// including before the first step). Throws TrainingDiverged if the loss
/// becomes non-finite.
TrainResult train(DenseNet net, const Dataset& data, const TrainConfig& config);

// ---------------------------------------------------------------------------
// Pruning

enum class PruneScope { kGlobal, kPerLayer };

/// Masks the smallest-magnitude surviving weights until floor(target *
/// total) weights are masked (per layer under kPerLayer). Ties go to the
/// lexicographically smallest (layer, row, col). Never unmasks. Throws
/// std::invalid_argument if target is below the current sparsity.
DenseNet prune_step(const DenseNet& net, double target_sparsity, PruneScope scope = PruneScope::kGlobal);

/// Number of masked weights that prune_step targets for `total` weights.
std::uint64_t pruned_target(double target_sparsity, std::uint64_t total);

struct PruneSchedule {
  std::vector<double> fractions;
  TrainConfig retrain;

  /// Throws std::invalid_argument unless fractions are strictly ascending
  /// within [0, 1).
  void validate() const;
};

PruneSchedule default_schedule();

struct SweepConfig {
  std::size_t population = 20;
  std::vector<std::size_t> layer_dims = {10, 32, 32, 16, 7};
  PruneSchedule schedule = default_schedule();
  TaskConfig task;
  TrainConfig initial_training;
  PruneScope scope = PruneScope::kGlobal;
  CleanupMode cleanup = CleanupMode::kForward;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct Snapshot {
  std::size_t network_id = 0;
  double level = 0.0;
  MaskStack pruned;        // masks exactly as left by prune_step
  MaskStack cleaned;       // after clean_dead
  std::uint64_t removed = 0;
  double global_sparsity = 0.0;  // of `pruned`
  double train_mse = 0.0;
  double val_mse = 0.0;
};

struct SweepResult {
  std::vector<Snapshot> snapshots;      // network-major, then schedule order
  std::vector<std::string> diagnostics;  // one line per skipped network
};

/// Label used for a snapshot: "net<id>-s<level>".
std::string snapshot_label(std::size_t network_id, double level);

/// Trains `population` independently initialized networks on one shared
/// task, then alternates prune_step and retraining over the schedule.
/// Deterministic per (seed, network id) regardless of jobs.
SweepResult sweep(const SweepConfig& config);

}  // namespace motifgrid::trainer
