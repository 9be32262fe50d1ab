#include "motifgrid/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "motifgrid/mask_io.hpp"
#include "motifgrid/parallel.hpp"
#include "motifgrid/rng.hpp"

namespace motifgrid::trainer {

namespace {

Matrix atan_of(const Matrix& z) { return z.array().atan().matrix(); }

Matrix atan_slope(const Matrix& z) { return (1.0 / (1.0 + z.array().square())).matrix(); }

Matrix uniform_matrix(Rng& rng, std::size_t rows, std::size_t cols, double limit) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-limit, limit);
  }
  return m;
}

Matrix normal_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = scale * rng.normal();
  }
  return m;
}

Matrix rows_of(const Matrix& m, const std::vector<std::size_t>& order, std::size_t begin, std::size_t end) {
  Matrix out(static_cast<Eigen::Index>(end - begin), m.cols());
  for (std::size_t i = begin; i < end; ++i) out.row(static_cast<Eigen::Index>(i - begin)) = m.row(static_cast<Eigen::Index>(order[i]));
  return out;
}

}  // namespace

Matrix TargetFunction::operator()(const Matrix& inputs) const {
  Matrix hidden = (inputs * hidden_weights).rowwise() + hidden_bias;
  hidden = hidden.array().tanh().matrix();
  Matrix out = (hidden * output_weights).rowwise() + output_bias;
  return (output_scale * out.array().tanh()).matrix();
}

Dataset make_task(const TaskConfig& config) {
  if (config.inputs == 0 || config.outputs == 0 || config.samples < 2) {
    throw std::invalid_argument("task needs inputs, outputs and at least two samples");
  }
  Rng rng(derive_seed(config.seed, 0x7461736BULL));
  Dataset data;
  auto& f = data.target;
  f.hidden_weights = normal_matrix(rng, config.inputs, config.teacher_hidden, 1.5 / std::sqrt(double(config.inputs)));
  f.hidden_bias = normal_matrix(rng, 1, config.teacher_hidden, 0.3);
  f.output_weights = normal_matrix(rng, config.teacher_hidden, config.outputs, 1.5 / std::sqrt(double(config.teacher_hidden)));
  f.output_bias = normal_matrix(rng, 1, config.outputs, 0.2);

  const Matrix x = uniform_matrix(rng, config.samples, config.inputs, 1.0);
  const Matrix y = f(x);
  auto n_val = static_cast<std::size_t>(std::floor(config.validation_fraction * double(config.samples)));
  n_val = std::clamp<std::size_t>(n_val, 1, config.samples - 1);
  const auto n_train = static_cast<Eigen::Index>(config.samples - n_val);
  data.train_x = x.topRows(n_train);
  data.train_y = y.topRows(n_train);
  data.val_x = x.bottomRows(static_cast<Eigen::Index>(n_val));
  data.val_y = y.bottomRows(static_cast<Eigen::Index>(n_val));
  return data;
}

DenseNet DenseNet::init(const std::vector<std::size_t>& layer_dims, std::uint64_t seed) {
  if (layer_dims.size() < 2) throw std::invalid_argument("network needs at least two layers");
  DenseNet net;
  net.layer_dims = layer_dims;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const std::size_t in = layer_dims[l], out = layer_dims[l + 1];
    if (in == 0 || out == 0) throw std::invalid_argument("layer width must be positive");
    const double limit = std::sqrt(6.0 / double(in + out));
    net.weights.push_back(uniform_matrix(rng, in, out, limit));
    net.biases.push_back(RowVector::Zero(static_cast<Eigen::Index>(out)));
    net.masks.push_back(Matrix::Ones(static_cast<Eigen::Index>(in), static_cast<Eigen::Index>(out)));
  }
  return net;
}

std::uint64_t DenseNet::total_weights() const noexcept {
  std::uint64_t n = 0;
  for (const auto& w : weights) n += static_cast<std::uint64_t>(w.size());
  return n;
}

std::uint64_t DenseNet::active_weights() const noexcept {
  std::uint64_t n = 0;
  for (const auto& m : masks) n += static_cast<std::uint64_t>((m.array() != 0.0).count());
  return n;
}

double DenseNet::global_sparsity() const noexcept {
  return 1.0 - double(active_weights()) / double(total_weights());
}

MaskStack DenseNet::mask_stack(std::string label) const {
  std::vector<MaskMatrix> out;
  for (const auto& m : masks) {
    MaskMatrix mm(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (m(r, c) != 0.0) mm.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), 1);
      }
    }
    out.push_back(std::move(mm));
  }
  return MaskStack(std::move(out), std::move(label));
}

void DenseNet::apply_masks() {
  for (std::size_t l = 0; l < weights.size(); ++l) weights[l] = weights[l].cwiseProduct(masks[l]);
}

Matrix forward(const DenseNet& net, const Matrix& inputs) {
  Matrix a = inputs;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    a = atan_of((a * net.weights[l]).rowwise() + net.biases[l]);
  }
  return a;
}

double mse(const DenseNet& net, const Matrix& inputs, const Matrix& targets) {
  return (forward(net, inputs) - targets).array().square().mean();
}

Gradients gradient(const DenseNet& net, const Matrix& inputs, const Matrix& targets) {
  const std::size_t L = net.layer_count();
  std::vector<Matrix> activations{inputs};
  std::vector<Matrix> pre;
  activations.reserve(L + 1);
  pre.reserve(L);
  for (std::size_t l = 0; l < L; ++l) {
    pre.push_back((activations.back() * net.weights[l]).rowwise() + net.biases[l]);
    activations.push_back(atan_of(pre.back()));
  }
  const Matrix diff = activations.back() - targets;
  Gradients g;
  g.loss = diff.array().square().mean();
  g.weights.resize(L);
  g.biases.resize(L);
  Matrix delta = (2.0 / double(diff.size())) * diff.cwiseProduct(atan_slope(pre.back()));
  for (std::size_t l = L; l-- > 0;) {
    g.weights[l] = (activations[l].transpose() * delta).cwiseProduct(net.masks[l]);
    g.biases[l] = delta.colwise().sum();
    if (l > 0) delta = (delta * net.weights[l].transpose()).cwiseProduct(atan_slope(pre[l - 1]));
  }
  return g;
}

TrainResult train(DenseNet net, const Dataset& data, const TrainConfig& config) {
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  Rng rng(config.seed);
  const auto n = static_cast<std::size_t>(data.train_x.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t cursor = n;

  // First moments (momentum velocity) and Adam second moments.
  std::vector<Matrix> vel_w, sq_w;
  std::vector<RowVector> vel_b, sq_b;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    vel_w.push_back(Matrix::Zero(net.weights[l].rows(), net.weights[l].cols()));
    vel_b.push_back(RowVector::Zero(net.biases[l].size()));
  }
  if (config.optimizer == Optimizer::kAdam) {
    sq_w = vel_w;
    sq_b = vel_b;
  }
  net.apply_masks();

  TrainResult result;
  double best_val = mse(net, data.val_x, data.val_y);
  if (!std::isfinite(best_val)) throw TrainingDiverged("validation loss is not finite before training");
  DenseNet best = net;
  std::size_t since_improvement = 0;

  std::size_t step = 0;
  for (; step < config.max_steps; ++step) {
    if (cursor + config.batch_size > n) {
      for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      cursor = 0;
    }
    const std::size_t end = std::min(n, cursor + config.batch_size);
    const Matrix bx = rows_of(data.train_x, order, cursor, end);
    const Matrix by = rows_of(data.train_y, order, cursor, end);
    cursor = end;

    const Gradients g = gradient(net, bx, by);
    if (!std::isfinite(g.loss)) {
      throw TrainingDiverged("training loss became non-finite at step " + std::to_string(step));
    }
    if (config.optimizer == Optimizer::kAdam) {
      const double b1 = config.momentum, b2 = config.adam_beta2;
      const double t = double(step + 1);
      const double rate = config.learning_rate * std::sqrt(1.0 - std::pow(b2, t)) / (1.0 - std::pow(b1, t));
      for (std::size_t l = 0; l < net.layer_count(); ++l) {
        vel_w[l] = b1 * vel_w[l] + (1.0 - b1) * g.weights[l];
        sq_w[l] = b2 * sq_w[l] + (1.0 - b2) * g.weights[l].cwiseAbs2();
        vel_b[l] = b1 * vel_b[l] + (1.0 - b1) * g.biases[l];
        sq_b[l] = b2 * sq_b[l] + (1.0 - b2) * g.biases[l].cwiseAbs2();
        net.weights[l].array() -= rate * vel_w[l].array() / (sq_w[l].array().sqrt() + config.adam_epsilon);
        net.biases[l].array() -= rate * vel_b[l].array() / (sq_b[l].array().sqrt() + config.adam_epsilon);
      }
    } else {
      for (std::size_t l = 0; l < net.layer_count(); ++l) {
        vel_w[l] = config.momentum * vel_w[l] - config.learning_rate * g.weights[l];
        vel_b[l] = config.momentum * vel_b[l] - config.learning_rate * g.biases[l];
        net.weights[l] += vel_w[l];
        net.biases[l] += vel_b[l];
      }
    }
    net.apply_masks();

    if ((step + 1) % config.eval_every == 0) {
      const double val = mse(net, data.val_x, data.val_y);
      if (!std::isfinite(val)) {
        throw TrainingDiverged("validation loss became non-finite at step " + std::to_string(step));
      }
      if (val < best_val - config.min_delta) {
        best_val = val;
        best = net;
        since_improvement = 0;
      } else {
        since_improvement += config.eval_every;
        if (since_improvement >= config.patience) {
          result.early_stopped = true;
          ++step;
          break;
        }
      }
    }
  }
  result.steps = step;
  result.val_mse = best_val;
  result.train_mse = mse(best, data.train_x, data.train_y);
  result.net = std::move(best);
  return result;
}

std::uint64_t pruned_target(double target_sparsity, std::uint64_t total) {
  // The small offset keeps fractions such as 0.3 * 10 from flooring to 2.
  const double raw = target_sparsity * double(total) + 1e-9;
  return std::min<std::uint64_t>(total, static_cast<std::uint64_t>(std::floor(raw)));
}

namespace {

struct Candidate {
  double magnitude;
  std::size_t layer;
  Eigen::Index row;
  Eigen::Index col;
};

bool weaker(const Candidate& a, const Candidate& b) {
  if (a.magnitude != b.magnitude) return a.magnitude < b.magnitude;
  if (a.layer != b.layer) return a.layer < b.layer;
  if (a.row != b.row) return a.row < b.row;
  return a.col < b.col;
}

void mask_weakest(DenseNet& net, std::vector<Candidate>& candidates, std::uint64_t count) {
  if (count == 0) return;
  const auto mid = candidates.begin() + static_cast<std::ptrdiff_t>(count);
  std::partial_sort(candidates.begin(), mid, candidates.end(), weaker);
  for (auto it = candidates.begin(); it != mid; ++it) {
    net.masks[it->layer](it->row, it->col) = 0.0;
    net.weights[it->layer](it->row, it->col) = 0.0;
  }
}

std::vector<Candidate> survivors(const DenseNet& net, std::size_t layer) {
  std::vector<Candidate> out;
  const auto& m = net.masks[layer];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0.0) out.push_back({std::abs(net.weights[layer](r, c)), layer, r, c});
    }
  }
  return out;
}

}  // namespace

DenseNet prune_step(const DenseNet& net, double target_sparsity, PruneScope scope) {
  if (!(target_sparsity >= 0.0 && target_sparsity <= 1.0)) {
    throw std::invalid_argument("target sparsity must lie in [0, 1]");
  }
  DenseNet out = net;
  if (scope == PruneScope::kGlobal) {
    const std::uint64_t total = net.total_weights();
    const std::uint64_t already = total - net.active_weights();
    const std::uint64_t wanted = pruned_target(target_sparsity, total);
    if (wanted < already) throw std::invalid_argument("target sparsity is below the current sparsity");
    std::vector<Candidate> candidates;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      auto layer = survivors(net, l);
      candidates.insert(candidates.end(), layer.begin(), layer.end());
    }
    mask_weakest(out, candidates, wanted - already);
  } else {
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      const auto total = static_cast<std::uint64_t>(net.masks[l].size());
      const auto active = static_cast<std::uint64_t>((net.masks[l].array() != 0.0).count());
      const std::uint64_t wanted = pruned_target(target_sparsity, total);
      if (wanted < total - active) throw std::invalid_argument("target sparsity is below the current layer sparsity");
      auto candidates = survivors(net, l);
      mask_weakest(out, candidates, wanted - (total - active));
    }
  }
  return out;
}

void PruneSchedule::validate() const {
  if (fractions.empty()) throw std::invalid_argument("prune schedule is empty");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] >= 0.0 && fractions[i] < 1.0)) {
      throw std::invalid_argument("prune fractions must lie in [0, 1)");
    }
    if (i > 0 && !(fractions[i] > fractions[i - 1])) {
      throw std::invalid_argument("prune fractions must be strictly ascending");
    }
  }
}

PruneSchedule default_schedule() {
  PruneSchedule s;
  s.fractions = {0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.84, 0.88, 0.92, 0.95};
  s.retrain.max_steps = 1500;
  return s;
}

std::string snapshot_label(std::size_t network_id, double level) {
  return "net" + std::to_string(network_id) + "-s" + format_double(level);
}

namespace {

struct NetworkRun {
  std::vector<Snapshot> snapshots;
  std::string diagnostic;
};

NetworkRun run_network(const SweepConfig& config, const Dataset& data, std::size_t id) {
  NetworkRun run;
  const std::uint64_t net_seed = derive_seed(config.seed, id);
  try {
    TrainConfig initial = config.initial_training;
    initial.seed = derive_seed(net_seed, 0);
    auto trained = train(DenseNet::init(config.layer_dims, derive_seed(net_seed, 1)), data, initial);
    DenseNet net = std::move(trained.net);
    for (std::size_t k = 0; k < config.schedule.fractions.size(); ++k) {
      const double level = config.schedule.fractions[k];
      net = prune_step(net, level, config.scope);
      TrainConfig retrain = config.schedule.retrain;
      retrain.seed = derive_seed(net_seed, 2 + k);
      auto result = train(std::move(net), data, retrain);
      net = std::move(result.net);

      Snapshot snap;
      snap.network_id = id;
      snap.level = level;
      snap.pruned = net.mask_stack(snapshot_label(id, level));
      auto cleaned = clean_dead(snap.pruned, config.cleanup);
      snap.cleaned = std::move(cleaned.stack);
      snap.removed = cleaned.removed;
      snap.global_sparsity = net.global_sparsity();
      snap.train_mse = result.train_mse;
      snap.val_mse = result.val_mse;
      run.snapshots.push_back(std::move(snap));
    }
  } catch (const TrainingDiverged& e) {
    run.snapshots.clear();
    run.diagnostic = "network " + std::to_string(id) + " skipped: " + e.what();
  }
  return run;
}

}  // namespace

SweepResult sweep(const SweepConfig& config) {
  config.schedule.validate();
  if (config.population == 0) throw std::invalid_argument("population must be positive");
  if (config.layer_dims.size() < 2) throw std::invalid_argument("architecture needs at least two layers");
  TaskConfig task = config.task;
  task.inputs = config.layer_dims.front();
  task.outputs = config.layer_dims.back();
  const Dataset data = make_task(task);

  std::vector<NetworkRun> runs(config.population);
  parallel_for(config.population, config.jobs, [&](std::size_t id) { runs[id] = run_network(config, data, id); });

  SweepResult result;
  for (auto& run : runs) {
    if (!run.diagnostic.empty()) result.diagnostics.push_back(std::move(run.diagnostic));
    for (auto& s : run.snapshots) result.snapshots.push_back(std::move(s));
  }
  return result;
}

}  // namespace motifgrid::trainer
