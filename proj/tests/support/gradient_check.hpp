#pragma once

#include <algorithm>
#include <cmath>

#include "motifgrid/rng.hpp"
#include "motifgrid/trainer.hpp"

namespace motifgrid::testing {

struct GradientCheck {
  double worst_relative = 0.0;
  std::size_t compared = 0;
};

/// Compares the analytic gradient with central finite differences for every
/// unmasked weight and every bias. The error of one entry is
/// |a - n| / max(|a|, |n|), with entries below `floor` in both forms skipped.
inline GradientCheck check_gradient(const trainer::DenseNet& net, const trainer::Matrix& x,
                                    const trainer::Matrix& y, double h = 1e-5, double floor = 1e-7) {
  const auto analytic = trainer::gradient(net, x, y);
  GradientCheck out;
  auto compare = [&](double a, double numeric) {
    const double scale = std::max(std::abs(a), std::abs(numeric));
    if (scale < floor) return;
    out.worst_relative = std::max(out.worst_relative, std::abs(a - numeric) / scale);
    ++out.compared;
  };
  trainer::DenseNet probe = net;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (Eigen::Index r = 0; r < net.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < net.weights[l].cols(); ++c) {
        if (net.masks[l](r, c) == 0.0) continue;
        const double w = net.weights[l](r, c);
        probe.weights[l](r, c) = w + h;
        const double up = trainer::mse(probe, x, y);
        probe.weights[l](r, c) = w - h;
        const double down = trainer::mse(probe, x, y);
        probe.weights[l](r, c) = w;
        compare(analytic.weights[l](r, c), (up - down) / (2 * h));
      }
    }
    for (Eigen::Index c = 0; c < net.biases[l].size(); ++c) {
      const double b = net.biases[l](c);
      probe.biases[l](c) = b + h;
      const double up = trainer::mse(probe, x, y);
      probe.biases[l](c) = b - h;
      const double down = trainer::mse(probe, x, y);
      probe.biases[l](c) = b;
      compare(analytic.biases[l](c), (up - down) / (2 * h));
    }
  }
  return out;
}

/// Small random network with random biases and a random partial mask.
inline trainer::DenseNet random_small_net(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> dims;
  const std::size_t layers = 2 + rng.below(3);
  for (std::size_t i = 0; i <= layers; ++i) dims.push_back(1 + rng.below(6));
  auto net = trainer::DenseNet::init(dims, derive_seed(seed, 1));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (Eigen::Index c = 0; c < net.biases[l].size(); ++c) net.biases[l](c) = rng.uniform(-0.5, 0.5);
    for (Eigen::Index r = 0; r < net.masks[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < net.masks[l].cols(); ++c) {
        if (rng.uniform() < 0.25) net.masks[l](r, c) = 0.0;
      }
    }
  }
  net.apply_masks();
  return net;
}

inline trainer::Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  trainer::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

}  // namespace motifgrid::testing
