#include "motifgrid/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "motifgrid/parallel.hpp"
#include "motifgrid/rng.hpp"

namespace motifgrid {

void validate_spec(const NullSpec& spec) {
  if (spec.layer_dims.size() < 2) throw std::invalid_argument("null spec needs at least two layers");
  if (spec.per_layer_edges.size() + 1 != spec.layer_dims.size()) {
    throw std::invalid_argument("null spec: per_layer_edges must have one entry per mask");
  }
  if (spec.sample_count < 2) throw std::invalid_argument("null spec: sample_count must be at least 2");
  for (std::size_t i = 0; i < spec.per_layer_edges.size(); ++i) {
    const std::uint64_t grid = static_cast<std::uint64_t>(spec.layer_dims[i]) * spec.layer_dims[i + 1];
    if (spec.layer_dims[i] == 0 || spec.layer_dims[i + 1] == 0) {
      throw std::invalid_argument("null spec: layer " + std::to_string(i) + " has zero width");
    }
    if (spec.per_layer_edges[i] > grid) {
      throw std::invalid_argument("null spec: mask " + std::to_string(i) + " asks for " +
                                  std::to_string(spec.per_layer_edges[i]) + " edges in a grid of " +
                                  std::to_string(grid));
    }
  }
}

NullSpec null_spec_of(const MaskStack& stack, std::uint64_t seed, std::size_t sample_count) {
  const auto profile = sparsity_profile(stack);
  return NullSpec{stack.layer_dims(), profile.per_layer_edges, seed, sample_count};
}

std::vector<std::uint64_t> sample_positions(std::uint64_t n, std::uint64_t k, std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("cannot sample more positions than the grid holds");
  Rng rng(seed);
  std::vector<std::uint64_t> picked;
  picked.reserve(k);
  if (2 * k < n) {
    std::vector<bool> taken(n, false);
    while (picked.size() < k) {
      const auto pos = rng.below(n);
      if (taken[pos]) continue;
      taken[pos] = true;
      picked.push_back(pos);
    }
  } else {
    std::vector<std::uint64_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < k; ++i) {
      const auto j = i + rng.below(n - i);
      std::swap(pool[i], pool[j]);
    }
    picked.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

MaskStack generate(const NullSpec& spec, std::size_t index) {
  validate_spec(spec);
  if (index >= spec.sample_count) throw std::out_of_range("null sample index out of range");
  const std::uint64_t sample_seed = derive_seed(spec.seed, index);
  std::vector<MaskMatrix> masks;
  masks.reserve(spec.per_layer_edges.size());
  for (std::size_t layer = 0; layer < spec.per_layer_edges.size(); ++layer) {
    const std::size_t rows = spec.layer_dims[layer];
    const std::size_t cols = spec.layer_dims[layer + 1];
    MaskMatrix m(rows, cols);
    for (auto pos : sample_positions(static_cast<std::uint64_t>(rows) * cols, spec.per_layer_edges[layer],
                                     derive_seed(sample_seed, layer))) {
      m.set(pos / cols, pos % cols, 1);
    }
    masks.push_back(std::move(m));
  }
  return MaskStack(std::move(masks), "null-" + std::to_string(index));
}

std::vector<MotifCensus> census_batch(const NullSpec& spec, std::size_t jobs) {
  validate_spec(spec);
  std::vector<MotifCensus> out(spec.sample_count);
  parallel_for(spec.sample_count, jobs, [&](std::size_t k) { out[k] = count_all(generate(spec, k)); });
  return out;
}

}  // namespace motifgrid
