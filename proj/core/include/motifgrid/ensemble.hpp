#pragma once

#include <cstdint>
#include <vector>

#include "motifgrid/mask.hpp"
#include "motifgrid/motif.hpp"

namespace motifgrid {

inline constexpr std::size_t kDefaultNullSamples = 1000;

/// Parameters of a null ensemble: same layer sizes and per-layer edge
/// counts as the network under study, edge positions uniform.
struct NullSpec {
  std::vector<std::size_t> layer_dims;
  std::vector<std::uint64_t> per_layer_edges;
  std::uint64_t seed = 0;
  std::size_t sample_count = kDefaultNullSamples;
};

/// Throws std::invalid_argument on a malformed spec (edge count above the
/// grid size, fewer than two samples, shape mismatch).
void validate_spec(const NullSpec& spec);

NullSpec null_spec_of(const MaskStack& stack, std::uint64_t seed, std::size_t sample_count = kDefaultNullSamples);

/// Null network `index` of the ensemble. A pure function of (spec, index):
/// every mask draws its edge positions from a stream seeded by
/// (seed, index, layer), so samples can be produced in any order.
MaskStack generate(const NullSpec& spec, std::size_t index);

/// count_all over every null network, in index order.
std::vector<MotifCensus> census_batch(const NullSpec& spec, std::size_t jobs = 1);

/// Uniform k-subset of {0, ..., n-1}, sorted ascending. Rejection sampling
/// below half density, partial Fisher-Yates otherwise.
std::vector<std::uint64_t> sample_positions(std::uint64_t n, std::uint64_t k, std::uint64_t seed);

}  // namespace motifgrid
