#pragma once

#include <cstdint>
#include <vector>

#include "motifgrid/mask.hpp"
#include "motifgrid/motif.hpp"
#include "motifgrid/rng.hpp"

namespace motifgrid::testing {

/// Two-mask worked example: 3 inputs, 3 hidden, 2 outputs, 6 edges.
inline MaskStack chain_example() {
  return MaskStack({MaskMatrix::from_rows({{0, 0, 1}, {1, 1, 0}, {0, 0, 0}}),
                    MaskMatrix::from_rows({{1, 1}, {0, 0}, {1, 0}})},
                   "chain_example");
}

/// Four-mask example network (2-3-3-3-2).
inline MaskStack four_layer_example() {
  return MaskStack({MaskMatrix::from_rows({{1, 1, 0}, {1, 0, 0}}),
                    MaskMatrix::from_rows({{0, 0, 1}, {1, 1, 0}, {0, 0, 0}}),
                    MaskMatrix::from_rows({{1, 1, 0}, {0, 0, 0}, {1, 0, 1}}),
                    MaskMatrix::from_rows({{1, 0}, {0, 1}, {0, 1}})},
                   "four_layer");
}

/// Single 5x5 mask with 12 edges.
inline MaskStack fan_5x5() {
  return MaskStack({MaskMatrix::from_rows({{1, 1, 0, 1, 0},
                                           {1, 0, 1, 1, 0},
                                           {0, 1, 1, 1, 0},
                                           {1, 1, 0, 0, 1},
                                           {0, 0, 0, 0, 0}})},
                   "fan_5x5");
}

inline MaskStack full_stack(const std::vector<std::size_t>& dims) {
  std::vector<MaskMatrix> masks;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) masks.push_back(MaskMatrix::full(dims[i], dims[i + 1]));
  return MaskStack(std::move(masks));
}

inline MaskStack empty_stack(const std::vector<std::size_t>& dims) {
  std::vector<MaskMatrix> masks;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) masks.emplace_back(dims[i], dims[i + 1]);
  return MaskStack(std::move(masks));
}

/// Layer dims drawn uniformly from [1, max_width], each mask with its own
/// Bernoulli density drawn uniformly from [0, 1].
inline MaskStack random_stack(Rng& rng, std::size_t max_masks, std::size_t max_width) {
  const std::size_t layers = 1 + rng.below(max_masks);
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i <= layers; ++i) dims.push_back(1 + rng.below(max_width));
  std::vector<MaskMatrix> masks;
  for (std::size_t i = 0; i < layers; ++i) {
    const double density = rng.uniform();
    MaskMatrix m(dims[i], dims[i + 1]);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) m.set(r, c, rng.uniform() < density ? 1 : 0);
    }
    masks.push_back(std::move(m));
  }
  return MaskStack(std::move(masks));
}

/// Closed-form census of a fully connected stack with the given widths.
inline MotifCensus full_census(const std::vector<std::size_t>& d) {
  auto c2 = [](std::uint64_t n) -> std::uint64_t { return n < 2 ? 0 : n * (n - 1) / 2; };
  auto c3 = [](std::uint64_t n) -> std::uint64_t { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; };
  MotifCensus out;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    out[MotifKind::kConverging2] += d[i + 1] * c2(d[i]);
    out[MotifKind::kDiverging2] += d[i] * c2(d[i + 1]);
    out[MotifKind::kConverging3] += d[i + 1] * c3(d[i]);
    out[MotifKind::kDiverging3] += d[i] * c3(d[i + 1]);
    out[MotifKind::kBiFan] += c2(d[i]) * c2(d[i + 1]);
  }
  for (std::size_t i = 0; i + 2 < d.size(); ++i) {
    out[MotifKind::kChain2] += d[i] * d[i + 1] * d[i + 2];
    out[MotifKind::kBiParallel] += d[i] * c2(d[i + 1]) * d[i + 2];
  }
  for (std::size_t i = 0; i + 3 < d.size(); ++i) out[MotifKind::kChain3] += d[i] * d[i + 1] * d[i + 2] * d[i + 3];
  return out;
}

}  // namespace motifgrid::testing
