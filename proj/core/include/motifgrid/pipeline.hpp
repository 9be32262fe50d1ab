#pragma once

#include <cstdint>
#include <string_view>

#include "motifgrid/ensemble.hpp"
#include "motifgrid/mask.hpp"
#include "motifgrid/motif.hpp"
#include "motifgrid/significance.hpp"

namespace motifgrid {

/// Null-ensemble seed for one network: the root seed mixed with a hash of
/// the network label, so a network's report does not depend on which other
/// networks share the run.
std::uint64_t network_seed(std::uint64_t root_seed, std::string_view label);

struct ScoreOptions {
  std::uint64_t root_seed = 1;
  std::size_t null_samples = kDefaultNullSamples;
  std::size_t jobs = 1;
};

/// Census of `stack` (used as given; clean it first if required), null
/// ensemble with matching per-layer edge counts, and the z-score report.
ZScoreReport score_network(const MaskStack& stack, const std::string& sparsity_tag, const ScoreOptions& options);

}  // namespace motifgrid
