#include "motifgrid/pipeline.hpp"

#include "motifgrid/rng.hpp"

namespace motifgrid {

std::uint64_t network_seed(std::uint64_t root_seed, std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return derive_seed(root_seed, h);
}

ZScoreReport score_network(const MaskStack& stack, const std::string& sparsity_tag, const ScoreOptions& options) {
  MotifCensus census = count_all(stack);
  census.sparsity_tag = sparsity_tag;
  const auto spec = null_spec_of(stack, network_seed(options.root_seed, stack.label()), options.null_samples);
  const auto nulls = census_batch(spec, options.jobs);
  return zscore(census, nulls);
}

}  // namespace motifgrid
