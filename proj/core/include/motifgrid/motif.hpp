#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "motifgrid/mask.hpp"

namespace motifgrid {

/// The eight feed-forward sub-graph families that are counted.
enum class MotifKind : std::uint8_t {
  kChain2,
  kConverging2,
  kDiverging2,
  kChain3,
  kConverging3,
  kDiverging3,
  kBiFan,
  kBiParallel,
};

inline constexpr std::size_t kMotifCount = 8;

inline constexpr std::array<MotifKind, kMotifCount> kAllMotifs = {
    MotifKind::kChain2,      MotifKind::kConverging2, MotifKind::kDiverging2, MotifKind::kChain3,
    MotifKind::kConverging3, MotifKind::kDiverging3,  MotifKind::kBiFan,      MotifKind::kBiParallel,
};

constexpr std::size_t index_of(MotifKind kind) noexcept { return static_cast<std::size_t>(kind); }

/// Stable lowercase identifier used in every report format.
std::string_view motif_name(MotifKind kind) noexcept;
std::optional<MotifKind> parse_motif(std::string_view name) noexcept;

using Count = std::uint64_t;

struct MotifCensus {
  std::array<Count, kMotifCount> counts{};
  std::string label;
  std::string sparsity_tag;

  Count& operator[](MotifKind kind) noexcept { return counts[index_of(kind)]; }
  Count operator[](MotifKind kind) const noexcept { return counts[index_of(kind)]; }

  friend bool operator==(const MotifCensus&, const MotifCensus&) = default;
};

// Every counter validates its input and throws ValidationError on an invalid
// stack. Totals are accumulated in 128-bit arithmetic; a total that does not
// fit in Count throws std::overflow_error.

/// Directed paths through three consecutive layers: element sum of
/// masks[i] * masks[i+1], summed over every consecutive pair.
Count count_chain2(const MaskStack& stack);

/// Two sources sharing one target: sum of C(n, 2) over every column.
Count count_converging2(const MaskStack& stack);

/// One source feeding two targets: sum of C(n, 2) over every row.
Count count_diverging2(const MaskStack& stack);

/// Directed paths through four consecutive layers.
Count count_chain3(const MaskStack& stack);

Count count_converging3(const MaskStack& stack);
Count count_diverging3(const MaskStack& stack);

/// Complete 2x2 bipartite sub-graphs within a mask: for each unordered pair
/// of rows, C(shared targets, 2).
Count count_bifan(const MaskStack& stack);

/// Source-to-target diamonds through two distinct intermediates: sum of
/// C(P[s][t], 2) over P = masks[i] * masks[i+1].
Count count_biparallel(const MaskStack& stack);

Count count_motif(const MaskStack& stack, MotifKind kind);

/// All eight counts in one pass over the stack. The census label is the
/// stack label; the sparsity tag is left for the caller.
MotifCensus count_all(const MaskStack& stack);

}  // namespace motifgrid
