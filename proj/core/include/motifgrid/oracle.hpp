#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "motifgrid/mask.hpp"
#include "motifgrid/motif.hpp"

namespace motifgrid::oracle {

struct Node {
  std::size_t layer = 0;
  std::size_t index = 0;
  friend auto operator<=>(const Node&, const Node&) = default;
};

/// Explicit node/edge expansion of a MaskStack. Nodes are numbered layer by
/// layer; edges are (source id, target id) pairs.
struct ExplicitDag {
  std::vector<Node> nodes;
  std::vector<std::vector<std::size_t>> layers;  // node ids per layer
  std::vector<std::vector<std::size_t>> successors;
  std::set<std::pair<std::size_t, std::size_t>> edges;

  bool has_edge(std::size_t from, std::size_t to) const { return edges.count({from, to}) != 0; }
  std::size_t edge_count() const { return edges.size(); }
};

class TupleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTupleBudget = 1e8;

ExplicitDag expand(const MaskStack& stack);

/// Number of candidate tuples enumerate() would test for this kind.
double tuple_space(const ExplicitDag& dag, MotifKind kind);

/// Exhaustive count: every node tuple of the motif's shape is tested for
/// edge membership. Interchangeable roles are enumerated in increasing
/// index order only. Throws TupleBudgetExceeded when tuple_space exceeds
/// the budget.
Count enumerate(const ExplicitDag& dag, MotifKind kind, double tuple_budget = kDefaultTupleBudget);

MotifCensus enumerate_all(const MaskStack& stack, double tuple_budget = kDefaultTupleBudget);

/// Edges whose source cannot be reached from any input-layer node, i.e.
/// what forward-only cleanup must remove.
std::uint64_t unreachable_edges(const ExplicitDag& dag);

}  // namespace motifgrid::oracle
