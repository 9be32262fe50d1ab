#include "motifgrid/oracle.hpp"

#include <string>

namespace motifgrid::oracle {

ExplicitDag expand(const MaskStack& stack) {
  require_valid(stack);
  ExplicitDag dag;
  const auto dims = stack.layer_dims();
  dag.layers.resize(dims.size());
  for (std::size_t layer = 0; layer < dims.size(); ++layer) {
    for (std::size_t i = 0; i < dims[layer]; ++i) {
      dag.layers[layer].push_back(dag.nodes.size());
      dag.nodes.push_back({layer, i});
    }
  }
  dag.successors.resize(dag.nodes.size());
  for (std::size_t layer = 0; layer < stack.size(); ++layer) {
    const auto& m = stack[layer];
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!m.edge(r, c)) continue;
        const std::size_t from = dag.layers[layer][r];
        const std::size_t to = dag.layers[layer + 1][c];
        dag.edges.insert({from, to});
        dag.successors[from].push_back(to);
      }
    }
  }
  return dag;
}

namespace {

double pairs(double n) { return n * (n - 1) / 2; }
double triples(double n) { return n * (n - 1) * (n - 2) / 6; }

}  // namespace

double tuple_space(const ExplicitDag& dag, MotifKind kind) {
  double total = 0;
  const std::size_t n = dag.layers.size();
  auto width = [&](std::size_t l) { return static_cast<double>(dag.layers[l].size()); };
  for (std::size_t l = 0; l + 1 < n; ++l) {
    switch (kind) {
      case MotifKind::kChain2:
        if (l + 2 < n) total += width(l) * width(l + 1) * width(l + 2);
        break;
      case MotifKind::kChain3:
        if (l + 3 < n) total += width(l) * width(l + 1) * width(l + 2) * width(l + 3);
        break;
      case MotifKind::kConverging2: total += pairs(width(l)) * width(l + 1); break;
      case MotifKind::kConverging3: total += triples(width(l)) * width(l + 1); break;
      case MotifKind::kDiverging2: total += width(l) * pairs(width(l + 1)); break;
      case MotifKind::kDiverging3: total += width(l) * triples(width(l + 1)); break;
      case MotifKind::kBiFan: total += pairs(width(l)) * pairs(width(l + 1)); break;
      case MotifKind::kBiParallel:
        if (l + 2 < n) total += width(l) * pairs(width(l + 1)) * width(l + 2);
        break;
    }
  }
  return total;
}

Count enumerate(const ExplicitDag& dag, MotifKind kind, double tuple_budget) {
  const double space = tuple_space(dag, kind);
  if (space > tuple_budget) {
    throw TupleBudgetExceeded("oracle tuple space " + std::to_string(space) + " exceeds budget " +
                              std::to_string(tuple_budget) + " for " + std::string(motif_name(kind)));
  }
  const auto& L = dag.layers;
  const std::size_t n = L.size();
  auto e = [&](std::size_t a, std::size_t b) { return dag.has_edge(a, b); };
  Count count = 0;
  for (std::size_t l = 0; l + 1 < n; ++l) {
    const auto& A = L[l];
    const auto& B = L[l + 1];
    switch (kind) {
      case MotifKind::kChain2:
        if (l + 2 >= n) break;
        for (auto a : A)
          for (auto b : B)
            for (auto c : L[l + 2]) count += (e(a, b) && e(b, c)) ? 1 : 0;
        break;
      case MotifKind::kChain3:
        if (l + 3 >= n) break;
        for (auto a : A)
          for (auto b : B)
            for (auto c : L[l + 2])
              for (auto d : L[l + 3]) count += (e(a, b) && e(b, c) && e(c, d)) ? 1 : 0;
        break;
      case MotifKind::kConverging2:
        for (auto t : B)
          for (std::size_t i = 0; i < A.size(); ++i)
            for (std::size_t j = i + 1; j < A.size(); ++j) count += (e(A[i], t) && e(A[j], t)) ? 1 : 0;
        break;
      case MotifKind::kConverging3:
        for (auto t : B)
          for (std::size_t i = 0; i < A.size(); ++i)
            for (std::size_t j = i + 1; j < A.size(); ++j)
              for (std::size_t k = j + 1; k < A.size(); ++k)
                count += (e(A[i], t) && e(A[j], t) && e(A[k], t)) ? 1 : 0;
        break;
      case MotifKind::kDiverging2:
        for (auto s : A)
          for (std::size_t i = 0; i < B.size(); ++i)
            for (std::size_t j = i + 1; j < B.size(); ++j) count += (e(s, B[i]) && e(s, B[j])) ? 1 : 0;
        break;
      case MotifKind::kDiverging3:
        for (auto s : A)
          for (std::size_t i = 0; i < B.size(); ++i)
            for (std::size_t j = i + 1; j < B.size(); ++j)
              for (std::size_t k = j + 1; k < B.size(); ++k)
                count += (e(s, B[i]) && e(s, B[j]) && e(s, B[k])) ? 1 : 0;
        break;
      case MotifKind::kBiFan:
        for (std::size_t i = 0; i < A.size(); ++i)
          for (std::size_t j = i + 1; j < A.size(); ++j)
            for (std::size_t p = 0; p < B.size(); ++p)
              for (std::size_t q = p + 1; q < B.size(); ++q)
                count += (e(A[i], B[p]) && e(A[i], B[q]) && e(A[j], B[p]) && e(A[j], B[q])) ? 1 : 0;
        break;
      case MotifKind::kBiParallel:
        if (l + 2 >= n) break;
        for (auto s : A)
          for (std::size_t i = 0; i < B.size(); ++i)
            for (std::size_t j = i + 1; j < B.size(); ++j)
              for (auto t : L[l + 2])
                count += (e(s, B[i]) && e(s, B[j]) && e(B[i], t) && e(B[j], t)) ? 1 : 0;
        break;
    }
  }
  return count;
}

MotifCensus enumerate_all(const MaskStack& stack, double tuple_budget) {
  const auto dag = expand(stack);
  MotifCensus census;
  census.label = stack.label();
  for (auto kind : kAllMotifs) census[kind] = enumerate(dag, kind, tuple_budget);
  return census;
}

std::uint64_t unreachable_edges(const ExplicitDag& dag) {
  std::vector<bool> reached(dag.nodes.size(), false);
  std::vector<std::size_t> frontier;
  if (!dag.layers.empty()) {
    for (auto id : dag.layers.front()) {
      reached[id] = true;
      frontier.push_back(id);
    }
  }
  while (!frontier.empty()) {
    const auto id = frontier.back();
    frontier.pop_back();
    for (auto next : dag.successors[id]) {
      if (!reached[next]) {
        reached[next] = true;
        frontier.push_back(next);
      }
    }
  }
  std::uint64_t dead = 0;
  for (const auto& [from, to] : dag.edges) dead += reached[from] ? 0 : 1;
  return dead;
}

}  // namespace motifgrid::oracle
