#include "motifgrid/motif.hpp"

#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "motifgrid/rng.hpp"

namespace motifgrid {

namespace {

using Wide = uint128;

constexpr std::array<std::string_view, kMotifCount> kNames = {
    "chain2", "converging2", "diverging2", "chain3", "converging3", "diverging3", "bifan", "biparallel",
};

constexpr Wide choose2(Wide n) { return n < 2 ? 0 : n * (n - 1) / 2; }
constexpr Wide choose3(Wide n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

Count narrow(Wide total, std::string_view what) {
  if (total > static_cast<Wide>(std::numeric_limits<Count>::max())) {
    throw std::overflow_error(std::string(what) + " count exceeds 64 bits");
  }
  return static_cast<Count>(total);
}

// Row-compressed adjacency of one mask: the targets of each source.
struct RowAdjacency {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;

  explicit RowAdjacency(const MaskMatrix& m) : rows(m.rows()), cols(m.cols()), offsets(m.rows() + 1, 0) {
    targets.reserve(m.edge_count());
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < cols; ++c) {
        if (row[c]) targets.push_back(static_cast<std::uint32_t>(c));
      }
      offsets[r + 1] = static_cast<std::uint32_t>(targets.size());
    }
  }

  std::span<const std::uint32_t> row(std::size_t r) const {
    return std::span(targets).subspan(offsets[r], offsets[r + 1] - offsets[r]);
  }
};

// Column-compressed adjacency: the sources of each target.
struct ColAdjacency {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> sources;

  explicit ColAdjacency(const RowAdjacency& rows) : offsets(rows.cols + 1, 0), sources(rows.targets.size()) {
    for (auto t : rows.targets) ++offsets[t + 1];
    for (std::size_t c = 0; c < rows.cols; ++c) offsets[c + 1] += offsets[c];
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t r = 0; r < rows.rows; ++r) {
      for (auto t : rows.row(r)) sources[cursor[t]++] = static_cast<std::uint32_t>(r);
    }
  }

  std::span<const std::uint32_t> col(std::size_t c) const {
    return std::span(sources).subspan(offsets[c], offsets[c + 1] - offsets[c]);
  }
  std::size_t degree(std::size_t c) const { return offsets[c + 1] - offsets[c]; }
};

struct Layers {
  std::vector<RowAdjacency> by_row;
  std::vector<ColAdjacency> by_col;

  explicit Layers(const MaskStack& stack) {
    require_valid(stack);
    by_row.reserve(stack.size());
    by_col.reserve(stack.size());
    for (const auto& m : stack.masks()) {
      by_row.emplace_back(m);
      by_col.emplace_back(by_row.back());
    }
  }
  std::size_t size() const { return by_row.size(); }
};

template <class Choose>
Wide fan_columns(const Layers& layers, Choose choose) {
  Wide total = 0;
  for (const auto& cols : layers.by_col) {
    for (std::size_t c = 0; c + 1 < cols.offsets.size(); ++c) total += choose(cols.degree(c));
  }
  return total;
}

template <class Choose>
Wide fan_rows(const Layers& layers, Choose choose) {
  Wide total = 0;
  for (const auto& rows : layers.by_row) {
    for (std::size_t r = 0; r < rows.rows; ++r) total += choose(rows.row(r).size());
  }
  return total;
}

struct ProductTotals {
  Wide chain2 = 0;
  Wide biparallel = 0;
};

// Sparse evaluation of P = masks[i] * masks[i+1] one source row at a time.
// Accumulates the element sum of P and the element sum of C(P, 2).
ProductTotals consecutive_products(const Layers& layers) {
  ProductTotals totals;
  std::vector<std::uint32_t> acc;
  std::vector<std::uint32_t> touched;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    const auto& first = layers.by_row[i];
    const auto& second = layers.by_row[i + 1];
    acc.assign(second.cols, 0);
    for (std::size_t s = 0; s < first.rows; ++s) {
      touched.clear();
      for (auto mid : first.row(s)) {
        for (auto t : second.row(mid)) {
          if (acc[t]++ == 0) touched.push_back(t);
        }
      }
      for (auto t : touched) {
        totals.chain2 += acc[t];
        totals.biparallel += choose2(acc[t]);
        acc[t] = 0;
      }
    }
  }
  return totals;
}

// Element sum of masks[i] * masks[i+1] * masks[i+2] for every window,
// evaluated as (1^T masks[i]) * masks[i+1] * (masks[i+2] 1).
Wide chain3_total(const Layers& layers) {
  Wide total = 0;
  for (std::size_t i = 0; i + 2 < layers.size(); ++i) {
    const auto& first = layers.by_col[i];
    const auto& middle = layers.by_row[i + 1];
    const auto& last = layers.by_row[i + 2];
    for (std::size_t k = 0; k < middle.rows; ++k) {
      const Wide paths_in = first.degree(k);
      if (paths_in == 0) continue;
      Wide paths_out = 0;
      for (auto t : middle.row(k)) paths_out += last.row(t).size();
      total += paths_in * paths_out;
    }
  }
  return total;
}

// For each row pair (s, s2) with s < s2, the dot product is the number of
// shared targets; found by walking the columns of the row-s targets.
Wide bifan_total(const Layers& layers) {
  Wide total = 0;
  std::vector<std::uint32_t> shared;
  std::vector<std::uint32_t> touched;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& rows = layers.by_row[i];
    const auto& cols = layers.by_col[i];
    shared.assign(rows.rows, 0);
    for (std::size_t s = 0; s < rows.rows; ++s) {
      touched.clear();
      for (auto t : rows.row(s)) {
        for (auto other : cols.col(t)) {
          if (other <= s) continue;
          if (shared[other]++ == 0) touched.push_back(other);
        }
      }
      for (auto other : touched) {
        total += choose2(shared[other]);
        shared[other] = 0;
      }
    }
  }
  return total;
}

}  // namespace

std::string_view motif_name(MotifKind kind) noexcept { return kNames[index_of(kind)]; }

std::optional<MotifKind> parse_motif(std::string_view name) noexcept {
  for (auto kind : kAllMotifs) {
    if (kNames[index_of(kind)] == name) return kind;
  }
  return std::nullopt;
}

Count count_chain2(const MaskStack& stack) {
  return narrow(consecutive_products(Layers(stack)).chain2, "chain2");
}

Count count_converging2(const MaskStack& stack) {
  return narrow(fan_columns(Layers(stack), choose2), "converging2");
}

Count count_diverging2(const MaskStack& stack) {
  return narrow(fan_rows(Layers(stack), choose2), "diverging2");
}

Count count_chain3(const MaskStack& stack) { return narrow(chain3_total(Layers(stack)), "chain3"); }

Count count_converging3(const MaskStack& stack) {
  return narrow(fan_columns(Layers(stack), choose3), "converging3");
}

Count count_diverging3(const MaskStack& stack) {
  return narrow(fan_rows(Layers(stack), choose3), "diverging3");
}

Count count_bifan(const MaskStack& stack) { return narrow(bifan_total(Layers(stack)), "bifan"); }

Count count_biparallel(const MaskStack& stack) {
  return narrow(consecutive_products(Layers(stack)).biparallel, "biparallel");
}

Count count_motif(const MaskStack& stack, MotifKind kind) {
  switch (kind) {
    case MotifKind::kChain2: return count_chain2(stack);
    case MotifKind::kConverging2: return count_converging2(stack);
    case MotifKind::kDiverging2: return count_diverging2(stack);
    case MotifKind::kChain3: return count_chain3(stack);
    case MotifKind::kConverging3: return count_converging3(stack);
    case MotifKind::kDiverging3: return count_diverging3(stack);
    case MotifKind::kBiFan: return count_bifan(stack);
    case MotifKind::kBiParallel: return count_biparallel(stack);
  }
  throw std::invalid_argument("unknown motif kind");
}

MotifCensus count_all(const MaskStack& stack) {
  const Layers layers(stack);
  const auto products = consecutive_products(layers);
  MotifCensus census;
  census.label = stack.label();
  census[MotifKind::kChain2] = narrow(products.chain2, "chain2");
  census[MotifKind::kConverging2] = narrow(fan_columns(layers, choose2), "converging2");
  census[MotifKind::kDiverging2] = narrow(fan_rows(layers, choose2), "diverging2");
  census[MotifKind::kChain3] = narrow(chain3_total(layers), "chain3");
  census[MotifKind::kConverging3] = narrow(fan_columns(layers, choose3), "converging3");
  census[MotifKind::kDiverging3] = narrow(fan_rows(layers, choose3), "diverging3");
  census[MotifKind::kBiFan] = narrow(bifan_total(layers), "bifan");
  census[MotifKind::kBiParallel] = narrow(products.biparallel, "biparallel");
  return census;
}

}  // namespace motifgrid
