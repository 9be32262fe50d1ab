#include "motifgrid/mask.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace motifgrid {

MaskMatrix::MaskMatrix(std::size_t rows, std::size_t cols, std::uint8_t fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

MaskMatrix MaskMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

MaskMatrix MaskMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.front().size();
  MaskMatrix m(n_rows, n_cols);
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (rows[r].size() != n_cols) throw std::invalid_argument("ragged mask rows");
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (rows[r][c] < 0 || rows[r][c] > 255) throw std::invalid_argument("mask entry out of byte range");
      m.set(r, c, static_cast<std::uint8_t>(rows[r][c]));
    }
  }
  return m;
}

std::uint64_t MaskMatrix::edge_count() const noexcept {
  return static_cast<std::uint64_t>(
      std::count_if(entries_.begin(), entries_.end(), [](std::uint8_t v) { return v != 0; }));
}

std::uint64_t MaskMatrix::row_degree(std::size_t r) const noexcept {
  const auto span = row(r);
  return static_cast<std::uint64_t>(std::count_if(span.begin(), span.end(), [](std::uint8_t v) { return v != 0; }));
}

std::uint64_t MaskMatrix::col_degree(std::size_t c) const noexcept {
  std::uint64_t n = 0;
  for (std::size_t r = 0; r < rows_; ++r) n += edge(r, c) ? 1 : 0;
  return n;
}

std::vector<std::uint32_t> MaskMatrix::row_degrees() const {
  std::vector<std::uint32_t> out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = static_cast<std::uint32_t>(row_degree(r));
  return out;
}

std::vector<std::uint32_t> MaskMatrix::col_degrees() const {
  std::vector<std::uint32_t> out(cols_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto span = row(r);
    for (std::size_t c = 0; c < cols_; ++c) out[c] += span[c] != 0 ? 1 : 0;
  }
  return out;
}

std::vector<std::size_t> MaskStack::layer_dims() const {
  std::vector<std::size_t> dims;
  if (masks_.empty()) return dims;
  dims.reserve(masks_.size() + 1);
  dims.push_back(masks_.front().rows());
  for (const auto& m : masks_) dims.push_back(m.cols());
  return dims;
}

std::string ValidationResult::describe() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << "layer " << violations[i].layer << ": " << violations[i].rule;
    if (!violations[i].detail.empty()) os << " (" << violations[i].detail << ")";
  }
  return os.str();
}

ValidationError::ValidationError(ValidationResult result)
    : std::invalid_argument("invalid mask stack: " + result.describe()), result_(std::move(result)) {}

ValidationResult validate(const MaskStack& stack) {
  ValidationResult result;
  if (stack.empty()) {
    result.violations.push_back({0, rule::kEmptyStack, {}});
    return result;
  }
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const auto& m = stack[i];
    if (m.rows() == 0 || m.cols() == 0) {
      result.violations.push_back(
          {i, rule::kEmptyDimension, std::to_string(m.rows()) + "x" + std::to_string(m.cols())});
    }
    const auto entries = m.entries();
    const auto bad = std::find_if(entries.begin(), entries.end(), [](std::uint8_t v) { return v > 1; });
    if (bad != entries.end()) {
      const auto offset = static_cast<std::size_t>(bad - entries.begin());
      result.violations.push_back({i, rule::kNonBinary,
                                   "value " + std::to_string(*bad) + " at (" + std::to_string(offset / m.cols()) +
                                       "," + std::to_string(offset % m.cols()) + ")"});
    }
    if (i + 1 < stack.size() && m.cols() != stack[i + 1].rows()) {
      result.violations.push_back({i, rule::kDimensionMismatch,
                                   "pair (" + std::to_string(i) + "," + std::to_string(i + 1) +
                                       "): " + std::to_string(m.cols()) + " != " + std::to_string(stack[i + 1].rows())});
    }
  }
  return result;
}

void require_valid(const MaskStack& stack) {
  auto result = validate(stack);
  if (!result.ok()) throw ValidationError(std::move(result));
}

SparsityProfile sparsity_profile(const MaskStack& stack) {
  require_valid(stack);
  SparsityProfile p;
  for (const auto& m : stack.masks()) {
    p.per_layer_edges.push_back(m.edge_count());
    p.total_edges += p.per_layer_edges.back();
    p.total_possible += static_cast<std::uint64_t>(m.rows()) * m.cols();
  }
  p.global_sparsity =
      1.0 - static_cast<double>(p.total_edges) / static_cast<double>(p.total_possible);
  return p;
}

namespace {

// Clears rows of mask i whose source node (layer i) has no incoming edge.
// Layer 0 is the input layer and is never touched.
std::uint64_t forward_sweep(std::vector<MaskMatrix>& masks) {
  std::uint64_t removed = 0;
  for (std::size_t i = 1; i < masks.size(); ++i) {
    const auto in_degree = masks[i - 1].col_degrees();
    auto& m = masks[i];
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (in_degree[r] != 0) continue;
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m.edge(r, c)) {
          m.set(r, c, 0);
          ++removed;
        }
      }
    }
  }
  return removed;
}

// Clears columns of mask i whose target node (layer i + 1) has no outgoing
// edge. The output layer is never touched.
std::uint64_t backward_sweep(std::vector<MaskMatrix>& masks) {
  std::uint64_t removed = 0;
  for (std::size_t i = masks.size() - 1; i-- > 0;) {
    const auto out_degree = masks[i + 1].row_degrees();
    auto& m = masks[i];
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (out_degree[c] != 0) continue;
      for (std::size_t r = 0; r < m.rows(); ++r) {
        if (m.edge(r, c)) {
          m.set(r, c, 0);
          ++removed;
        }
      }
    }
  }
  return removed;
}

}  // namespace

CleanupResult clean_dead(const MaskStack& stack, CleanupMode mode) {
  require_valid(stack);
  std::vector<MaskMatrix> masks = stack.masks();
  std::uint64_t removed = forward_sweep(masks);
  if (mode == CleanupMode::kForwardAndBackward) {
    for (;;) {
      const std::uint64_t back = backward_sweep(masks);
      removed += back;
      if (back == 0) break;
      const std::uint64_t fwd = forward_sweep(masks);
      removed += fwd;
      if (fwd == 0) break;
    }
  }
  return {MaskStack(std::move(masks), stack.label()), removed};
}

}  // namespace motifgrid
