#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace motifgrid {

/// Binary connectivity of one layer pair, indexed (source row, target
/// column). Entries are stored as bytes so that malformed input can be
/// represented and reported by validate() instead of silently coerced.
class MaskMatrix {
 public:
  MaskMatrix() = default;
  MaskMatrix(std::size_t rows, std::size_t cols, std::uint8_t fill = 0);

  static MaskMatrix full(std::size_t rows, std::size_t cols) { return {rows, cols, 1}; }
  static MaskMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
  static MaskMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::uint8_t operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }
  bool edge(std::size_t r, std::size_t c) const noexcept { return (*this)(r, c) != 0; }
  void set(std::size_t r, std::size_t c, std::uint8_t value) noexcept {
    entries_[r * cols_ + c] = value;
  }

  std::span<const std::uint8_t> entries() const noexcept { return entries_; }
  std::span<const std::uint8_t> row(std::size_t r) const noexcept {
    return std::span(entries_).subspan(r * cols_, cols_);
  }

  std::uint64_t edge_count() const noexcept;
  std::uint64_t row_degree(std::size_t r) const noexcept;
  std::uint64_t col_degree(std::size_t c) const noexcept;
  std::vector<std::uint32_t> row_degrees() const;
  std::vector<std::uint32_t> col_degrees() const;

  friend bool operator==(const MaskMatrix&, const MaskMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> entries_;
};

/// Ordered masks of one feed-forward network. masks[i] connects layer i to
/// layer i + 1. Immutable once built; transformations return new stacks.
class MaskStack {
 public:
  MaskStack() = default;
  explicit MaskStack(std::vector<MaskMatrix> masks, std::string label = {})
      : masks_(std::move(masks)), label_(std::move(label)) {}

  const std::vector<MaskMatrix>& masks() const noexcept { return masks_; }
  const MaskMatrix& operator[](std::size_t i) const noexcept { return masks_[i]; }
  std::size_t size() const noexcept { return masks_.size(); }
  bool empty() const noexcept { return masks_.empty(); }
  const std::string& label() const noexcept { return label_; }

  MaskStack with_label(std::string label) const { return MaskStack(masks_, std::move(label)); }

  /// Node count per layer (L + 1 entries). Only meaningful on a valid stack.
  std::vector<std::size_t> layer_dims() const;

  friend bool operator==(const MaskStack&, const MaskStack&) = default;

 private:
  std::vector<MaskMatrix> masks_;
  std::string label_;
};

struct Violation {
  std::size_t layer = 0;
  std::string rule;
  std::string detail;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string describe() const;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(ValidationResult result);
  const ValidationResult& result() const noexcept { return result_; }

 private:
  ValidationResult result_;
};

namespace rule {
inline constexpr const char* kEmptyStack = "empty stack";
inline constexpr const char* kEmptyDimension = "empty dimension";
inline constexpr const char* kNonBinary = "non-binary entry";
inline constexpr const char* kDimensionMismatch = "dimension mismatch";
}  // namespace rule

/// Checks every MaskStack invariant. A dimension mismatch between masks i
/// and i + 1 is reported at layer i.
ValidationResult validate(const MaskStack& stack);

/// Throws ValidationError if the stack is invalid.
void require_valid(const MaskStack& stack);

struct SparsityProfile {
  std::vector<std::uint64_t> per_layer_edges;
  std::uint64_t total_edges = 0;
  std::uint64_t total_possible = 0;
  double global_sparsity = 0.0;
};

SparsityProfile sparsity_profile(const MaskStack& stack);

enum class CleanupMode { kForward, kForwardAndBackward };

struct CleanupResult {
  MaskStack stack;
  std::uint64_t removed = 0;
};

/// Removes connections left dangling by pruning. Forward: outgoing edges of
/// any non-input node without inputs are cleared, cascading downstream.
/// kForwardAndBackward additionally clears incoming edges of non-output
/// nodes without outputs; both sweeps repeat until neither changes anything.
CleanupResult clean_dead(const MaskStack& stack, CleanupMode mode = CleanupMode::kForward);

}  // namespace motifgrid
