#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "motifgrid/motif.hpp"

namespace motifgrid {

/// The components of one motif's z-score. z is empty exactly when the null
/// standard deviation is zero; no value is substituted in that case.
struct MotifScore {
  Count n_real = 0;
  double random_mean = 0.0;
  double random_std = 0.0;
  std::optional<double> z;

  bool degenerate() const noexcept { return !z.has_value(); }
};

struct ZScoreReport {
  std::array<MotifScore, kMotifCount> scores{};
  std::size_t sample_count = 0;
  std::string label;
  std::string sparsity_tag;

  const MotifScore& operator[](MotifKind kind) const noexcept { return scores[index_of(kind)]; }
  MotifScore& operator[](MotifKind kind) noexcept { return scores[index_of(kind)]; }
};

/// z = (n_real - mean) / std with the population (divide by N) standard
/// deviation over the null censuses. Requires at least two null samples.
ZScoreReport zscore(const MotifCensus& census, std::span<const MotifCensus> nulls);

/// Population mean and standard deviation (two-pass).
struct Moments {
  double mean = 0.0;
  double std = 0.0;
};
Moments population_moments(std::span<const double> values);

/// Linear interpolation between order statistics at rank p * (n - 1).
/// `sorted` must be ascending and non-empty; p in [0, 1].
double percentile(std::span<const double> sorted, double p);

struct ZDistribution {
  double min = 0, p5 = 0, p25 = 0, median = 0, p75 = 0, p95 = 0, max = 0;
  double mean = 0, std = 0;
};

struct MotifDistribution {
  std::optional<ZDistribution> stats;  // empty if every report was degenerate
  std::size_t count = 0;               // non-degenerate reports
  std::size_t degenerate_count = 0;
};

struct SummaryGroup {
  std::string sparsity_tag;
  std::array<MotifDistribution, kMotifCount> motifs{};

  const MotifDistribution& operator[](MotifKind kind) const noexcept { return motifs[index_of(kind)]; }
};

/// One group per distinct sparsity tag, ordered by numeric value when every
/// tag parses as a number, otherwise by first appearance.
struct DistributionSummary {
  std::vector<SummaryGroup> groups;

  const SummaryGroup* find(const std::string& sparsity_tag) const;
};

class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

DistributionSummary summarize(std::span<const ZScoreReport> reports);

/// One row of a component table: a single value for (network, motif).
struct ComponentEntry {
  std::string label;
  std::string sparsity_tag;
  MotifKind motif = MotifKind::kChain2;
  double value = 0.0;
};

/// The three ingredients of every z-score, flattened in report order then
/// motif order.
struct ComponentTables {
  std::vector<ComponentEntry> n_real;
  std::vector<ComponentEntry> random_mean;
  std::vector<ComponentEntry> random_std;
};

ComponentTables component_tables(std::span<const ZScoreReport> reports);

/// Orders sparsity tags numerically when they all parse, else keeps input
/// order. Shared by summaries and plot-data output.
std::vector<std::string> order_tags(const std::vector<std::string>& tags_in_first_seen_order);

}  // namespace motifgrid
