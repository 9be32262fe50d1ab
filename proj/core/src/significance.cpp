#include "motifgrid/significance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

namespace motifgrid {

Moments population_moments(std::span<const double> values) {
  if (values.empty()) throw EmptyInputError("moments of an empty sample");
  long double sum = 0;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double sq = 0;
  for (double v : values) {
    const long double d = v - mean;
    sq += d * d;
  }
  const long double var = sq / static_cast<long double>(values.size());
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var))};
}

ZScoreReport zscore(const MotifCensus& census, std::span<const MotifCensus> nulls) {
  if (nulls.size() < 2) throw std::invalid_argument("z-score needs at least two null samples");
  ZScoreReport report;
  report.label = census.label;
  report.sparsity_tag = census.sparsity_tag;
  report.sample_count = nulls.size();
  std::vector<double> values(nulls.size());
  for (auto kind : kAllMotifs) {
    bool constant = true;
    for (std::size_t k = 0; k < nulls.size(); ++k) {
      values[k] = static_cast<double>(nulls[k][kind]);
      constant = constant && nulls[k][kind] == nulls[0][kind];
    }
    const auto m = population_moments(values);
    auto& score = report[kind];
    score.n_real = census[kind];
    score.random_mean = m.mean;
    score.random_std = constant ? 0.0 : m.std;
    if (score.random_std > 0.0) {
      score.z = (static_cast<double>(score.n_real) - score.random_mean) / score.random_std;
    }
  }
  return report;
}

double percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw EmptyInputError("percentile of an empty sample");
  const double rank = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

std::optional<double> parse_number(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<std::string> order_tags(const std::vector<std::string>& tags) {
  std::vector<std::pair<double, std::string>> numeric;
  for (const auto& t : tags) {
    const auto v = parse_number(t);
    if (!v) return tags;
    numeric.emplace_back(*v, t);
  }
  std::stable_sort(numeric.begin(), numeric.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& [v, t] : numeric) out.push_back(std::move(t));
  return out;
}

const SummaryGroup* DistributionSummary::find(const std::string& sparsity_tag) const {
  for (const auto& g : groups) {
    if (g.sparsity_tag == sparsity_tag) return &g;
  }
  return nullptr;
}

DistributionSummary summarize(std::span<const ZScoreReport> reports) {
  if (reports.empty()) throw EmptyInputError("summarize needs at least one report");
  std::vector<std::string> seen;
  std::map<std::string, std::vector<const ZScoreReport*>> by_tag;
  for (const auto& r : reports) {
    auto& bucket = by_tag[r.sparsity_tag];
    if (bucket.empty()) seen.push_back(r.sparsity_tag);
    bucket.push_back(&r);
  }
  DistributionSummary summary;
  for (const auto& tag : order_tags(seen)) {
    SummaryGroup group;
    group.sparsity_tag = tag;
    for (auto kind : kAllMotifs) {
      auto& dist = group.motifs[index_of(kind)];
      std::vector<double> zs;
      for (const auto* r : by_tag[tag]) {
        const auto& s = (*r)[kind];
        if (s.z) {
          zs.push_back(*s.z);
        } else {
          ++dist.degenerate_count;
        }
      }
      dist.count = zs.size();
      if (zs.empty()) continue;
      std::sort(zs.begin(), zs.end());
      const auto m = population_moments(zs);
      dist.stats = ZDistribution{zs.front(),           percentile(zs, 0.05), percentile(zs, 0.25),
                                 percentile(zs, 0.50), percentile(zs, 0.75), percentile(zs, 0.95),
                                 zs.back(),            m.mean,               m.std};
    }
    summary.groups.push_back(std::move(group));
  }
  return summary;
}

ComponentTables component_tables(std::span<const ZScoreReport> reports) {
  if (reports.empty()) throw EmptyInputError("component tables need at least one report");
  ComponentTables t;
  for (const auto& r : reports) {
    for (auto kind : kAllMotifs) {
      const auto& s = r[kind];
      t.n_real.push_back({r.label, r.sparsity_tag, kind, static_cast<double>(s.n_real)});
      t.random_mean.push_back({r.label, r.sparsity_tag, kind, s.random_mean});
      t.random_std.push_back({r.label, r.sparsity_tag, kind, s.random_std});
    }
  }
  return t;
}

}  // namespace motifgrid
