#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motifgrid/motif.hpp"
#include "motifgrid/significance.hpp"

namespace motifgrid::report {

enum class Format { kCsv, kJson };

/// Census: one row per network with the eight counts as columns.
std::string census_csv(std::span<const MotifCensus> rows);
std::string census_json(std::span<const MotifCensus> rows);

/// Z-scores: one CSV row per network x motif. Degenerate rows have an
/// empty z field (null in JSON) and degenerate=1.
std::string zscore_csv(std::span<const ZScoreReport> reports);
std::string zscore_json(std::span<const ZScoreReport> reports);

/// Parse the JSON forms back and emit the matching CSV form.
std::string census_json_to_csv(std::string_view json);
std::string zscore_json_to_csv(std::string_view json);

/// One component table (label, sparsity, motif, value).
std::string component_csv(const std::vector<ComponentEntry>& table);
std::string components_json(const ComponentTables& tables);

/// Per (sparsity, motif) distribution row.
std::string summary_csv(const DistributionSummary& summary);
std::string summary_json(const DistributionSummary& summary);

/// Series for external plotting: x = numeric sparsity, y = z quantiles.
/// Groups whose tag is not numeric, and motifs with no finite z, are left
/// out.
std::string plot_data_csv(const DistributionSummary& summary);

}  // namespace motifgrid::report
