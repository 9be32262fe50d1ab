#include "motifgrid/report.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "motifgrid/csv.hpp"
#include "motifgrid/mask_io.hpp"

namespace motifgrid::report {

namespace {

using nlohmann::json;

std::string census_header() {
  std::vector<std::string> cols = {"label", "sparsity"};
  for (auto kind : kAllMotifs) cols.emplace_back(motif_name(kind));
  return csv::join(cols);
}

const std::vector<std::string> kZscoreColumns = {"label", "sparsity", "motif", "n_real", "random_mean",
                                                 "random_std", "z", "degenerate", "samples"};

std::vector<std::string> zscore_fields(const std::string& label, const std::string& sparsity, std::string_view motif,
                                       Count n_real, double mean, double std, const std::optional<double>& z,
                                       std::size_t samples) {
  return {label,
          sparsity,
          std::string(motif),
          std::to_string(n_real),
          format_double(mean),
          format_double(std),
          z ? format_double(*z) : std::string(),
          z ? "0" : "1",
          std::to_string(samples)};
}

std::string fmt_opt(const std::optional<ZDistribution>& d, double ZDistribution::*field) {
  return d ? format_double((*d).*field) : std::string();
}

}  // namespace

std::string census_csv(std::span<const MotifCensus> rows) {
  std::ostringstream os;
  os << census_header() << '\n';
  for (const auto& c : rows) {
    std::vector<std::string> fields = {c.label, c.sparsity_tag};
    for (auto kind : kAllMotifs) fields.push_back(std::to_string(c[kind]));
    os << csv::join(fields) << '\n';
  }
  return os.str();
}

std::string census_json(std::span<const MotifCensus> rows) {
  json doc;
  doc["networks"] = json::array();
  for (const auto& c : rows) {
    json counts = json::object();
    for (auto kind : kAllMotifs) counts[std::string(motif_name(kind))] = c[kind];
    doc["networks"].push_back({{"label", c.label}, {"sparsity", c.sparsity_tag}, {"counts", counts}});
  }
  return doc.dump(2) + "\n";
}

std::string census_json_to_csv(std::string_view text) {
  const json doc = json::parse(text);
  std::vector<MotifCensus> rows;
  for (const auto& n : doc.at("networks")) {
    MotifCensus c;
    c.label = n.at("label").get<std::string>();
    c.sparsity_tag = n.at("sparsity").get<std::string>();
    for (auto kind : kAllMotifs) c[kind] = n.at("counts").at(std::string(motif_name(kind))).get<Count>();
    rows.push_back(std::move(c));
  }
  return census_csv(rows);
}

std::string zscore_csv(std::span<const ZScoreReport> reports) {
  std::ostringstream os;
  os << csv::join(kZscoreColumns) << '\n';
  for (const auto& r : reports) {
    for (auto kind : kAllMotifs) {
      const auto& s = r[kind];
      os << csv::join(zscore_fields(r.label, r.sparsity_tag, motif_name(kind), s.n_real, s.random_mean, s.random_std,
                                    s.z, r.sample_count))
         << '\n';
    }
  }
  return os.str();
}

std::string zscore_json(std::span<const ZScoreReport> reports) {
  json doc;
  doc["reports"] = json::array();
  for (const auto& r : reports) {
    json motifs = json::object();
    for (auto kind : kAllMotifs) {
      const auto& s = r[kind];
      motifs[std::string(motif_name(kind))] = {{"n_real", s.n_real},
                                               {"random_mean", s.random_mean},
                                               {"random_std", s.random_std},
                                               {"z", s.z ? json(*s.z) : json(nullptr)},
                                               {"degenerate", s.degenerate()}};
    }
    doc["reports"].push_back(
        {{"label", r.label}, {"sparsity", r.sparsity_tag}, {"samples", r.sample_count}, {"motifs", motifs}});
  }
  return doc.dump(2) + "\n";
}

std::string zscore_json_to_csv(std::string_view text) {
  const json doc = json::parse(text);
  std::ostringstream os;
  os << csv::join(kZscoreColumns) << '\n';
  for (const auto& r : doc.at("reports")) {
    const auto label = r.at("label").get<std::string>();
    const auto sparsity = r.at("sparsity").get<std::string>();
    const auto samples = r.at("samples").get<std::size_t>();
    for (auto kind : kAllMotifs) {
      const auto& m = r.at("motifs").at(std::string(motif_name(kind)));
      std::optional<double> z;
      if (!m.at("z").is_null()) z = m.at("z").get<double>();
      os << csv::join(zscore_fields(label, sparsity, motif_name(kind), m.at("n_real").get<Count>(),
                                    m.at("random_mean").get<double>(), m.at("random_std").get<double>(), z, samples))
         << '\n';
    }
  }
  return os.str();
}

std::string component_csv(const std::vector<ComponentEntry>& table) {
  std::ostringstream os;
  os << "label,sparsity,motif,value\n";
  for (const auto& e : table) {
    os << csv::join({e.label, e.sparsity_tag, std::string(motif_name(e.motif)), format_double(e.value)}) << '\n';
  }
  return os.str();
}

std::string components_json(const ComponentTables& tables) {
  auto rows = [](const std::vector<ComponentEntry>& table) {
    json arr = json::array();
    for (const auto& e : table) {
      arr.push_back({{"label", e.label}, {"sparsity", e.sparsity_tag}, {"motif", motif_name(e.motif)}, {"value", e.value}});
    }
    return arr;
  };
  json doc = {{"n_real", rows(tables.n_real)},
              {"random_mean", rows(tables.random_mean)},
              {"random_std", rows(tables.random_std)}};
  return doc.dump(2) + "\n";
}

std::string summary_csv(const DistributionSummary& summary) {
  std::ostringstream os;
  os << "sparsity,motif,count,degenerate,min,p5,p25,median,p75,p95,max,mean,std\n";
  for (const auto& g : summary.groups) {
    for (auto kind : kAllMotifs) {
      const auto& d = g[kind];
      os << csv::join({g.sparsity_tag, std::string(motif_name(kind)), std::to_string(d.count),
                       std::to_string(d.degenerate_count), fmt_opt(d.stats, &ZDistribution::min),
                       fmt_opt(d.stats, &ZDistribution::p5), fmt_opt(d.stats, &ZDistribution::p25),
                       fmt_opt(d.stats, &ZDistribution::median), fmt_opt(d.stats, &ZDistribution::p75),
                       fmt_opt(d.stats, &ZDistribution::p95), fmt_opt(d.stats, &ZDistribution::max),
                       fmt_opt(d.stats, &ZDistribution::mean), fmt_opt(d.stats, &ZDistribution::std)})
         << '\n';
    }
  }
  return os.str();
}

std::string summary_json(const DistributionSummary& summary) {
  json doc;
  doc["groups"] = json::array();
  for (const auto& g : summary.groups) {
    json motifs = json::object();
    for (auto kind : kAllMotifs) {
      const auto& d = g[kind];
      json entry = {{"count", d.count}, {"degenerate", d.degenerate_count}};
      if (d.stats) {
        const auto& s = *d.stats;
        entry["stats"] = {{"min", s.min},       {"p5", s.p5},   {"p25", s.p25},   {"median", s.median},
                          {"p75", s.p75},       {"p95", s.p95}, {"max", s.max},   {"mean", s.mean},
                          {"std", s.std}};
      } else {
        entry["stats"] = nullptr;
      }
      motifs[std::string(motif_name(kind))] = entry;
    }
    doc["groups"].push_back({{"sparsity", g.sparsity_tag}, {"motifs", motifs}});
  }
  return doc.dump(2) + "\n";
}

std::string plot_data_csv(const DistributionSummary& summary) {
  std::ostringstream os;
  os << "motif,x,p5,p25,median,p75,p95,mean\n";
  for (auto kind : kAllMotifs) {
    for (const auto& g : summary.groups) {
      double x = 0;
      const auto& tag = g.sparsity_tag;
      const auto res = std::from_chars(tag.data(), tag.data() + tag.size(), x);
      if (res.ec != std::errc{} || res.ptr != tag.data() + tag.size()) continue;
      const auto& d = g[kind];
      if (!d.stats) continue;
      os << csv::join({std::string(motif_name(kind)), format_double(x), format_double(d.stats->p5),
                       format_double(d.stats->p25), format_double(d.stats->median), format_double(d.stats->p75),
                       format_double(d.stats->p95), format_double(d.stats->mean)})
         << '\n';
    }
  }
  return os.str();
}

}  // namespace motifgrid::report
