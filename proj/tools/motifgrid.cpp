// motifgrid: motif census and significance for layered sparse networks.
//
//   motifgrid clean   IN... --out DIR [--cleanup forward|both]
//   motifgrid census  IN... [--cleanup ...] [--format csv|json] [--out DIR]
//   motifgrid randgen IN... --out DIR [--nulls N] [--seed S]
//   motifgrid zscore  IN... [--nulls N] [--seed S] [--jobs K] [--out DIR]
//   motifgrid sweep   --out DIR [--population P] [--levels a,b,...] ...
//
// IN is a mask file, or a directory holding *.mask files and an optional
// manifest.csv. Exit status: 0 success, 1 a per-file failure, 2 bad usage.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "motifgrid/csv.hpp"
#include "motifgrid/ensemble.hpp"
#include "motifgrid/mask.hpp"
#include "motifgrid/mask_io.hpp"
#include "motifgrid/motif.hpp"
#include "motifgrid/oracle.hpp"
#include "motifgrid/pipeline.hpp"
#include "motifgrid/report.hpp"
#include "motifgrid/significance.hpp"
#include "motifgrid/trainer.hpp"

namespace fs = std::filesystem;
using namespace motifgrid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFileFailure = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CleanupChoice { kForward, kBoth, kOff };

struct RunConfig {
  std::vector<std::string> inputs;
  std::size_t nulls = kDefaultNullSamples;
  std::optional<std::uint64_t> seed_flag;
  CleanupChoice cleanup = CleanupChoice::kForward;
  report::Format format = report::Format::kCsv;
  std::size_t jobs = 1;
  std::string out;

  std::uint64_t seed() const {
    if (seed_flag) return *seed_flag;
    if (const char* env = std::getenv("MOTIFGRID_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw UsageError("MOTIFGRID_SEED is not an unsigned integer: '" + std::string(env) + "'");
    }
    return 1;
  }

  void check() const {
    if (nulls < 2) throw UsageError("--nulls must be at least 2");
    if (jobs < 1) throw UsageError("--jobs must be at least 1");
  }
};

void add_cleanup(CLI::App* cmd, RunConfig& cfg, bool allow_off = true) {
  std::map<std::string, CleanupChoice> choices = {{"forward", CleanupChoice::kForward}, {"both", CleanupChoice::kBoth}};
  if (allow_off) choices["off"] = CleanupChoice::kOff;
  cmd->add_option("--cleanup", cfg.cleanup, "Dead-connection cleanup before analysis")
      ->transform(CLI::CheckedTransformer(choices, CLI::ignore_case))
      ->capture_default_str();
}

void add_format(CLI::App* cmd, RunConfig& cfg) {
  std::map<std::string, report::Format> formats = {{"csv", report::Format::kCsv}, {"json", report::Format::kJson}};
  cmd->add_option("--format", cfg.format, "Report format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_seed(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed_flag, "Root seed (falls back to $MOTIFGRID_SEED, then 1)");
}

std::string extension(report::Format f) { return f == report::Format::kJson ? ".json" : ".csv"; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
}

/// Writes to DIR/name when --out is given, otherwise to stdout.
void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text(fs::path(cfg.out) / name, text);
  }
}

MaskStack apply_cleanup(const MaskStack& stack, CleanupChoice choice, std::uint64_t* removed = nullptr) {
  if (choice == CleanupChoice::kOff) {
    require_valid(stack);
    if (removed) *removed = 0;
    return stack;
  }
  auto result = clean_dead(stack, choice == CleanupChoice::kBoth ? CleanupMode::kForwardAndBackward : CleanupMode::kForward);
  if (removed) *removed = result.removed;
  return std::move(result.stack);
}

struct LoadedNetwork {
  InputRef ref;
  MaskStack stack;
  std::string sparsity_tag;
};

/// Loads and validates every input. Failures are reported on stderr and
/// counted; the caller turns a non-zero count into exit status 1.
std::vector<LoadedNetwork> load_inputs(const RunConfig& cfg, int& failures) {
  std::vector<fs::path> paths(cfg.inputs.begin(), cfg.inputs.end());
  std::vector<InputRef> refs;
  try {
    refs = discover_inputs(paths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    ++failures;
    return {};
  }
  std::vector<LoadedNetwork> out;
  for (auto& ref : refs) {
    try {
      MaskStack stack = load_mask_stack(ref.path).with_label(ref.label);
      require_valid(stack);
      std::string tag = ref.sparsity_tag ? *ref.sparsity_tag : format_double(sparsity_profile(stack).global_sparsity);
      out.push_back({ref, std::move(stack), std::move(tag)});
    } catch (const std::exception& e) {
      std::cerr << "error: " << ref.path.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return out;
}

int finish(int failures) { return failures == 0 ? kExitOk : kExitFileFailure; }

// ---------------------------------------------------------------------------

int cmd_clean(const RunConfig& cfg) {
  if (cfg.out.empty()) throw UsageError("clean requires --out DIR");
  ensure_dir(cfg.out);
  int failures = 0;
  auto networks = load_inputs(cfg, failures);
  std::ostringstream log;
  log << "file,label,removed,edges_before,edges_after\n";
  std::vector<ManifestEntry> manifest;
  for (const auto& n : networks) {
    try {
      std::uint64_t removed = 0;
      const MaskStack cleaned = apply_cleanup(n.stack, cfg.cleanup, &removed);
      const std::string file = n.ref.path.filename().string();
      save_mask_stack(fs::path(cfg.out) / file, cleaned);
      manifest.push_back({file, n.stack.label(), n.sparsity_tag, {}, {}, {}, {}, {}});
      log << csv::join({file, n.stack.label(), std::to_string(removed),
                        std::to_string(sparsity_profile(n.stack).total_edges),
                        std::to_string(sparsity_profile(cleaned).total_edges)})
          << '\n';
    } catch (const std::exception& e) {
      std::cerr << "error: " << n.ref.path.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  write_manifest(fs::path(cfg.out) / kManifestName, manifest);
  write_text(fs::path(cfg.out) / "clean_log.csv", log.str());
  std::cout << log.str();
  return finish(failures);
}

int cmd_census(const RunConfig& cfg, bool use_oracle, double budget) {
  ensure_dir(cfg.out);
  int failures = 0;
  auto networks = load_inputs(cfg, failures);
  std::vector<MotifCensus> rows;
  for (const auto& n : networks) {
    try {
      const MaskStack stack = apply_cleanup(n.stack, cfg.cleanup);
      MotifCensus c = use_oracle ? oracle::enumerate_all(stack, budget) : count_all(stack);
      c.sparsity_tag = n.sparsity_tag;
      rows.push_back(std::move(c));
    } catch (const std::exception& e) {
      std::cerr << "error: " << n.ref.path.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  const std::string name = use_oracle ? "oracle_census" : "census";
  emit(cfg, name + extension(cfg.format),
       cfg.format == report::Format::kJson ? report::census_json(rows) : report::census_csv(rows));
  return finish(failures);
}

int cmd_randgen(const RunConfig& cfg) {
  if (cfg.out.empty()) throw UsageError("randgen requires --out DIR");
  cfg.check();
  ensure_dir(cfg.out);
  int failures = 0;
  auto networks = load_inputs(cfg, failures);
  const std::uint64_t root = cfg.seed();
  for (const auto& n : networks) {
    try {
      const MaskStack stack = apply_cleanup(n.stack, cfg.cleanup);
      const auto spec = null_spec_of(stack, network_seed(root, stack.label()), cfg.nulls);
      const fs::path dir = fs::path(cfg.out) / stack.label();
      fs::create_directories(dir);
      std::vector<ManifestEntry> manifest;
      for (std::size_t k = 0; k < spec.sample_count; ++k) {
        const MaskStack null = generate(spec, k);
        const std::string file = null.label() + ".mask";
        save_mask_stack(dir / file, null);
        manifest.push_back({file, stack.label() + "/" + null.label(), n.sparsity_tag, {}, {}, {}, {}, {}});
      }
      write_manifest(dir / kManifestName, manifest);
      std::cerr << stack.label() << ": wrote " << spec.sample_count << " null networks to " << dir.string() << '\n';
    } catch (const std::exception& e) {
      std::cerr << "error: " << n.ref.path.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return finish(failures);
}

void emit_significance(const RunConfig& cfg, const std::vector<ZScoreReport>& reports) {
  if (cfg.format == report::Format::kJson) {
    emit(cfg, "zscores.json", report::zscore_json(reports));
    if (!cfg.out.empty() && !reports.empty()) {
      write_text(fs::path(cfg.out) / "components.json", report::components_json(component_tables(reports)));
    }
  } else {
    emit(cfg, "zscores.csv", report::zscore_csv(reports));
    if (!cfg.out.empty() && !reports.empty()) {
      const auto tables = component_tables(reports);
      write_text(fs::path(cfg.out) / "n_real.csv", report::component_csv(tables.n_real));
      write_text(fs::path(cfg.out) / "random_mean.csv", report::component_csv(tables.random_mean));
      write_text(fs::path(cfg.out) / "random_std.csv", report::component_csv(tables.random_std));
    }
  }
}

int cmd_zscore(const RunConfig& cfg) {
  cfg.check();
  ensure_dir(cfg.out);
  int failures = 0;
  auto networks = load_inputs(cfg, failures);
  const ScoreOptions options{cfg.seed(), cfg.nulls, cfg.jobs};
  std::vector<ZScoreReport> reports;
  for (const auto& n : networks) {
    try {
      reports.push_back(score_network(apply_cleanup(n.stack, cfg.cleanup), n.sparsity_tag, options));
    } catch (const std::exception& e) {
      std::cerr << "error: " << n.ref.path.string() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  emit_significance(cfg, reports);
  return finish(failures);
}

struct SweepOptions {
  std::size_t population = 20;
  std::vector<double> levels = trainer::default_schedule().fractions;
  std::vector<std::size_t> arch = {10, 32, 32, 16, 7};
  std::size_t steps = trainer::TrainConfig{}.max_steps;
  std::size_t retrain_steps = trainer::default_schedule().retrain.max_steps;
  bool per_layer = false;
};

int cmd_sweep(const RunConfig& cfg, const SweepOptions& opts) {
  if (cfg.out.empty()) throw UsageError("sweep requires --out DIR");
  cfg.check();
  trainer::SweepConfig sc;
  sc.population = opts.population;
  sc.layer_dims = opts.arch;
  sc.schedule.fractions = opts.levels;
  sc.schedule.retrain.max_steps = opts.retrain_steps;
  sc.initial_training.max_steps = opts.steps;
  sc.scope = opts.per_layer ? trainer::PruneScope::kPerLayer : trainer::PruneScope::kGlobal;
  sc.cleanup = cfg.cleanup == CleanupChoice::kBoth ? CleanupMode::kForwardAndBackward : CleanupMode::kForward;
  sc.seed = cfg.seed();
  sc.task.seed = sc.seed;
  sc.jobs = cfg.jobs;
  try {
    sc.schedule.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (sc.population == 0) throw UsageError("--population must be positive");
  if (sc.layer_dims.size() < 2) throw UsageError("--arch needs at least two layers");

  ensure_dir(cfg.out);
  const fs::path snapshots_dir = fs::path(cfg.out) / "snapshots";
  fs::create_directories(snapshots_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto result = trainer::sweep(sc);
  const double train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream log;
  for (const auto& d : result.diagnostics) {
    std::cerr << d << '\n';
    log << d << '\n';
  }

  std::vector<ManifestEntry> manifest;
  std::vector<ZScoreReport> reports;
  const ScoreOptions options{sc.seed, cfg.nulls, cfg.jobs};
  for (const auto& snap : result.snapshots) {
    const MaskStack& analysed = cfg.cleanup == CleanupChoice::kOff ? snap.pruned : snap.cleaned;
    const std::string tag = format_double(snap.level);
    const std::string file = analysed.label() + ".mask";
    save_mask_stack(snapshots_dir / file, analysed);
    manifest.push_back({file, analysed.label(), tag, snap.network_id, snap.level, snap.global_sparsity,
                        snap.train_mse, snap.val_mse});
    reports.push_back(score_network(analysed, tag, options));
  }
  write_manifest(snapshots_dir / kManifestName, manifest);

  RunConfig to_dir = cfg;
  emit_significance(to_dir, reports);
  if (reports.empty()) {
    std::cerr << "error: every network diverged; no reports\n";
    return kExitFileFailure;
  }
  const auto summary = summarize(reports);
  if (cfg.format == report::Format::kJson) {
    write_text(fs::path(cfg.out) / "summary.json", report::summary_json(summary));
  } else {
    write_text(fs::path(cfg.out) / "summary.csv", report::summary_csv(summary));
  }
  write_text(fs::path(cfg.out) / "plot_data.csv", report::plot_data_csv(summary));

  log << "networks " << sc.population << ", snapshots " << result.snapshots.size() << ", training "
      << train_seconds << " s\n";
  write_text(fs::path(cfg.out) / "sweep_log.txt", log.str());

  std::cout << "sparsity";
  for (auto kind : kAllMotifs) std::cout << ',' << motif_name(kind);
  std::cout << '\n';
  for (const auto& g : summary.groups) {
    std::cout << g.sparsity_tag;
    for (auto kind : kAllMotifs) {
      std::cout << ',';
      if (g[kind].stats) std::cout << format_double(g[kind].stats->median);
    }
    std::cout << '\n';
  }
  return result.diagnostics.empty() ? kExitOk : kExitFileFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motif census and significance for sparse feed-forward networks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* clean = app.add_subcommand("clean", "Remove dead connections left by pruning");
  clean->add_option("inputs", cfg.inputs, "Mask files or collection directories")->required();
  clean->add_option("--out", cfg.out, "Output directory")->required();
  add_cleanup(clean, cfg, false);

  auto* census = app.add_subcommand("census", "Count the eight motifs in each network");
  census->add_option("inputs", cfg.inputs, "Mask files or collection directories")->required();
  census->add_option("--out", cfg.out, "Output directory (default: stdout)");
  add_cleanup(census, cfg);
  add_format(census, cfg);

  auto* randgen = app.add_subcommand("randgen", "Write the null networks used for each input");
  randgen->add_option("inputs", cfg.inputs, "Mask files or collection directories")->required();
  randgen->add_option("--out", cfg.out, "Output directory")->required();
  randgen->add_option("--nulls", cfg.nulls, "Null networks per input")->capture_default_str();
  add_seed(randgen, cfg);
  add_cleanup(randgen, cfg);

  auto* zscore_cmd = app.add_subcommand("zscore", "Z-scores against a uniform null ensemble");
  zscore_cmd->add_option("inputs", cfg.inputs, "Mask files or collection directories")->required();
  zscore_cmd->add_option("--out", cfg.out, "Output directory (default: z table on stdout)");
  zscore_cmd->add_option("--nulls", cfg.nulls, "Null networks per input")->capture_default_str();
  zscore_cmd->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
  add_seed(zscore_cmd, cfg);
  add_cleanup(zscore_cmd, cfg);
  add_format(zscore_cmd, cfg);

  SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Train, prune and score a population of toy networks");
  sweep->add_option("--out", cfg.out, "Output directory")->required();
  sweep->add_option("--population", sweep_opts.population, "Networks to train")->capture_default_str();
  sweep->add_option("--levels", sweep_opts.levels, "Ascending sparsity levels")->delimiter(',');
  sweep->add_option("--arch", sweep_opts.arch, "Layer widths, e.g. 10,32,32,16,7")->delimiter(',');
  sweep->add_option("--steps", sweep_opts.steps, "Initial training steps")->capture_default_str();
  sweep->add_option("--retrain-steps", sweep_opts.retrain_steps, "Retraining steps per level")->capture_default_str();
  sweep->add_flag("--per-layer", sweep_opts.per_layer, "Prune each layer to the level instead of globally");
  sweep->add_option("--nulls", cfg.nulls, "Null networks per snapshot")->capture_default_str();
  sweep->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
  add_seed(sweep, cfg);
  add_cleanup(sweep, cfg);
  add_format(sweep, cfg);

  double budget = oracle::kDefaultTupleBudget;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force census (test support)");
  oracle_cmd->group("");
  oracle_cmd->add_option("inputs", cfg.inputs)->required();
  oracle_cmd->add_option("--out", cfg.out);
  oracle_cmd->add_option("--budget", budget, "Maximum tuples per motif kind");
  add_cleanup(oracle_cmd, cfg);
  add_format(oracle_cmd, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*clean) return cmd_clean(cfg);
    if (*census) return cmd_census(cfg, false, budget);
    if (*randgen) return cmd_randgen(cfg);
    if (*zscore_cmd) return cmd_zscore(cfg);
    if (*sweep) return cmd_sweep(cfg, sweep_opts);
    if (*oracle_cmd) return cmd_census(cfg, true, budget);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFileFailure;
  }
  return kExitUsage;
}
