#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "motifgrid/csv.hpp"
#include "motifgrid/ensemble.hpp"
#include "motifgrid/mask_io.hpp"
#include "motifgrid/oracle.hpp"
#include "motifgrid/pipeline.hpp"
#include "motifgrid/report.hpp"
#include "temp_dir.hpp"

using namespace motifgrid;
using namespace motifgrid::testing;
namespace fs = std::filesystem;

namespace {

const std::string kCli = MOTIFGRID_CLI;
const fs::path kData = MOTIFGRID_TEST_DATA;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = {}) {
  const std::string command = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) rows.push_back(csv::split(line));
  return rows;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("census of the chain example") {
  const auto r = run("census " + q(kData / "chain_example.mask"));
  CHECK(r.status == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][2] == "chain2");
  CHECK(rows[1][0] == "chain_example");
  CHECK(rows[1][2] == "3");
}

TEST_CASE("census of an empty network is all zeros") {
  TempDir dir;
  save_mask_stack(dir / "empty.mask", empty_stack({3, 4, 2}));
  const auto rows = csv_rows(run("census " + q(dir / "empty.mask")).out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][1] == "1");
  for (std::size_t i = 2; i < rows[1].size(); ++i) CHECK(rows[1][i] == "0");
}

TEST_CASE("census counts differ with cleanup only when edges are removed") {
  TempDir dir;
  const MaskStack dead({MaskMatrix::from_rows({{1, 0, 0}, {0, 0, 1}}), MaskMatrix::from_rows({{1, 0}, {1, 1}, {0, 1}})});
  save_mask_stack(dir / "dead.mask", dead);
  save_mask_stack(dir / "full.mask", full_stack({2, 3, 2}));
  const auto off = csv_rows(run("census " + q(dir.path()) + " --cleanup off").out);
  const auto on = csv_rows(run("census " + q(dir.path()) + " --cleanup forward").out);
  REQUIRE(off.size() == 3);
  CHECK(off[1] != on[1]);
  CHECK(off[2] == on[2]);
  CHECK(on[1][2] == std::to_string(count_chain2(clean_dead(dead).stack)));
}

TEST_CASE("census json agrees with csv") {
  const std::string in = q(kData);
  const auto csv = run("census " + in + " --format csv");
  const auto json = run("census " + in + " --format json");
  CHECK(json.status == 0);
  CHECK(report::census_json_to_csv(json.out) == csv.out);
}

TEST_CASE("hidden oracle command matches census") {
  const auto census = run("census " + q(kData) + " --cleanup off");
  const auto oracle = run("oracle " + q(kData) + " --cleanup off");
  CHECK(oracle.status == 0);
  CHECK(oracle.out == census.out);
  CHECK(run("--help").out.find("oracle") == std::string::npos);
}

TEST_CASE("clean writes byte-identical files when nothing is dead") {
  TempDir dir;
  const auto r = run("clean " + q(kData / "chain_example.mask") + " --out " + q(dir / "out"));
  CHECK(r.status == 0);
  CHECK(slurp(dir / "out" / "chain_example.mask") == slurp(kData / "chain_example.mask"));
  const auto log = csv_rows(slurp(dir / "out" / "clean_log.csv"));
  REQUIRE(log.size() == 2);
  CHECK(log[1][2] == "0");
}

TEST_CASE("clean logs one row per file with clean_dead removal counts") {
  TempDir dir;
  fs::create_directories(dir / "in");
  const MaskStack dead({MaskMatrix::from_rows({{1, 0, 0}, {0, 0, 1}}), MaskMatrix::from_rows({{1, 0}, {1, 1}, {0, 1}})});
  save_mask_stack(dir / "in" / "dead.mask", dead);
  save_mask_stack(dir / "in" / "full.mask", full_stack({3, 3, 3}));
  save_mask_stack(dir / "in" / "chain.mask", chain_example());
  const auto r = run("clean " + q(dir / "in") + " --out " + q(dir / "out"));
  CHECK(r.status == 0);
  const auto log = csv_rows(slurp(dir / "out" / "clean_log.csv"));
  REQUIRE(log.size() == 4);
  CHECK(log[2][1] == "dead");
  CHECK(log[2][2] == "2");
  CHECK(load_mask_stack(dir / "out" / "dead.mask").masks() == clean_dead(dead).stack.masks());
  CHECK(read_manifest(dir / "out" / kManifestName).size() == 3);
}

TEST_CASE("per-file failures give exit status 1 without stopping the batch") {
  TempDir dir;
  std::ofstream(dir / "broken.mask") << "not a mask\n";
  save_mask_stack(dir / "bad_dims.mask", MaskStack({MaskMatrix::full(2, 3), MaskMatrix::full(2, 2)}));
  save_mask_stack(dir / "ok.mask", chain_example());
  const auto r = run("census " + q(dir.path()));
  CHECK(r.status == 1);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "ok");
}

TEST_CASE("configuration errors give exit status 2") {
  CHECK(run("census").status == 2);
  CHECK(run("frobnicate x").status == 2);
  CHECK(run("zscore " + q(kData) + " --nulls 1").status == 2);
  CHECK(run("zscore " + q(kData) + " --jobs 0").status == 2);
  CHECK(run("census " + q(kData) + " --cleanup sideways").status == 2);
  CHECK(run("zscore " + q(kData) + " --nulls 10", "MOTIFGRID_SEED=abc").status == 2);
  TempDir dir;
  CHECK(run("sweep --out " + q(dir.path()) + " --levels 0.9,0.5").status == 2);
}

TEST_CASE("dense input is degenerate for every motif") {
  TempDir dir;
  save_mask_stack(dir / "dense.mask", full_stack({4, 5, 3, 2}));
  const auto rows = csv_rows(run("zscore " + q(dir / "dense.mask") + " --nulls 20").out);
  REQUIRE(rows.size() == 1 + kMotifCount);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][6].empty());
    CHECK(rows[i][7] == "1");
    CHECK(rows[i][3] == rows[i][4]);
  }
}

TEST_CASE("zscore output is reproducible and seed-sensitive") {
  const std::string args = "zscore " + q(kData) + " --nulls 200 --seed 42";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(run(args + " --jobs 3").out == a.out);
  CHECK(run("zscore " + q(kData) + " --nulls 200", "MOTIFGRID_SEED=42").out == a.out);
  CHECK(run("zscore " + q(kData) + " --nulls 200 --seed 43").out != a.out);
  CHECK(run("zscore " + q(kData) + " --nulls 200").out == run("zscore " + q(kData) + " --nulls 200 --seed 1").out);
}

TEST_CASE("zscore json agrees with csv and component tables rebuild z") {
  TempDir dir;
  const std::string in = q(kData);
  CHECK(run("zscore " + in + " --nulls 100 --out " + q(dir / "csv")).status == 0);
  CHECK(run("zscore " + in + " --nulls 100 --format json --out " + q(dir / "json")).status == 0);
  const std::string csv = slurp(dir / "csv" / "zscores.csv");
  CHECK(report::zscore_json_to_csv(slurp(dir / "json" / "zscores.json")) == csv);

  const auto z = csv_rows(csv);
  const auto n_real = csv_rows(slurp(dir / "csv" / "n_real.csv"));
  const auto mean = csv_rows(slurp(dir / "csv" / "random_mean.csv"));
  const auto sd = csv_rows(slurp(dir / "csv" / "random_std.csv"));
  REQUIRE(z.size() == n_real.size());
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i][6].empty()) continue;
    const double rebuilt = (std::stod(n_real[i][3]) - std::stod(mean[i][3])) / std::stod(sd[i][3]);
    CHECK(rebuilt == doctest::Approx(std::stod(z[i][6])).epsilon(1e-9));
  }
}

TEST_CASE("zscore matches a recomputation with oracle counts") {
  // Three-layer network with six edges, scored against 1000 nulls.
  const auto r = run("zscore " + q(kData / "chain_example.mask") + " --nulls 1000 --seed 7 --cleanup off");
  CHECK(r.status == 0);

  const MaskStack stack = load_mask_stack(kData / "chain_example.mask");
  MotifCensus real = oracle::enumerate_all(stack);
  real.sparsity_tag = "0.6";
  const auto spec = null_spec_of(stack, network_seed(7, stack.label()), 1000);
  std::vector<MotifCensus> nulls;
  for (std::size_t k = 0; k < spec.sample_count; ++k) nulls.push_back(oracle::enumerate_all(generate(spec, k)));
  const std::vector<ZScoreReport> expected = {zscore(real, nulls)};
  CHECK(r.out == report::zscore_csv(expected));
}

TEST_CASE("randgen writes the null networks used for scoring") {
  TempDir dir;
  const auto r = run("randgen " + q(kData / "chain_example.mask") + " --nulls 5 --seed 3 --out " + q(dir.path()));
  CHECK(r.status == 0);
  const MaskStack stack = load_mask_stack(kData / "chain_example.mask");
  const auto spec = null_spec_of(stack, network_seed(3, "chain_example"), 5);
  for (std::size_t k = 0; k < 5; ++k) {
    const auto file = dir / "chain_example" / ("null-" + std::to_string(k) + ".mask");
    CHECK(slurp(file) == to_mask_text(generate(spec, k)));
  }
  CHECK(read_manifest(dir / "chain_example" / kManifestName).size() == 5);
}

TEST_CASE("small sweep writes snapshots, reports and summaries") {
  TempDir dir;
  const std::string args = "sweep --population 2 --levels 0.5,0.9 --arch 6,8,6,3 --steps 100 --retrain-steps 40 "
                           "--nulls 30 --seed 4 --out ";
  const auto a = run(args + q(dir / "a"));
  CHECK(a.status == 0);
  const auto summary = csv_rows(slurp(dir / "a" / "summary.csv"));
  CHECK(summary.size() == 1 + 2 * kMotifCount);
  const auto manifest = read_manifest(dir / "a" / "snapshots" / kManifestName);
  REQUIRE(manifest.size() == 4);
  CHECK(manifest[1].level == std::optional<double>(0.9));
  CHECK(manifest[1].final_val_mse.has_value());
  CHECK(fs::exists(dir / "a" / "snapshots" / manifest[3].file));
  CHECK(fs::exists(dir / "a" / "plot_data.csv"));
  CHECK(fs::exists(dir / "a" / "random_std.csv"));

  const auto b = run(args + q(dir / "b") + " --jobs 2");
  CHECK(b.out == a.out);
  CHECK(slurp(dir / "b" / "summary.csv") == slurp(dir / "a" / "summary.csv"));
  CHECK(slurp(dir / "b" / "zscores.csv") == slurp(dir / "a" / "zscores.csv"));

  // Snapshot collections feed straight back into the other commands.
  const auto rescored = run("zscore " + q(dir / "a" / "snapshots") + " --nulls 30 --seed 4 --cleanup off");
  CHECK(rescored.out == slurp(dir / "a" / "zscores.csv"));
}
