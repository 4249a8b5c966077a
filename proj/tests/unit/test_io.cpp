#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cda/cli.hpp"
#include "cda/config.hpp"
#include "cda/error.hpp"
#include "cda/report_io.hpp"
#include "cda/snapshot.hpp"

using namespace cda;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cda_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kSmallRun = R"(experiment = twin
grid.nx = 16
grid.ny = 16
grid.nz = 4
time.dt = 0.01
time.t_minus = -0.1
time.t_sync = 0.3
time.t_plus = 0.5
time.output_every = 5
nudging.lambda = 20
interpolant.delta = 0.25
interpolant.vertical = blocks:2
)";

RunConfig small_run(const fs::path& out) {
  RunConfig c = parse_config(kSmallRun);
  c.output_dir = out.string();
  return c;
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = run_cli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Config, MinimalDocumentGivesDefaults) {
  const RunConfig c = parse_config("experiment = twin\n");
  EXPECT_EQ(serialize(c), serialize(RunConfig{}));
  EXPECT_EQ(c.lambda, 50.0);
  EXPECT_EQ(c.grid.nx, 64);
}

TEST(Config, ConstraintErrorsNameTheLine) {
  try {
    (void)parse_config("experiment = twin\nnudging.lambda = -1\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), errc::kConstraint);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("lambda >= 0"), std::string::npos);
  }
}

TEST(Config, UnknownKeyTypeErrorAndDuplicate) {
  try {
    (void)parse_config("bogus.key = 1\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), errc::kUnknownKey);
  }
  try {
    (void)parse_config("\n\ngrid.nx = many\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), errc::kConfigSyntax);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW((void)parse_config("seed = 1\nseed = 2\n"), ValidationError);
  EXPECT_THROW((void)parse_config("no equals sign\n"), ValidationError);
  EXPECT_THROW((void)parse_config("time.t_sync = 5\n"), ValidationError);  // beyond t_plus
}

TEST(Config, SerializeParseFixpoint) {
  RunConfig c;
  c.seed = 99;
  c.gas_model = "degenerate";
  c.lambda = 12.345678901234567;
  c.delta_temperature = 0.125;
  c.vertical = VerticalLayout{4};
  c.sweep_lambdas = {0.5, 3.0};
  c.sweep_seeds = {1, 2, 3};
  c.sync_init = SyncInit::Observed;
  const std::string text = serialize(c);
  const RunConfig back = parse_config(text);
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(back).size(), 16u);
  EXPECT_NE(config_hash(back), config_hash(RunConfig{}));
  EXPECT_EQ(back.lambda, c.lambda);
}

TEST(Config, EveryDocumentedKeyIsSerialized) {
  const std::string text = serialize(RunConfig{});
  for (const auto& k : config_keys()) EXPECT_NE(text.find(k + " = "), std::string::npos) << k;
}

TEST(Config, LoadMissingFile) {
  try {
    (void)load_config("/nonexistent/missing.cfg");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), errc::kFileNotFound);
  }
}

TEST(Report, EmptySeriesManifestIsValid) {
  const auto dir = scratch("empty");
  TrackingReport r;
  const auto m = write_report(r, RunConfig{}, dir);
  EXPECT_TRUE(fs::exists(m.path));
  EXPECT_NE(m.text.find("# report.rows = 0"), std::string::npos);
  EXPECT_NO_THROW((void)parse_config(m.text));
  const auto back = read_report(dir);
  EXPECT_EQ(back.rows(), 0u);
}

TEST(Report, WriteThenReadBackIsEqual) {
  const auto dir = scratch("roundtrip");
  const RunConfig cfg = small_run(dir);
  const TrackingReport r = run_twin(twin_config_from(cfg));
  ASSERT_GT(r.rows(), 3u);
  write_report(r, cfg, dir);
  const TrackingReport back = read_report(dir);
  EXPECT_TRUE(back == r);
  fs::remove_all(dir);
}

TEST(Report, ManifestsDifferOnlyInTimestamp) {
  const auto d1 = scratch("m1");
  const auto d2 = scratch("m2");
  RunConfig cfg = small_run(d1);
  const auto m1 = write_report(run_twin(twin_config_from(cfg)), cfg, d1);
  const auto m2 = write_report(run_twin(twin_config_from(cfg)), cfg, d2);
  EXPECT_EQ(strip_timestamp(m1.text), strip_timestamp(m2.text));
  EXPECT_EQ(read_file(d1 / "timeseries.csv"), read_file(d2 / "timeseries.csv"));
  // The manifest reproduces the run.
  const RunConfig again = parse_config(m1.text);
  EXPECT_EQ(serialize(again), serialize(cfg));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Snapshot, RoundTripIsBitwise) {
  const auto dir = scratch("snap");
  const Grid g{6, 5, 4, 1.5, 0.75, HorizontalBC::Walls};
  ScalarField f(g);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  for (auto& v : f.v) v = d(rng);
  write_snapshot(dir / "T.cdaf", "T", f);
  const auto s = read_snapshot(dir / "T.cdaf");
  EXPECT_EQ(s.name, "T");
  EXPECT_TRUE(s.field.grid == g);
  EXPECT_EQ(s.field.v, f.v);
  std::ifstream in(dir / "T.cdaf", std::ios::binary);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("CDAFLD v1 T 6 5 4 ", 0), 0u);
  EXPECT_THROW((void)read_snapshot(dir / "missing.cdaf"), ValidationError);
  fs::remove_all(dir);
}

TEST(Snapshot, TwinRunWritesSnapshots) {
  const auto dir = scratch("twin_snap");
  RunConfig cfg = small_run(dir);
  cfg.snapshot_every = 10;
  (void)run_twin(twin_config_from(cfg));
  int count = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) count += e.is_regular_file() ? 1 : 0;
  EXPECT_GT(count, 0);
  fs::remove_all(dir);
}

TEST(Cli, CheckEosIdealFlagsEntropyLimit) {
  std::string out;
  EXPECT_EQ(cli({"check-eos", "--model", "ideal"}, &out), 0);
  EXPECT_NE(out.find("FLAG  w14.entropy_limit"), std::string::npos);
  EXPECT_EQ(cli({"check-eos", "--model", "degenerate"}, &out), 0);
  EXPECT_EQ(out.find("FLAG"), std::string::npos);
}

TEST(Cli, UnknownSubcommandPrintsUsage) {
  std::string err;
  EXPECT_EQ(cli({"frobnicate"}, nullptr, &err), 1);
  EXPECT_EQ(err.rfind("CDA-E105:", 0), 0u);
  EXPECT_NE(err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}, nullptr, &err), 1);
}

TEST(Cli, MissingConfigIsFileNotFound) {
  std::string err;
  EXPECT_EQ(cli({"twin", "--config", "missing.cfg"}, nullptr, &err), 1);
  EXPECT_EQ(err.rfind("CDA-E101:", 0), 0u);
}

TEST(Cli, InvalidConfigValueExitsOne) {
  const auto dir = scratch("badcfg");
  std::ofstream(dir / "bad.cfg") << "nudging.lambda = -3\n";
  std::string err;
  EXPECT_EQ(cli({"twin", "--config", (dir / "bad.cfg").string()}, nullptr, &err), 1);
  EXPECT_EQ(err.rfind("CDA-E104:", 0), 0u);
  fs::remove_all(dir);
}

TEST(Cli, NumericalFailureExitsTwo) {
  const auto dir = scratch("cfl");
  std::ofstream(dir / "cfl.cfg") << kSmallRun << "initial.u_amplitude = 1000\n";
  std::string err;
  EXPECT_EQ(cli({"twin", "--config", (dir / "cfl.cfg").string(), "--output-dir", (dir / "out").string()}, nullptr, &err), 2);
  EXPECT_EQ(err.rfind("CDA-E2", 0), 0u);
  fs::remove_all(dir);
}

TEST(Cli, TwinThenReportAndOtherSubcommands) {
  const auto dir = scratch("cli_twin");
  std::ofstream(dir / "run.cfg") << kSmallRun;
  const std::string cfg = (dir / "run.cfg").string();
  const std::string out_dir = (dir / "out").string();
  std::string out;
  ASSERT_EQ(cli({"twin", "--config", cfg, "--output-dir", out_dir, "--seed", "3"}, &out), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "timeseries.csv"));
  const RunConfig stored = parse_config(read_file(dir / "out" / "manifest.cfg"));
  EXPECT_EQ(stored.seed, 3u);
  ASSERT_EQ(cli({"report", "--input", out_dir}, &out), 0);
  EXPECT_NE(out.find("decay rate"), std::string::npos);

  ASSERT_EQ(cli({"simulate", "--config", cfg, "--output-dir", (dir / "sim").string()}, &out), 0);
  EXPECT_TRUE(fs::exists(dir / "sim" / "observed.csv"));

  std::ofstream(dir / "sweep.cfg") << kSmallRun << "sweep.lambdas = 5, 20\n";
  ASSERT_EQ(cli({"sweep", "--config", (dir / "sweep.cfg").string(), "--output-dir", (dir / "sw").string()}, &out), 0);
  EXPECT_TRUE(fs::exists(dir / "sw" / "sweep.csv"));

  ASSERT_EQ(cli({"check-interpolant", "--config", cfg}, &out), 0);
  EXPECT_NE(out.find("idempotence"), std::string::npos);
  fs::remove_all(dir);
}
