#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "rotasym/config.hpp"
#include "rotasym/errors.hpp"
#include "rotasym/initial_data.hpp"
#include "rotasym/snapshot.hpp"

using namespace rotasym;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = "grid.nh = 16\nsolver.nu = 0.05\nsolver.eps = 0.1\n";

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("rotasym_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string read_text(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string l;
  std::getline(f, l);
  return l;
}

int line_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ROTASYM_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, MinimalFileGetsDefaults) {
  RunConfig c = parse_config_text(kMinimal);
  EXPECT_EQ(c.nh, 16);
  EXPECT_EQ(c.n3, 16);
  EXPECT_EQ(c.solver.nu, 0.05);
  EXPECT_EQ(c.solver.eps, 0.1);
  EXPECT_EQ(c.solver.dt, 1e-3);
  EXPECT_EQ(c.profile.b0, 1.0);
  EXPECT_EQ(c.profile.amplitude, 0.0);
  EXPECT_EQ(c.profile.n_bins, 16);
  EXPECT_EQ(c.initial.kind, InitialSpec::Kind::random_spectrum);
  EXPECT_EQ(c.output_dir, "rotasym_out");
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_EQ(line_of("grid.nh = 16\nsolver.nu = 0.05\nsolver.eps = -1\n"), 3);
  EXPECT_EQ(line_of("grid.nh = 16\n# c\nsolver.bogus = 1\n"), 3);
  EXPECT_EQ(line_of("grid.nh = 16\ngrid.nh = 32\n"), 2);
  EXPECT_EQ(line_of("grid.nh = 15\n"), 1);
  EXPECT_EQ(line_of("grid.nh = sixteen\n"), 1);
  EXPECT_EQ(line_of("solver.eps_list = 0.1, 0.2\n"), 1);
  EXPECT_EQ(line_of("grid.nh 16\n"), 1);
  EXPECT_EQ(line_of("solver.nu = 0.05\nsolver.eps = 0.1\n"), 0);  // missing grid.nh
  EXPECT_EQ(line_of("grid.nh = 16\nsolver.eps = 0.1\n"), 0);
  EXPECT_EQ(line_of("grid.nh = 16\nsolver.nu = 0.1\n"), 0);
  EXPECT_THROW(parse_config("/nonexistent/rotasym.cfg"), ConfigError);
}

TEST(Config, EmitReparsesIdentically) {
  RunConfig c = parse_config_text(std::string(kMinimal) +
                                  "profile.amplitude = 0.5\nsolver.eps_list = 0.1, 0.05, 0.025\n"
                                  "initial.kind = taylor_green\ninitial.amplitude = 0.3333333333333333\n");
  const std::string once = emit_config(c);
  const RunConfig d = parse_config_text(once);
  EXPECT_EQ(emit_config(d), once);
  EXPECT_EQ(config_hash(c), config_hash(d));
  EXPECT_EQ(d.eps_list.size(), 3u);
  EXPECT_EQ(d.initial.amplitude, 0.3333333333333333);
  EXPECT_EQ(d.solver.nu, 0.05);
  RunConfig e = d;
  e.solver.dt *= 0.5;
  EXPECT_NE(config_hash(e), config_hash(d));
}

TEST(Config, ShippedConfigsParse) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(ROTASYM_CONFIG_DIR)) {
    if (e.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(parse_config(e.path().string())) << e.path();
    ++n;
  }
  EXPECT_GE(n, 4);
}

TEST(Snapshot, BitwiseRoundTrip) {
  const auto dir = scratch("snap");
  Grid g(16, 8);
  Field3 u = random_divergence_free(g, {.seed = 5});
  write_snapshot((dir / "a.rfa").string(), u, 0.125);
  EXPECT_EQ(fs::file_size(dir / "a.rfa"), kSnapshotHeaderBytes + 8 * g.size() * 3);
  double t = 0;
  Field3 v = read_field3((dir / "a.rfa").string(), g, &t);
  EXPECT_EQ(t, 0.125);
  for (int c = 0; c < 3; ++c)
    EXPECT_EQ(std::memcmp(u.physical(c).data(), v.physical(c).data(), g.size() * sizeof(double)), 0);
  // Fixed little-endian header.
  const std::string bytes = read_text(dir / "a.rfa");
  EXPECT_EQ(bytes.substr(0, 4), "RFA1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), kSnapshotVersion);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 16);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 8);
  EXPECT_EQ(static_cast<unsigned char>(bytes[20]), 3);
}

TEST(Snapshot, CorruptFilesAreRejected) {
  const auto dir = scratch("corrupt");
  Grid g(16, 8);
  const Field3 u = taylor_green(g);
  const std::string good = (dir / "good.rfa").string();
  write_snapshot(good, u, 1.0);
  const std::string bytes = read_text(good);

  auto variant = [&](const std::string& name, std::string b) {
    const auto p = (dir / name).string();
    std::ofstream(p, std::ios::binary) << b;
    return p;
  };
  EXPECT_THROW(read_snapshot(variant("short.rfa", bytes.substr(0, bytes.size() - 1))), IoError);
  EXPECT_THROW(read_snapshot(variant("header.rfa", bytes.substr(0, 10))), IoError);
  EXPECT_THROW(read_snapshot(variant("long.rfa", bytes + "x")), IoError);
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(read_snapshot(variant("magic.rfa", bad)), IoError);
  bad = bytes;
  bad[4] = 2;
  EXPECT_THROW(read_snapshot(variant("version.rfa", bad)), IoError);
  EXPECT_THROW(read_snapshot((dir / "missing.rfa").string()), IoError);
  EXPECT_THROW(read_field3(good, Grid(32, 8)), IoError);
  EXPECT_THROW(read_field3(good, Grid(16, 16)), IoError);
}

TEST(Snapshot, MetaSidecar) {
  const auto dir = scratch("meta");
  const std::string p = (dir / "s.rfa").string();
  write_meta(p, {{"config_hash", "abc"}, {"time", 0.5}});
  EXPECT_TRUE(fs::exists(p + ".meta"));
  auto m = read_meta(p);
  EXPECT_EQ(m["config_hash"], "abc");
  EXPECT_EQ(m["time"], 0.5);
}

TEST(Csv, Headers) {
  const auto dir = scratch("csv");
  write_diagnostics_csv((dir / "d.csv").string(), {DiagnosticRecord(0.0)});
  std::string h = "time";
  for (const auto& n : metric_names()) h += "," + n;
  EXPECT_EQ(first_line(dir / "d.csv"), h);
  ConvergenceTable t;
  ConvergenceRow r;
  r.eps = 0.1;
  t.rows.push_back(r);
  write_convergence_csv((dir / "c.csv").string(), t);
  EXPECT_EQ(first_line(dir / "c.csv"), "eps,e_strong,e_weak,alignment,coupling,energy_final");
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  EXPECT_EQ(cli(""), 2);
  EXPECT_EQ(cli("run"), 2);
  EXPECT_EQ(cli("run " + (dir / "missing.cfg").string()), 2);
  write_text(dir / "bad.cfg", "grid.nh = 16\nsolver.nu = 0.05\nsolver.eps = -1\n");
  EXPECT_EQ(cli("run " + (dir / "bad.cfg").string()), 2);
  EXPECT_EQ(cli("--help"), 0);

  const std::string out = (dir / "out").string();
  write_text(dir / "ok.cfg", std::string(kMinimal) + "grid.n3 = 8\nsolver.dt = 0.01\nsolver.t_end = 0.02\n"
                                 "solver.snapshot_stride = 1\noutput.dir = " + out + "\n");
  EXPECT_EQ(cli("run " + (dir / "ok.cfg").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "final.rfa"));
  EXPECT_TRUE(fs::exists(dir / "out" / "final.rfa.meta"));
  EXPECT_TRUE(fs::exists(dir / "out" / "diagnostics.csv"));
  // Snapshot from a different resolution: runtime I/O error.
  write_text(dir / "other.cfg", "grid.nh = 32\nsolver.nu = 0.05\nsolver.eps = 0.1\n");
  EXPECT_EQ(cli("project " + out + "/final.rfa " + (dir / "other.cfg").string()), 3);
  EXPECT_EQ(cli("project " + out + "/final.rfa " + (dir / "ok.cfg").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "final.pi.rfa"));
  // Resume refuses snapshots from another configuration.
  write_text(dir / "ok2.cfg", std::string(kMinimal) + "grid.n3 = 8\nsolver.dt = 0.01\nsolver.t_end = 0.03\n"
                                  "output.dir = " + out + "\n");
  EXPECT_EQ(cli("run " + (dir / "ok2.cfg").string() + " --resume " + out + "/final.rfa"), 3);
}
