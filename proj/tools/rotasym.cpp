// rotasym command-line driver: run, limit, project, convergence, validate.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotasym/config.hpp"
#include "rotasym/diagnostics.hpp"
#include "rotasym/errors.hpp"
#include "rotasym/fft.hpp"
#include "rotasym/initial_data.hpp"
#include "rotasym/rotation.hpp"
#include "rotasym/snapshot.hpp"
#include "rotasym/stepper.hpp"
#include "rotasym/validate.hpp"

namespace fs = std::filesystem;
using namespace rotasym;

namespace {

enum Exit { kOk = 0, kConfig = 2, kRuntime = 3, kValidation = 4 };

std::string hex_hash(const RunConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

RotationProfile make_profile(const RunConfig& cfg, const Grid& g) {
  return cfg.profile.amplitude == 0.0 ? RotationProfile::constant(g, cfg.profile.b0, cfg.profile.n_bins)
                                      : RotationProfile::radial(g, cfg.profile);
}

Field3 make_initial(const RunConfig& cfg, const Grid& g) {
  const auto& in = cfg.initial;
  switch (in.kind) {
    case InitialSpec::Kind::taylor_green:
      return taylor_green(g, in.amplitude);
    case InitialSpec::Kind::file:
      return read_field3(in.path, g);
    case InitialSpec::Kind::random_spectrum:
      break;
  }
  return in.amplitude * random_divergence_free(g, RandomSpectrum{.seed = in.seed, .slope = in.slope, .band = in.band});
}

nlohmann::json meta_for(const RunConfig& cfg, double t, const std::string& kind) {
  const auto& p = cfg.profile;
  return {{"config_hash", hex_hash(cfg)},
          {"kind", kind},
          {"time", t},
          {"grid", {cfg.nh, cfg.nh, cfg.n3}},
          {"profile",
           {{"b0", p.b0},
            {"amplitude", p.amplitude},
            {"radius", p.radius},
            {"center", {p.center_x, p.center_y}},
            {"n_bins", p.n_bins},
            {"tol_grad", p.tol_grad}}}};
}

void save(const fs::path& path, const Field3& u, double t, const nlohmann::json& meta) {
  write_snapshot(path.string(), u, t);
  write_meta(path.string(), meta);
}

std::string snap_name(const std::string& prefix, double t, double dt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%08ld.rfa", prefix.c_str(), std::lround(t / dt));
  return buf;
}

int cmd_run(const RunConfig& cfg, const std::string& resume) {
  const Grid g(cfg.nh, cfg.n3);
  const auto prof = make_profile(cfg, g);
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);

  RunOptions opts;
  opts.log = &std::cerr;
  Field3 u0(g);
  if (!resume.empty()) {
    const auto meta = read_meta(resume);
    if (meta.value("config_hash", std::string()) != hex_hash(cfg))
      throw IoError("resume: snapshot '" + resume + "' was produced by a different configuration");
    u0 = read_field3(resume, g, &opts.t_start);
    opts.resume = true;
  } else {
    u0 = make_initial(cfg, g);
  }
  opts.on_snapshot = [&](double t, const Field3& u) {
    save(dir / snap_name("snap", t, cfg.solver.dt), u, t, meta_for(cfg, t, "ns"));
  };
  const Trajectory tr = run_rotating_ns(u0, cfg.solver, prof, opts);
  write_diagnostics_csv((dir / "diagnostics.csv").string(), tr.records());
  save(dir / "final.rfa", tr.final_state(), tr.final_time(), meta_for(cfg, tr.final_time(), "ns"));
  std::cout << "run: t=" << tr.final_time() << " energy=" << inner(tr.final_state(), tr.final_state())
            << " output=" << dir.string() << '\n';
  return kOk;
}

int cmd_limit(const RunConfig& cfg) {
  const Grid g(cfg.nh, cfg.n3);
  const auto prof = make_profile(cfg, g);
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  RunOptions opts;
  opts.log = &std::cerr;
  opts.on_snapshot = [&](double t, const Field3& u) {
    save(dir / snap_name("limit", t, cfg.solver.dt), u, t, meta_for(cfg, t, "limit"));
  };
  const KernelProjector proj(prof);
  const Trajectory tr = run_limit_system(make_initial(cfg, g), cfg.solver, prof, &proj, opts);
  write_diagnostics_csv((dir / "limit_diagnostics.csv").string(), tr.records());
  save(dir / "limit_final.rfa", tr.final_state(), tr.final_time(), meta_for(cfg, tr.final_time(), "limit"));
  std::cout << "limit: t=" << tr.final_time() << " energy=" << inner(tr.final_state(), tr.final_state()) << '\n';
  return kOk;
}

int cmd_project(const RunConfig& cfg, const std::string& snapshot, const std::vector<double>& ergodic,
                std::string out) {
  const Grid g(cfg.nh, cfg.n3);
  const auto prof = make_profile(cfg, g);
  double t = 0.0;
  const Field3 u = read_field3(snapshot, g, &t);
  Field3 p(g);
  std::string method = "geometric";
  if (!ergodic.empty()) {
    p = kernel_project_ergodic(u, prof, ergodic[0], ergodic[1]);
    method = "ergodic";
  } else {
    p = KernelProjector(prof).apply(u);
  }
  const double kr = kernel_residual(p, prof);
  if (out.empty()) out = fs::path(snapshot).replace_extension(".pi.rfa").string();
  auto meta = meta_for(cfg, t, "projection");
  meta["method"] = method;
  meta["kernel_residual"] = kr;
  meta["source"] = snapshot;
  if (!ergodic.empty()) meta["ergodic"] = {{"T", ergodic[0]}, {"dt", ergodic[1]}};
  save(out, p, t, meta);
  std::printf("kernel_residual=%.6e method=%s output=%s\n", kr, method.c_str(), out.c_str());
  return kOk;
}

int cmd_convergence(const RunConfig& cfg) {
  const Grid g(cfg.nh, cfg.n3);
  const auto prof = make_profile(cfg, g);
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  const auto eps = cfg.eps_list.empty() ? std::vector<double>{cfg.solver.eps} : cfg.eps_list;
  const auto table = convergence_study(eps, cfg.solver, prof, make_initial(cfg, g), &std::cerr);
  write_convergence_csv((dir / "convergence.csv").string(), table);
  write_convergence_detail_csv((dir / "convergence_detail.csv").string(), table);
  for (const auto& r : table.rows) {
    if (r.failed)
      std::printf("eps=%g FAILED: %s\n", r.eps, r.error.c_str());
    else
      std::printf("eps=%g e_strong=%.4e e_weak=%.4e alignment=%.4e coupling=%.4e\n", r.eps, r.e_strong, r.e_weak,
                  r.alignment, r.coupling);
  }
  const bool any_failed = std::any_of(table.rows.begin(), table.rows.end(), [](auto& r) { return r.failed; });
  return any_failed ? kRuntime : kOk;
}

int cmd_validate(const RunConfig& cfg) {
  ValidateOptions o;
  o.nh = cfg.nh;
  o.n3 = cfg.n3;
  o.nu = cfg.solver.nu;
  o.seed = cfg.initial.seed;
  // A constant profile makes Π a vertical average; the suite needs a variable one.
  if (cfg.profile.amplitude != 0.0)
    o.profile = cfg.profile;
  else
    o.profile = RadialParams{.b0 = cfg.profile.b0, .amplitude = 0.5 * cfg.profile.b0, .radius = 1.5};
  o.log = &std::cout;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_validation(o);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = all_passed(res);
  std::printf("validate: %s (%zu checks, %.1f s)\n", ok ? "PASS" : "FAIL", res.size(), secs);
  return ok ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotasym: rotating Navier-Stokes with variable rotation axis"};
  app.require_subcommand(1);
  app.footer("Config keys (key = value):\n" + config_reference() +
             "\nExit codes: 0 ok, 2 config error, 3 runtime error, 4 validation failure.\n"
             "ROTASYM_THREADS sets the FFT thread count.");

  std::string config_path, snapshot, resume, out;
  std::vector<double> ergodic;

  auto* run = app.add_subcommand("run", "Rotating NS simulation; writes snapshots and diagnostics.csv");
  run->add_option("config", config_path)->required();
  run->add_option("--resume", resume, "Continue from a snapshot written by the same configuration");
  auto* limit = app.add_subcommand("limit", "Integrate the limit system");
  limit->add_option("config", config_path)->required();
  auto* project = app.add_subcommand("project", "Apply the kernel projector to a snapshot");
  project->add_option("snapshot", snapshot)->required();
  project->add_option("config", config_path)->required();
  project->add_option("--ergodic", ergodic, "Time-average oracle: T dt")->expected(2);
  project->add_option("-o,--output", out, "Output snapshot (default <snapshot>.pi.rfa)");
  auto* conv = app.add_subcommand("convergence", "Epsilon sweep; writes convergence.csv");
  conv->add_option("config", config_path)->required();
  auto* val = app.add_subcommand("validate", "Invariant suite; nonzero exit on failure");
  val->add_option("config", config_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    if (*run) return cmd_run(cfg, resume);
    if (*limit) return cmd_limit(cfg);
    if (*project) return cmd_project(cfg, snapshot, ergodic, out);
    if (*conv) return cmd_convergence(cfg);
    if (*val) return cmd_validate(cfg);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
