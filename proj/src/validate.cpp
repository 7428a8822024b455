#include "rotasym/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rotasym/diagnostics.hpp"
#include "rotasym/initial_data.hpp"
#include "rotasym/rotation.hpp"
#include "rotasym/spectral.hpp"
#include "rotasym/stepper.hpp"

namespace rotasym {
namespace {

constexpr double kAlgebraTol = 1e-8;  // geometric solver tolerance for Π identities
constexpr double kLeraytol = 1e-12;

struct Collector {
  const ValidateOptions& o;
  std::vector<CheckResult> out;

  // value ≤ limit passes
  void add(std::string group, std::string name, double value, double limit, std::string detail = {}) {
    CheckResult r{std::move(group), std::move(name), value, limit, value <= limit, std::move(detail)};
    if (o.log) *o.log << format_check(r) << std::endl;
    out.push_back(std::move(r));
  }
  // value ≥ limit passes
  void add_min(std::string group, std::string name, double value, double limit, std::string detail = {}) {
    CheckResult r{std::move(group), std::move(name), value, limit, value >= limit, std::move(detail)};
    if (o.log) *o.log << format_check(r) << std::endl;
    out.push_back(std::move(r));
  }
};

// Random fields are drawn with a fixed band so the same seed gives the same
// continuum field on every grid.
Field3 sample(const Grid& g, std::uint64_t seed) {
  return random_divergence_free(g, RandomSpectrum{.seed = seed, .slope = -2.0, .band = 8});
}

double rel(double a, double scale) { return scale > 0.0 ? std::abs(a) / scale : std::abs(a); }

}  // namespace

std::vector<CheckResult> check_operator_algebra(const ValidateOptions& o) {
  Collector c{o, {}};
  const Grid g(o.nh, o.n3);
  const auto prof = RotationProfile::radial(g, o.profile);
  const KernelProjector proj(prof);

  double p_idem = 0, p_adj = 0, p_norm = 0;
  double q_idem = 0, q_adj = 0, q_norm = 0, q_orth = 0;
  double skew = 0, lpi = 0;
  for (int i = 0; i < o.fields; ++i) {
    const std::uint64_t s = o.seed + 2 * std::uint64_t(i);
    // non-solenoidal inputs for P, solenoidal for Π and L
    Field3 a = sample(g, s), b = sample(g, s + 1);
    Field3 raw = a + 0.5 * partial(b, 0);
    Field3 raw2 = b + 0.5 * partial(a, 2);
    const double na = norm(raw), nb = norm(raw2);
    Field3 pa = leray_project(raw), pb = leray_project(raw2);
    p_idem = std::max(p_idem, norm(leray_project(pa) - pa) / na);
    p_adj = std::max(p_adj, rel(inner(pa, raw2) - inner(raw, pb), na * nb));
    p_norm = std::max(p_norm, norm(pa) / na - 1.0);

    const double ua = norm(a), ub = norm(b);
    Field3 qa = proj.apply(a), qb = proj.apply(b);
    q_idem = std::max(q_idem, norm(proj.apply(qa) - qa) / ua);
    q_adj = std::max(q_adj, rel(inner(qa, b) - inner(a, qb), ua * ub));
    q_norm = std::max(q_norm, norm(qa) / ua - 1.0);
    q_orth = std::max(q_orth, rel(inner(a - qa, qa), ua * ua));
    skew = std::max(skew, rel(inner(apply_L(a, prof), a), ua * ua));
    lpi = std::max(lpi, norm(apply_L(qa, prof)) / ua);
  }
  const std::string n = std::to_string(o.fields) + " fields";
  c.add("algebra", "P idempotent", p_idem, kLeraytol, n);
  c.add("algebra", "P self-adjoint", p_adj, kLeraytol, n);
  c.add("algebra", "P norm-nonincreasing (excess)", p_norm, kLeraytol, n);
  c.add("algebra", "Pi idempotent", q_idem, kAlgebraTol, n);
  c.add("algebra", "Pi self-adjoint", q_adj, kAlgebraTol, n);
  c.add("algebra", "Pi norm-nonincreasing (excess)", q_norm, kAlgebraTol, n);
  c.add("algebra", "Pi orthogonal <u-Pi u, Pi u>", q_orth, kAlgebraTol, n);
  c.add("algebra", "<Lu,u>/|u|^2", skew, 1e-12, n);
  c.add("algebra", "|L Pi u|/|u|", lpi, 5e-3, n + " (max)");

  // Refinement: same continuum fields on the doubled grid.
  const Grid g2(2 * o.nh, o.n3);
  const auto prof2 = RotationProfile::radial(g2, o.profile);
  const KernelProjector proj2(prof2);
  double s1 = 0, s2 = 0;
  for (int i = 0; i < o.refine_fields; ++i) {
    const std::uint64_t s = o.seed + 2 * std::uint64_t(i);
    const Field3 a = sample(g, s), a2 = sample(g2, s);
    s1 += norm(apply_L(proj.apply(a), prof)) / norm(a);
    s2 += norm(apply_L(proj2.apply(a2), prof2)) / norm(a2);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "mean %.3e at n_h=%d, %.3e at n_h=%d", s1 / o.refine_fields, o.nh,
                s2 / o.refine_fields, 2 * o.nh);
  c.add_min("algebra", "|L Pi u| refinement ratio", s2 > 0 ? s1 / s2 : 1e300, 1.5, buf);
  return c.out;
}

std::vector<CheckResult> check_projector_oracle(const ValidateOptions& o) {
  Collector c{o, {}};
  const Grid g(o.nh, o.n3);
  const auto prof = RotationProfile::radial(g, o.profile);
  const KernelProjector proj(prof);
  const double T = 200.0 / o.profile.b0;
  // horizons must be multiples of dt
  const double dt = T / std::round(T / o.ergodic_dt);
  double gap1 = 0, gap2 = 0;
  for (int i = 0; i < o.ergodic_fields; ++i) {
    const Field3 u = sample(g, o.seed + 1000 + std::uint64_t(i));
    const Field3 pg = proj.apply(u);
    const auto avg = kernel_project_ergodic(u, prof, {T, 2 * T}, dt);
    gap1 = std::max(gap1, norm(pg - avg[0]) / norm(u));
    gap2 = std::max(gap2, norm(pg - avg[1]) / norm(u));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "T=%g dt=%g, gap(2T)=%.3e", T, dt, gap2);
  c.add("ergodic", "|Pi_geo u - Pi_erg(T) u|/|u|", gap1, 1e-2, buf);
  c.add_min("ergodic", "gap(T)/gap(2T)", gap2 > 0 ? gap1 / gap2 : 1e300, 2.0);
  return c.out;
}

std::vector<CheckResult> check_rotational_identity(const ValidateOptions& o) {
  Collector c{o, {}};
  const Grid g(o.nh, o.n3);
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    Field3 u = dealias(random_divergence_free(g, RandomSpectrum{.seed = o.seed + 77 + std::uint64_t(i)}));
    worst = std::max(worst, rotational_identity_residual(u, true));
  }
  c.add("identity", "rotational form residual (dealiased)", worst, 1e-10, "10 fields");
  return c.out;
}

std::vector<CheckResult> check_energy(const ValidateOptions& o) {
  Collector c{o, {}};
  const Grid g(o.nh, o.n3);
  const auto prof = RotationProfile::radial(g, o.profile);

  SolverConfig cfg;
  cfg.nu = o.nu;
  cfg.eps = 0.1;
  cfg.dt = 2e-3;
  cfg.t_end = 0.2;
  cfg.snapshot_stride = 1000;
  const Field3 u0 = random_divergence_free(g, RandomSpectrum{.seed = o.seed});
  const Trajectory tr = run_rotating_ns(u0, cfg, prof);
  double budget = -1e300, rise = 0;
  const double e0 = *tr.records().front().get(Metric::energy);
  double prev = e0;
  for (const auto& r : tr.records()) {
    budget = std::max(budget, *r.get(Metric::energy_budget));
    const double e = *r.get(Metric::energy);
    rise = std::max(rise, (e - prev) / e0);
    prev = e;
  }
  c.add("energy", "(E + 2 nu sum dt |grad u|^2)/E0 - 1", budget, 1e-5,
        std::to_string(tr.records().size() - 1) + " steps");
  c.add("energy", "per-step energy increase / E0", rise, 1e-6);

  Field3 v = random_divergence_free(g, RandomSpectrum{.seed = o.seed + 5});
  const double ev = inner(v, v);
  double drift = 0;
  for (int k = 0; k < 1000; ++k) {
    v = step_rotation_group(v, 0.01, 0.1, prof);
    drift = std::max(drift, std::abs(inner(v, v) - ev) / ev);
  }
  c.add("energy", "rotation group energy drift (1000 steps)", drift, 1e-10);
  return c.out;
}

std::vector<CheckResult> run_validation(const ValidateOptions& o) {
  std::vector<CheckResult> all;
  for (auto f : {check_operator_algebra, check_projector_oracle, check_rotational_identity, check_energy}) {
    auto r = f(o);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

bool all_passed(const std::vector<CheckResult>& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.passed; });
}

std::string format_check(const CheckResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s [%s] %s: %.3e (limit %.1e)", r.passed ? "PASS" : "FAIL", r.group.c_str(),
                r.name.c_str(), r.value, r.limit);
  std::string s = buf;
  if (!r.detail.empty()) s += " — " + r.detail;
  return s;
}

}  // namespace rotasym
