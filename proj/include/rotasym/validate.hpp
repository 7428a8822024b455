#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rotasym/profile.hpp"

namespace rotasym {

struct CheckResult {
  std::string group;  // "algebra", "ergodic", "identity", "energy"
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

struct ValidateOptions {
  int nh = 32;
  int n3 = 16;
  RadialParams profile{.b0 = 1.0, .amplitude = 0.5, .radius = 1.5};
  int fields = 100;        // random fields for the projector algebra
  int refine_fields = 8;   // fields used for the n_h -> 2 n_h kernel-consistency ratio
  int ergodic_fields = 2;
  double ergodic_dt = 0.25;
  double nu = 0.05;
  std::uint64_t seed = 1;
  std::ostream* log = nullptr;  // one line per check as it completes
};

// Projector algebra (P, Π, L) at n_h and the ‖LΠu‖ refinement ratio at 2 n_h.
std::vector<CheckResult> check_operator_algebra(const ValidateOptions& o);
// Geometric Π against the time average of the rotation group at T and 2T.
std::vector<CheckResult> check_projector_oracle(const ValidateOptions& o);
// Rotational-form advection identity on dealiased fields.
std::vector<CheckResult> check_rotational_identity(const ValidateOptions& o);
// Energy budget of a short NS run; energy conservation of the rotation group.
std::vector<CheckResult> check_energy(const ValidateOptions& o);

std::vector<CheckResult> run_validation(const ValidateOptions& o);
bool all_passed(const std::vector<CheckResult>& r);
std::string format_check(const CheckResult& r);

}  // namespace rotasym
