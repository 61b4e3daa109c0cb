#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lambertcreep/creep.hpp"

namespace lambertcreep::val {

struct Violation {
  int order = 0;
  double point = 0.0;
  double value = 0.0;
};

/// Outcome of a complete-monotonicity (or Bernstein) audit over uniform
/// samples. A pass means no sign violation beyond noise_floor at any
/// difference order up to max_order.
struct MonotonicityAudit {
  std::string function_id;
  std::vector<double> grid;
  int max_order = 6;
  double noise_floor = 0.0;
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
};

std::vector<double> uniform_grid(double a, double b, int n);

/// Audits (-1)^k Delta^k f >= 0 for k = 0..max_order over a strictly
/// increasing uniform grid. A violation is recorded when the signed k-th
/// forward difference drops below -noise_floor. max_order is capped at 8;
/// beyond that the differences are round-off dominated at any usable step.
MonotonicityAudit check_cm(const std::function<double(double)>& f,
                           const std::vector<double>& grid, int max_order = 6,
                           double noise_floor = 1e-8,
                           const std::string& function_id = "f");

/// Audits the Bernstein property: f >= 0 on the grid and the first
/// difference quotient of f is completely monotone. Violation orders refer
/// to differences of f itself (order k audits the k-th derivative sign).
MonotonicityAudit check_bernstein(const std::function<double(double)>& f,
                                  const std::vector<double>& grid,
                                  int max_order = 6, double noise_floor = 1e-8,
                                  const std::string& function_id = "f");

/// One audited identity. `anchor` states the identity itself; `provenance`
/// names the numerical route that produced `computed`.
struct Check {
  std::string name;
  std::string anchor;
  std::string provenance;
  double computed = 0.0;
  double target = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool all_pass() const;
  /// One line per check plus a trailing summary line.
  std::string to_text() const;
  /// {"checks":[{name,anchor,computed,target,tol,pass}...],
  ///  "provenance":{name:route...}, "all_pass":bool}
  std::string to_json() const;
};

struct SuiteConfig {
  tr::QuadratureConfig quad;
  tr::InversionConfig inversion;
  int max_order = 6;
  /// Cross-route comparison window [0, phi_t_max] with phi_steps intervals.
  double phi_t_max = 10.0;
  int phi_steps = 200;
  /// Per-check tolerance replacements keyed by check name.
  std::map<std::string, double> tolerance_overrides;
};

/// Runs every structural audit: integral identities, limit probes, the
/// spectral round trip, cross-route relaxation agreement, the analytic
/// pipeline oracle, and the monotonicity audits. Individual failures do
/// not abort the suite.
ValidationReport run_identity_suite(const SuiteConfig& cfg = {});

}  // namespace lambertcreep::val
