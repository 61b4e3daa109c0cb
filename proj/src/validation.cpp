#include "lambertcreep/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "json.hpp"
#include "lambertcreep/lambertw.hpp"

namespace lambertcreep::val {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_uniform(const std::vector<double>& grid, int max_order) {
  if (max_order < 1 || max_order > 8) {
    throw GridError("check_cm: max_order must lie in [1, 8]");
  }
  if (static_cast<int>(grid.size()) < max_order + 2) {
    throw GridError("check_cm: grid too coarse for the requested order");
  }
  const double h = grid[1] - grid[0];
  if (!(h > 0.0)) throw GridError("check_cm: grid must be strictly increasing");
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double step = grid[i + 1] - grid[i];
    if (!(step > 0.0)) {
      throw GridError("check_cm: grid must be strictly increasing");
    }
    if (std::abs(step - h) > 1e-9 * h) {
      throw GridError("check_cm: grid must be uniform");
    }
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::vector<double> uniform_grid(double a, double b, int n) {
  if (n < 2 || !(b > a)) throw GridError("uniform_grid: need n >= 2 and b > a");
  std::vector<double> g(n);
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = a + h * i;
  return g;
}

MonotonicityAudit check_cm(const std::function<double(double)>& f,
                           const std::vector<double>& grid, int max_order,
                           double noise_floor,
                           const std::string& function_id) {
  require_uniform(grid, max_order);
  MonotonicityAudit audit{function_id, grid, max_order, noise_floor, {}};
  std::vector<double> diff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = f(grid[i]);
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i] < -noise_floor) {
      audit.violations.push_back({0, grid[i], diff[i]});
    }
  }
  for (int k = 1; k <= max_order; ++k) {
    const std::size_t m = grid.size() - k;
    for (std::size_t i = 0; i < m; ++i) diff[i] = diff[i + 1] - diff[i];
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (sign * diff[i] < -noise_floor) {
        audit.violations.push_back({k, grid[i], diff[i]});
      }
    }
  }
  return audit;
}

MonotonicityAudit check_bernstein(const std::function<double(double)>& f,
                                  const std::vector<double>& grid,
                                  int max_order, double noise_floor,
                                  const std::string& function_id) {
  require_uniform(grid, max_order);
  MonotonicityAudit audit{function_id, grid, max_order, noise_floor, {}};
  std::vector<double> samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = f(grid[i]);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < -noise_floor) {
      audit.violations.push_back({0, grid[i], samples[i]});
    }
  }
  // first difference quotient, audited as a CM function in its own right;
  // its order-k differences stand in for the (k+1)-th derivative of f
  const double h = grid[1] - grid[0];
  std::vector<double> qgrid(grid.begin(), grid.end() - 1);
  std::vector<double> quotient(qgrid.size());
  for (std::size_t i = 0; i < qgrid.size(); ++i) {
    quotient[i] = (samples[i + 1] - samples[i]) / h;
  }
  std::size_t idx = 0;
  auto eval = [&](double) { return quotient[idx++]; };
  const MonotonicityAudit inner =
      check_cm(eval, qgrid, max_order - 1, noise_floor, function_id);
  for (const Violation& v : inner.violations) {
    audit.violations.push_back({v.order + 1, v.point, v.value});
  }
  return audit;
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

std::string ValidationReport::to_text() const {
  std::string out;
  int passed = 0;
  for (const Check& c : checks) {
    passed += c.pass ? 1 : 0;
    out += c.pass ? "PASS " : "FAIL ";
    out += c.name + " | " + c.anchor + " | computed=" + fmt(c.computed) +
           " target=" + fmt(c.target) + " tol=" + fmt(c.tol) + " | " +
           c.provenance + "\n";
  }
  out += "SUITE ";
  out += (passed == static_cast<int>(checks.size())) ? "PASS " : "FAIL ";
  out += std::to_string(passed) + "/" + std::to_string(checks.size()) + "\n";
  return out;
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["checks"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json prov;
  for (const Check& c : checks) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["anchor"] = c.anchor;
    item["computed"] = c.computed;
    item["target"] = c.target;
    item["tol"] = c.tol;
    item["pass"] = c.pass;
    doc["checks"].push_back(std::move(item));
    prov[c.name] = c.provenance;
  }
  doc["provenance"] = std::move(prov);
  doc["all_pass"] = all_pass();
  return doc.dump(2);
}

namespace {

enum class PassRule { within_tol, at_least_target };

class SuiteBuilder {
 public:
  explicit SuiteBuilder(const SuiteConfig& cfg) : cfg_(cfg) {}

  void add(std::string name, std::string anchor, std::string provenance,
           double computed, double target, double default_tol,
           PassRule rule = PassRule::within_tol) {
    Check c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.provenance = std::move(provenance);
    c.computed = computed;
    c.target = target;
    const auto it = cfg_.tolerance_overrides.find(c.name);
    c.tol = (it != cfg_.tolerance_overrides.end()) ? it->second : default_tol;
    c.pass = (rule == PassRule::within_tol)
                 ? std::abs(computed - target) <= c.tol
                 : computed >= target;
    report_.checks.push_back(std::move(c));
  }

  ValidationReport take() { return std::move(report_); }

 private:
  const SuiteConfig& cfg_;
  ValidationReport report_;
};

}  // namespace

ValidationReport run_identity_suite(const SuiteConfig& cfg) {
  SuiteBuilder suite(cfg);

  suite.add("rho_integral", "int_0^inf rho(u) du = 1",
            "weighted rho quadrature with the exact tail mass from the cut "
            "limit of W0",
            creep::spectrum_K(0.0, cfg.quad).value, 1.0, 1e-4);

  suite.add("rho_over_u_integral", "int_0^inf rho(u)/u du = 1",
            "weighted rho quadrature in log tail coordinates",
            creep::rho_over_u_integral(cfg.quad).value, 1.0, 1e-4);

  suite.add("K_at_zero", "K(0) = 1", "spectrum_K evaluated at r = 0",
            creep::spectrum_K(0.0).value, 1.0, 1e-4);

  suite.add("psi_prime_at_zero", "psi'(0) = 1", "closed form W0'(0)",
            creep::psi_prime(0.0), 1.0, 1e-12);

  {
    const auto g = creep::phi_laplace({1e-6}, cfg.inversion, cfg.quad);
    suite.add("phi_at_zero", "phi(0) = 1",
              "contour inversion needs t > 0; probed at t = 1e-6",
              g.values.at(0), 1.0, 1e-4);
  }

  suite.add("im_w0_cut_limit", "Im W0(-t + i0) -> pi as t -> inf",
            "cut-limit solve at t = 1e6",
            lw::w0_cut_limit(-1e6, lw::BranchSide::above).imag(), kPi, 0.25);

  {
    double sup = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
      const double t =
          0.05 * std::pow(20.0 / 0.05, static_cast<double>(i) / (n - 1));
      sup = std::max(sup, std::abs(creep::psi_prime_from_rho(t, cfg.quad).value -
                                   creep::psi_prime(t)));
    }
    suite.add("spectral_roundtrip",
              "sup_t |psi'(t) - int_0^inf rho(u)/(t+u) du| = 0 on [0.05, 20]",
              "Stieltjes reconstruction on 200 log-spaced points; the 1e-3 "
              "gate is this repository's calibration of 'small enough'",
              sup, 0.0, 1e-3);
  }

  {
    const auto volt = creep::phi_volterra(cfg.phi_t_max, cfg.phi_steps);
    const auto lap = creep::phi_laplace(volt.times, cfg.inversion, cfg.quad);
    double sup = 0.0;
    for (std::size_t i = 0; i < volt.times.size(); ++i) {
      sup = std::max(sup, std::abs(lap.values[i] - volt.values[i]));
    }
    suite.add("phi_cross_route",
              "sup_t |phi_laplace(t) - phi_volterra(t)| = 0 on [0, 10]",
              "Talbot inversion vs product-trapezoidal Volterra on a shared "
              "uniform grid",
              sup, 0.0, 1e-4);
  }

  {
    const auto model = creep::linear_psi_model();
    std::vector<double> times;
    for (int i = 1; i <= 40; ++i) times.push_back(0.25 * i);
    const auto g = creep::phi_laplace(times, cfg.inversion, cfg.quad, model);
    double sup = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      sup = std::max(sup, std::abs(g.values[i] - std::exp(-times[i])));
    }
    suite.add("linear_model_pipeline", "psi(t) = t implies phi(t) = exp(-t)",
              "full transform pipeline on the analytic test model",
              sup, 0.0, 1e-6);
  }

  tr::QuadratureConfig tight = cfg.quad;
  tight.abs_tol = std::min(tight.abs_tol, 1e-12);
  tight.rel_tol = std::min(tight.rel_tol, 1e-11);

  const auto psi_grid = uniform_grid(0.1, 6.4, 64);
  const auto kh_grid = uniform_grid(0.1, 20.0, 64);

  {
    const auto audit = check_bernstein([](double t) { return creep::psi(t); },
                                       psi_grid, cfg.max_order, 1e-10, "psi");
    suite.add("psi_bernstein", "psi is a Bernstein function",
              "forward-difference audit, 64-point uniform grid on [0.1, 6.4]; "
              "computed counts violations",
              static_cast<double>(audit.violations.size()), 0.0, 0.0);
  }
  {
    const auto audit =
        check_cm([](double t) { return creep::psi_prime(t); }, psi_grid,
                 cfg.max_order, 1e-10, "psi_prime");
    suite.add("psi_prime_cm", "psi' is completely monotone",
              "forward-difference audit, 64-point uniform grid on [0.1, 6.4]; "
              "computed counts violations",
              static_cast<double>(audit.violations.size()), 0.0, 0.0);
  }
  {
    const auto audit = check_cm(
        [&tight](double r) { return creep::spectrum_K(r, tight).value; },
        kh_grid, cfg.max_order, 1e-8, "K");
    suite.add("K_cm", "K is completely monotone",
              "forward-difference audit, 64-point uniform grid on [0.1, 20]; "
              "computed counts violations",
              static_cast<double>(audit.violations.size()), 0.0, 0.0);
  }
  {
    const auto audit = check_cm(
        [&tight](double tau) { return creep::spectrum_H(tau, tight).value; },
        kh_grid, cfg.max_order, 1e-8, "H");
    suite.add("H_not_cm", "H is not completely monotone",
              "forward-difference audit, 64-point uniform grid on [0.1, 20]; "
              "pass requires at least one violation at order <= max_order",
              static_cast<double>(audit.violations.size()), 1.0, 0.0,
              PassRule::at_least_target);
  }
  {
    const auto audit = check_cm([](double t) { return std::exp(-t); },
                                psi_grid, cfg.max_order, 1e-12, "exp(-t)");
    suite.add("canonical_cm_exp", "exp(-t) is completely monotone",
              "noise-floor control on a canonical CM function",
              static_cast<double>(audit.violations.size()), 0.0, 0.0);
  }
  {
    const auto audit = check_cm([](double t) { return 1.0 / (1.0 + t); },
                                psi_grid, cfg.max_order, 1e-12, "1/(1+t)");
    suite.add("canonical_cm_rational", "1/(1+t) is completely monotone",
              "noise-floor control on a canonical CM function",
              static_cast<double>(audit.violations.size()), 0.0, 0.0);
  }

  return suite.take();
}

}  // namespace lambertcreep::val
