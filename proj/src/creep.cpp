#include "lambertcreep/creep.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace lambertcreep::creep {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvE = lw::kInvE;

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double large_u_density(double y) {
  // far-field form of rho at u = e^y
  const double a = 1.0 + y;
  return 1.0 / (a * a + kPi * kPi);
}

// I = int_{1/e}^inf rho(u) w(u) du.
// The 1/sqrt edge at 1/e is removed by u = 1/e + v^2; the mid field runs in
// log coordinates; the far field follows the tail policy. exp_rate > 0
// declares w ~ e^{-exp_rate * u}, unit_weight declares w == 1, for which the
// truncated remainder has the closed form 1 - Im W0(-U + i0)/pi.
QuadResult rho_weighted(const std::function<double(double)>& w, double exp_rate,
                        bool unit_weight, const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || !(cfg.truncation_point > 0.0)) {
    throw DomainError("spectrum quadrature: invalid configuration");
  }
  const double tol = std::clamp(std::min(cfg.abs_tol, cfg.rel_tol), 1e-15, 0.1);
  unsigned depth = 0;
  for (long n = 1; n < cfg.max_subdivisions && depth < 15; n *= 2) ++depth;
  depth = std::max(depth, 3u);

  double ucap = cfg.truncation_point;
  if (exp_rate > 0.0) ucap = std::min(ucap, std::max(kInvE + 8.0, 60.0 / exp_rate));
  if (cfg.tail_policy == tr::TailPolicy::log_substitution) {
    ucap = exp_rate > 0.0 ? std::max(kInvE + 8.0, std::min(60.0 / exp_rate, 9.5e19))
                          : 9.5e19;
  }

  QuadResult out;
  double err = 0.0;

  const double va = std::sqrt(std::max(0.0, std::min(ucap, kInvE + 4.0) - kInvE));
  const auto edge = [&w](double v) {
    const double u = kInvE + v * v;
    return 2.0 * v * rho(u) * w(u);
  };
  for (double lo = 0.0; lo < va; lo += 1.0) {
    out.value += GK::integrate(edge, lo, std::min(lo + 1.0, va), depth, tol, &err);
    out.est_error += err;
  }

  const double ya = std::log(kInvE + 4.0);
  const double yu = std::log(ucap);
  const auto mid = [&w](double y) {
    const double u = std::exp(y);
    return u * rho(u) * w(u);
  };
  for (double lo = ya; lo < yu; lo += 1.0) {
    out.value += GK::integrate(mid, lo, std::min(lo + 1.0, yu), depth, tol, &err);
    out.est_error += err;
  }

  double tail = 0.0;
  double tail_err = 0.0;
  if (ucap < 9.0e19) {
    if (unit_weight) {
      tail = 1.0 - lw::w0_cut_limit(-ucap, lw::BranchSide::above).imag() / kPi;
      tail_err = 1e-14;
    } else {
      const auto far = [&w](double y) { return w(std::exp(y)) * large_u_density(y); };
      const double yend = exp_rate > 0.0 ? std::log(60.0 / exp_rate) : yu + 40.0;
      if (yend > yu) {
        tail = GK::integrate(far, yu, yend, depth, tol, &err);
        tail_err = 0.5 * std::abs(tail) + err;  // asymptotic form is first order
      }
    }
  }
  if (cfg.tail_policy == tr::TailPolicy::none) {
    out.est_error += std::abs(tail) + tail_err;
  } else {
    out.value += tail;
    out.est_error += tail_err;
  }
  out.tolerance_met = out.est_error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  return out;
}

std::vector<double> volterra_solve(const std::function<double(double)>& rate,
                                   double t_max, int n) {
  const double h = t_max / n;
  std::vector<double> k(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) k[static_cast<size_t>(j)] = rate(j * h);
  std::vector<double> phi(static_cast<size_t>(n) + 1);
  phi[0] = 1.0;
  const double denom = 1.0 + 0.5 * h * k[0];
  for (int i = 1; i <= n; ++i) {
    double conv = 0.5 * k[static_cast<size_t>(i)];  // phi[0] == 1
    for (int j = 1; j < i; ++j) conv += k[static_cast<size_t>(j)] * phi[static_cast<size_t>(i - j)];
    phi[static_cast<size_t>(i)] = (1.0 - h * conv) / denom;
  }
  return phi;
}

}  // namespace

PsiModel lambert_psi_model() {
  PsiModel m;
  m.prime = [](double t) { return lw::w0_prime_real(t); };
  m.prime_complex = [](Complex z) {
    if (z == Complex(0.0, 0.0)) return Complex(1.0, 0.0);
    if (lw::near_branch_point(z)) return lw::w0_prime_branch_series(z);
    const Complex w = lw::w0_complex(z);
    return w / (z * (1.0 + w));
  };
  return m;
}

PsiModel linear_psi_model() {
  PsiModel m;
  m.prime = [](double) { return 1.0; };
  m.prime_complex = [](Complex) { return Complex(1.0, 0.0); };
  return m;
}

double psi(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("psi: t must be nonnegative");
  return lw::w0_real(t);
}

double psi_prime(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("psi_prime: t must be nonnegative");
  return lw::w0_prime_real(t);
}

double rho(double u) {
  if (!std::isfinite(u) || u <= 0.0) throw DomainError("rho: u must be positive");
  if (u <= kInvE) return 0.0;
  if (u - kInvE < lw::series_switch_radius) {
    return -lw::w0_prime_branch_series(-u, lw::BranchSide::above).imag() / kPi;
  }
  return -lw::w0_prime_cut_limit(-u, lw::BranchSide::above).imag() / kPi;
}

QuadResult spectrum_K(double r, const QuadratureConfig& cfg) {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("spectrum_K: r must be nonnegative");
  if (r == 0.0) return rho_weighted([](double) { return 1.0; }, 0.0, true, cfg);
  return rho_weighted([r](double u) { return std::exp(-r * u); }, r, false, cfg);
}

QuadResult spectrum_H(double tau, const QuadratureConfig& cfg) {
  if (!std::isfinite(tau) || tau <= 0.0) throw DomainError("spectrum_H: tau must be positive");
  QuadResult k = spectrum_K(1.0 / tau, cfg);
  k.value /= tau * tau;
  k.est_error /= tau * tau;
  return k;
}

QuadResult rho_over_u_integral(const QuadratureConfig& cfg) {
  return rho_weighted([](double u) { return 1.0 / u; }, 0.0, false, cfg);
}

QuadResult psi_prime_from_rho(double t, const QuadratureConfig& cfg) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("psi_prime_from_rho: t must be nonnegative");
  return rho_weighted([t](double u) { return 1.0 / (t + u); }, 0.0, false, cfg);
}

TransformFn s_psi_tilde(const PsiModel& model, const QuadratureConfig& cfg) {
  TransformFn F;
  F.domain = tr::EvalDomain::sectorial;
  F.eval = [model, cfg](Complex s) { return tr::laplace_sector(model.prime_complex, s, cfg); };
  return F;
}

PhiGrid phi_laplace(const std::vector<double>& times, const InversionConfig& inv_cfg,
                    const QuadratureConfig& quad_cfg, const PsiModel& model) {
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw DomainError("phi_laplace: times must be nonnegative and nondecreasing");
    }
  }
  const TransformFn spt = s_psi_tilde(model, quad_cfg);
  TransformFn F;
  F.domain = tr::EvalDomain::sectorial;
  F.eval = [spt](Complex s) { return 1.0 / (s * (1.0 + spt.eval(s))); };

  PhiGrid grid;
  grid.route = PhiRoute::laplace_inversion;
  grid.times = times;
  grid.values.resize(times.size());
  grid.unstable.assign(times.size(), 0);
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] == 0.0) {
      grid.values[i] = 1.0;
    } else {
      const auto r = tr::invert_laplace_checked(F, times[i], inv_cfg);
      grid.values[i] = r.value;
      grid.unstable[i] = r.unstable ? 1 : 0;
    }
  }
  return grid;
}

PhiGrid phi_volterra(double t_max, int steps, const PsiModel& model) {
  if (!std::isfinite(t_max) || t_max <= 0.0) throw DomainError("phi_volterra: t_max must be positive");
  if (steps < 2 || steps > 32768) throw DomainError("phi_volterra: steps must lie in [2, 32768]");

  const double h_user = t_max / steps;
  int m = std::max(2, static_cast<int>(std::ceil(h_user / 0.0125)));
  while (2L * m * steps > 65536 && m > 1) m /= 2;

  const std::vector<double> coarse = volterra_solve(model.prime, t_max, m * steps);
  const std::vector<double> fine = volterra_solve(model.prime, t_max, 2 * m * steps);

  PhiGrid grid;
  grid.route = PhiRoute::volterra_time_domain;
  grid.times.resize(static_cast<size_t>(steps) + 1);
  grid.values.resize(static_cast<size_t>(steps) + 1);
  double diff = 0.0;
  for (int i = 0; i <= steps; ++i) {
    grid.times[static_cast<size_t>(i)] = t_max * i / steps;
    grid.values[static_cast<size_t>(i)] = fine[static_cast<size_t>(2 * m * i)];
    diff = std::max(diff, std::abs(fine[static_cast<size_t>(2 * m * i)] -
                                   coarse[static_cast<size_t>(m * i)]));
  }
  grid.step_warning = diff > 1e-4;
  return grid;
}

double creep_compliance(const CreepModel& model, double t) {
  if (!(model.J0 > 0.0) || !(model.q > 0.0)) throw DomainError("creep_compliance: J0 and q must be positive");
  return model.J0 * (1.0 + model.q * psi(t));
}

double relaxation_modulus(const CreepModel& model, double t) {
  if (!(model.J0 > 0.0) || !(model.q > 0.0)) throw DomainError("relaxation_modulus: J0 and q must be positive");
  if (!std::isfinite(t) || t < 0.0) throw DomainError("relaxation_modulus: t must be nonnegative");
  if (t == 0.0) return model.G0();
  const TransformFn spt = s_psi_tilde();
  const double q = model.q;
  TransformFn F;
  F.domain = tr::EvalDomain::sectorial;
  F.eval = [spt, q](Complex s) { return 1.0 / (s * (1.0 + q * spt.eval(s))); };
  return model.G0() * tr::invert_laplace(F, t);
}

}  // namespace lambertcreep::creep
