#include "lambertcreep/transforms.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace lambertcreep::tr {

namespace {

constexpr double kPi = 3.14159265358979323846;

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

unsigned gk_depth(const QuadratureConfig& cfg) {
  if (cfg.max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be >= 1");
  unsigned depth = 0;
  long n = 1;
  while (n < cfg.max_subdivisions && depth < 15) {
    n *= 2;
    ++depth;
  }
  return std::max(depth, 3u);
}

double gk_tol(const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
    throw DomainError("quadrature: tolerances must be positive");
  }
  return std::clamp(std::min(cfg.abs_tol, cfg.rel_tol), 1e-15, 0.1);
}

template <typename F>
auto gk_panel(const F& f, double a, double b, const QuadratureConfig& cfg, double* err) {
  return GK::integrate(f, a, b, gk_depth(cfg), gk_tol(cfg), err);
}

// Dyadic panel edges 0, w, 2w, 4w, ... capped at xmax.
std::vector<double> dyadic_edges(double w, double xmax) {
  std::vector<double> e{0.0, w};
  while (e.back() < xmax) e.push_back(std::min(2.0 * e.back(), xmax));
  return e;
}

void check_s_positive(double s, const char* who) {
  if (!std::isfinite(s) || s <= 0.0) throw DomainError(std::string(who) + ": s must be positive and finite");
}

std::vector<long double> gs_weights(int n) {
  const int m = n / 2;
  std::array<long double, 21> fact{};
  fact[0] = 1.0L;
  for (int i = 1; i <= 20; ++i) fact[i] = fact[i - 1] * static_cast<long double>(i);
  std::vector<long double> zeta(static_cast<size_t>(n) + 1, 0.0L);
  for (int k = 1; k <= n; ++k) {
    long double sum = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, m); ++j) {
      sum += std::pow(static_cast<long double>(j), m) * fact[2 * j] /
             (fact[m - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k]);
    }
    zeta[static_cast<size_t>(k)] = ((m + k) % 2 == 0) ? sum : -sum;
  }
  return zeta;
}

double invert_gs(const TransformFn& F, double t, int terms) {
  if (terms < 2 || terms > 20 || terms % 2 != 0) {
    throw DomainError("invert_laplace: gs_terms must be even and within [2, 20]");
  }
  const std::vector<long double> zeta = gs_weights(terms);
  const long double ln2 = 0.69314718055994530942L;
  const long double a = ln2 / static_cast<long double>(t);
  long double acc = 0.0L;
  for (int k = 1; k <= terms; ++k) {
    const double sk = static_cast<double>(a * k);
    const double fk = F.eval(Complex(sk, 0.0)).real();
    if (!std::isfinite(fk)) throw ConvergenceError("invert_laplace: transform evaluation not finite");
    acc += zeta[static_cast<size_t>(k)] * static_cast<long double>(fk);
  }
  return static_cast<double>(a * acc);
}

double invert_talbot(const TransformFn& F, double t, int nodes) {
  if (F.domain == EvalDomain::real_axis) {
    throw MethodError("invert_laplace: talbot requires a sectorially evaluable transform");
  }
  if (nodes < 8 || nodes > 256) throw DomainError("invert_laplace: talbot_nodes must be within [8, 256]");
  const double r = 2.0 * nodes / (5.0 * t);
  double sum = 0.5 * std::exp(r * t) * F.eval(Complex(r, 0.0)).real();
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * kPi / nodes;
    const double cot = std::cos(theta) / std::sin(theta);
    const Complex s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const Complex term = std::exp(t * s) * F.eval(s) * Complex(1.0, sigma);
    if (!std::isfinite(term.real())) throw ConvergenceError("invert_laplace: transform evaluation not finite");
    sum += term.real();
  }
  return (r / nodes) * sum;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureConfig& cfg) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate: endpoints must be finite");
  QuadResult out;
  if (a == b) return out;
  double err = 0.0;
  out.value = gk_panel(f, a, b, cfg, &err);
  out.est_error = err;
  out.tolerance_met = err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  return out;
}

QuadResult laplace(const std::function<double(double)>& f, double s,
                   const QuadratureConfig& cfg) {
  check_s_positive(s, "laplace");
  // x = s t, panels follow the e^{-x} scale; e^{-64} is below any tolerance
  const auto edges = dyadic_edges(1.0, 64.0);
  QuadResult out;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double err = 0.0;
    const auto g = [&f, s](double x) { return std::exp(-x) * f(x / s); };
    out.value += gk_panel(g, edges[i], edges[i + 1], cfg, &err);
    out.est_error += err;
  }
  out.value /= s;
  out.est_error /= s;
  out.tolerance_met = out.est_error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  return out;
}

Complex laplace_sector(const std::function<Complex(Complex)>& f, Complex s,
                       const QuadratureConfig& cfg, double* est_error) {
  if (!(std::abs(s) > 0.0) || !std::isfinite(std::abs(s))) {
    throw DomainError("laplace_sector: s must be nonzero and finite");
  }
  const double args = std::arg(s);
  const double alpha = -0.75 * args;
  const Complex ray = std::polar(1.0, alpha);
  const double beta = (s * ray).real();  // = |s| cos(arg s / 4) > 0
  const Complex rate = s * ray / beta;   // Re(rate) == 1
  const auto edges = dyadic_edges(1.0, 64.0);
  Complex acc(0.0, 0.0);
  double err_acc = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double err = 0.0;
    const auto g = [&f, ray, beta, rate](double x) {
      return std::exp(-rate * x) * f((x / beta) * ray);
    };
    acc += GK::integrate(g, edges[i], edges[i + 1], gk_depth(cfg), gk_tol(cfg), &err);
    err_acc += err;
  }
  if (est_error != nullptr) *est_error = err_acc / beta;
  return acc * ray / beta;
}

QuadResult stieltjes(const std::function<double(double)>& g, double s,
                     const QuadratureConfig& cfg) {
  check_s_positive(s, "stieltjes");
  if (!(cfg.truncation_point > 0.0)) throw DomainError("stieltjes: truncation_point must be positive");
  const auto edges = dyadic_edges(1.0, cfg.truncation_point);
  QuadResult out;
  double prev = std::numeric_limits<double>::infinity();
  double last = prev;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    double err = 0.0;
    const auto h = [&g, s](double r) { return g(r) / (r + s); };
    const double part = gk_panel(h, edges[i], edges[i + 1], cfg, &err);
    out.value += part;
    out.est_error += err;
    prev = last;
    last = std::abs(part);
    if (edges[i + 1] >= 8.0 && std::max(prev, last) < 0.0625 * cfg.abs_tol) break;
  }
  out.est_error += last;  // truncation residual is not bounded for generic g
  out.tolerance_met = out.est_error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  return out;
}

std::pair<double, double> titchmarsh_sides(const TransformFn& F, double r) {
  check_s_positive(r, "titchmarsh_inverse");
  if (F.domain == EvalDomain::real_axis) {
    throw CutError("titchmarsh_inverse: transform not evaluable on the negative axis");
  }
  const Complex above = F.eval(Complex(-r, 0.0));
  const Complex below = F.eval(Complex(-r, std::copysign(0.0, -1.0)));
  return {-above.imag() / kPi, below.imag() / kPi};
}

double titchmarsh_inverse(const TransformFn& F, double r) {
  const auto [hi, lo] = titchmarsh_sides(F, r);
  return 0.5 * (hi + lo);
}

double invert_laplace(const TransformFn& F, double t, const InversionConfig& cfg) {
  if (!std::isfinite(t) || t <= 0.0) throw DomainError("invert_laplace: t must be positive and finite");
  if (!F.eval) throw DomainError("invert_laplace: transform has no evaluator");
  return cfg.method == InversionMethod::gaver_stehfest ? invert_gs(F, t, cfg.gs_terms)
                                                       : invert_talbot(F, t, cfg.talbot_nodes);
}

InversionResult invert_laplace_checked(const TransformFn& F, double t,
                                       const InversionConfig& cfg) {
  InversionResult out;
  out.value = invert_laplace(F, t, cfg);
  double probe;
  if (cfg.method == InversionMethod::gaver_stehfest) {
    probe = cfg.gs_terms > 2 ? invert_gs(F, t, cfg.gs_terms - 2) : out.value;
  } else {
    probe = cfg.talbot_nodes > 11 ? invert_talbot(F, t, cfg.talbot_nodes - 4) : out.value;
  }
  out.unstable = std::abs(out.value - probe) > std::max(1e-4, 1e-3 * std::abs(out.value));
  return out;
}

}  // namespace lambertcreep::tr
