#pragma once

#include <complex>
#include <functional>
#include <utility>

#include "lambertcreep/errors.hpp"

namespace lambertcreep::tr {

using Complex = std::complex<double>;

/// How the far field of a semi-infinite integral is handled past the
/// truncation point.
enum class TailPolicy { none, analytic_tail, log_substitution };

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  double truncation_point = 1e6;
  TailPolicy tail_policy = TailPolicy::analytic_tail;
};

/// Value of a quadrature together with the accumulated error estimate.
/// tolerance_met is false when the estimate exceeds the requested
/// tolerances; the best value is still returned.
struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
  bool tolerance_met = true;
};

/// Where a Laplace-domain function may be evaluated.
enum class EvalDomain { real_axis, sectorial };

/// Evaluation contract s -> F(s). `sectorial` means F is defined on the
/// complex plane cut along the negative real axis, with the one-sided
/// limits onto the cut selected by the sign of the (possibly signed-zero)
/// imaginary part of s.
struct TransformFn {
  std::function<Complex(Complex)> eval;
  EvalDomain domain = EvalDomain::sectorial;
};

enum class InversionMethod { gaver_stehfest, talbot };

struct InversionConfig {
  InversionMethod method = InversionMethod::talbot;
  int gs_terms = 16;
  int talbot_nodes = 32;
};

/// Adaptive Gauss-Kronrod on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureConfig& cfg = {});

/// Laplace transform of a real integrand over [0, inf) at real s > 0.
QuadResult laplace(const std::function<double(double)>& f, double s,
                   const QuadratureConfig& cfg = {});

/// Laplace transform along the rotated ray t = tau * exp(i*alpha) with
/// alpha = -(3/4) arg s, which keeps Re(s t) growing like |s| |t| / sqrt(2).
/// Defines the analytic continuation of the transform off the positive real
/// axis for integrands analytic in |arg t| < pi. The sign of a signed-zero
/// imaginary part of s selects the side when arg s = +-pi.
Complex laplace_sector(const std::function<Complex(Complex)>& f, Complex s,
                       const QuadratureConfig& cfg = {},
                       double* est_error = nullptr);

/// Stieltjes transform: integral of g(r)/(r+s) over [0, inf), s > 0.
QuadResult stieltjes(const std::function<double(double)>& g, double s,
                     const QuadratureConfig& cfg = {});

/// -(1/pi) Im F(r e^{+i pi}) and +(1/pi) Im F(r e^{-i pi}); the two agree for
/// conjugate-symmetric F. titchmarsh_inverse returns their mean.
std::pair<double, double> titchmarsh_sides(const TransformFn& F, double r);
double titchmarsh_inverse(const TransformFn& F, double r);

struct InversionResult {
  double value = 0.0;
  bool unstable = false;
};

/// Numerical inverse Laplace transform at t > 0 by the configured engine.
double invert_laplace(const TransformFn& F, double t,
                      const InversionConfig& cfg = {});

/// Same, with a stability probe: the result is recomputed at reduced order
/// (gs_terms-2 or talbot_nodes-4) and flagged when the two diverge.
InversionResult invert_laplace_checked(const TransformFn& F, double t,
                                       const InversionConfig& cfg = {});

}  // namespace lambertcreep::tr
