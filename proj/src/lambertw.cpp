#include "lambertcreep/lambertw.hpp"

#include <cmath>

namespace lambertcreep::lw {

namespace {

// Coefficients q_k of the branch-point expansion W0(z) = sum_k q_k p^k with
// p = sqrt(2(e z + 1)); classical values, verified against high-precision
// evaluation of W0 near -1/e.
constexpr double kQ[] = {
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680863.0 / 43545600.0,
    -1963.0 / 204120.0,
    226287557.0 / 37623398400.0,
};
constexpr int kQTerms = 10;

// Inside this distance from the branch point the value series is
// machine-accurate and the Halley objective is too flat to iterate on.
constexpr double kValueSeriesRadius = 1e-4;

void validate(const SolveConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || cfg.max_iter < 1) {
    throw DomainError("SolveConfig: rel_tol must be positive and max_iter >= 1");
  }
}

template <typename T>
T w0_series(T p) {
  T acc = T(kQ[kQTerms - 1]);
  for (int k = kQTerms - 2; k >= 0; --k) acc = acc * p + T(kQ[k]);
  return acc;
}

// W0'(z) = e * sum_{k>=1} k q_k p^{k-2}; eight terms beyond the pole term.
template <typename T>
T w0_prime_series(T p) {
  T acc = T(double(kQTerms - 1) * kQ[kQTerms - 1]);
  for (int k = kQTerms - 2; k >= 1; --k) acc = acc * p + T(double(k) * kQ[k]);
  return kE * acc / p;
}

double halley_real(double x, double w, const SolveConfig& cfg) {
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    double wn = w - f / denom;
    // keep iterates inside the principal region
    if (x >= 0.0 && wn < 0.0) wn = 0.5 * w;
    if (x < 0.0) {
      if (wn <= -1.0) wn = 0.5 * (w - 1.0);
      if (wn > 0.0) wn = 0.5 * w;
    }
    if (!std::isfinite(wn)) throw ConvergenceError("w0_real: iteration diverged");
    const double dw = std::abs(wn - w);
    w = wn;
    if (dw <= 0.5 * cfg.rel_tol * (1.0 + std::abs(w))) return w;
  }
  throw ConvergenceError("w0_real: Halley iteration did not converge");
}

// For very large x, solve w + log w = log x instead; w e^w overflows long
// before x reaches DBL_MAX while this form stays well conditioned.
double log_newton_real(double x, const SolveConfig& cfg) {
  const double L = std::log(x);
  double w = L - std::log(L);
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double step = (w + std::log(w) - L) * w / (w + 1.0);
    w -= step;
    if (std::abs(step) <= 0.5 * cfg.rel_tol * (1.0 + std::abs(w))) return w;
  }
  throw ConvergenceError("w0_real: log-form Newton did not converge");
}

Complex halley_complex(Complex z, Complex w, const SolveConfig& cfg) {
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Complex ew = std::exp(w);
    const Complex f = w * ew - z;
    const Complex wp1 = w + 1.0;
    const Complex denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const Complex step = f / denom;
    Complex wn = w - step;
    double lam = 1.0;
    for (int bt = 0; bt < 40 && (!std::isfinite(wn.real()) || !std::isfinite(wn.imag()) ||
                                 std::abs(wn.imag()) >= kPi);
         ++bt) {
      lam *= 0.5;
      wn = w - lam * step;
    }
    const double dw = std::abs(wn - w);
    w = wn;
    if (dw <= 0.5 * cfg.rel_tol * (1.0 + std::abs(w))) return w;
  }
  throw ConvergenceError("w0_complex: Halley iteration did not converge");
}

// Upper-side cut limits are parametrized by v = Im w in (0, pi):
// w = -v cot v + i v maps onto the cut via x = g(v) = -v e^{-v cot v}/sin v,
// strictly decreasing from -1/e (v->0) to -inf (v->pi). Solve
// h(v) = log(-g(v)) - log(-x) = 0 by bracketed Newton.
double solve_cut_v(double x, const SolveConfig& cfg) {
  const double L = std::log(-x);
  auto h = [L](double v) {
    const double s = std::sin(v);
    return std::log(v / s) - v * std::cos(v) / s - L;
  };
  auto hprime = [](double v) {
    const double s = std::sin(v);
    return 1.0 / v - 2.0 * std::cos(v) / s + v / (s * s);
  };

  const double eps = -(x + kInvE);
  double v = eps < 0.5 ? std::sqrt(2.0 * kE * eps) : kPi - std::atan2(kPi, L);
  double lo = 1e-8, hi = kPi * (1.0 - 1e-16);
  if (v <= lo || v >= hi) v = 0.5 * (lo + hi);
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double hv = h(v);
    if (hv > 0.0) {
      hi = v;
    } else {
      lo = v;
    }
    const double step = hv / hprime(v);
    if (std::abs(step) <= 0.5 * cfg.rel_tol * (1.0 + std::abs(v))) return v - step;
    double vn = v - step;
    if (!(vn > lo && vn < hi)) vn = 0.5 * (lo + hi);
    const double dv = std::abs(vn - v);
    v = vn;
    if (dv <= 0.5 * cfg.rel_tol * (1.0 + v)) return v;
    if (hi - lo <= cfg.rel_tol * (1.0 + v)) return 0.5 * (lo + hi);
  }
  throw ConvergenceError("w0_cut_limit: bracketed Newton did not converge");
}

}  // namespace

double w0_real(double x, const SolveConfig& cfg) {
  validate(cfg);
  if (!std::isfinite(x)) throw DomainError("w0_real: argument must be finite");
  const double slack = cfg.rel_tol * (1.0 + kInvE);
  if (x < -kInvE - slack) throw DomainError("w0_real: argument below the branch point -1/e");
  if (x <= -kInvE) return -1.0;
  if (x == 0.0) return 0.0;

  const double d = x + kInvE;
  if (d <= kValueSeriesRadius) return w0_series(std::sqrt(2.0 * kE * d));
  if (x >= 1e16) return log_newton_real(x, cfg);

  double seed;
  if (x < -0.25) {
    seed = w0_series(std::sqrt(2.0 * kE * d));
  } else if (x < 0.25) {
    seed = x * (1.0 - x * (1.0 - 1.5 * x));
  } else if (x <= 8.0) {
    seed = std::log1p(x);
  } else {
    const double L = std::log(x), l = std::log(L);
    seed = L - l + l / L;
  }
  return halley_real(x, seed, cfg);
}

Complex w0_complex(Complex z, const SolveConfig& cfg) {
  validate(cfg);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("w0_complex: argument must be finite");
  }
  if (z.imag() == 0.0) {
    if (z.real() <= -kInvE) {
      throw CutError("w0_complex: argument on the branch cut; use w0_cut_limit");
    }
    return Complex(w0_real(z.real(), cfg), 0.0);
  }
  if (std::abs(z) < 1e-290) return z;  // w = z + O(z^2), below representable correction

  Complex seed;
  const Complex d = z + kInvE;
  if (std::abs(z) < 0.05) {
    seed = z * (1.0 - z * (1.0 - 1.5 * z));
  } else if (std::abs(d) < 0.25) {
    seed = w0_series(std::sqrt(2.0 * kE * d));
  } else if (z.real() < -kInvE && std::abs(z.imag()) < 0.05 * (1.0 + std::abs(z.real()))) {
    // hugging the cut: start from the one-sided limit directly below/above
    seed = w0_cut_limit(z.real(), z.imag() > 0.0 ? BranchSide::above : BranchSide::below, cfg);
  } else if (std::abs(z + 1.0) < 0.5) {
    // w0 at -1 +/- i0; the disc sits against the cut so the limit value seeds both lips
    seed = Complex(-0.31813150520476413, std::copysign(1.3372357014306895, z.imag()));
  } else if (std::abs(z) <= 2.0) {
    seed = std::log(1.0 + z);
  } else {
    const Complex L = std::log(z);
    seed = L - std::log(L);
  }
  return halley_complex(z, seed, cfg);
}

Complex w0_cut_limit(double x, BranchSide side, const SolveConfig& cfg) {
  validate(cfg);
  if (!std::isfinite(x) || x >= -kInvE) {
    throw DomainError("w0_cut_limit: argument must lie strictly left of -1/e");
  }
  const double eps = -(x + kInvE);
  Complex w;
  if (eps <= kValueSeriesRadius) {
    const Complex p(0.0, std::sqrt(2.0 * kE * eps));
    w = w0_series(p);
  } else {
    const double v = solve_cut_v(x, cfg);
    w = Complex(-v * std::cos(v) / std::sin(v), v);
  }
  return side == BranchSide::above ? w : std::conj(w);
}

double w0_prime_real(double t, const SolveConfig& cfg) {
  validate(cfg);
  if (!std::isfinite(t) || t <= -kInvE) {
    throw DomainError("w0_prime_real: argument must lie strictly right of -1/e");
  }
  if (t == 0.0) return 1.0;  // removable limit
  if (near_branch_point(t)) {
    return w0_prime_series(std::sqrt(2.0 * kE * (t + kInvE)));
  }
  const double w = w0_real(t, cfg);
  return w / (t * (1.0 + w));
}

Complex w0_prime_cut_limit(double x, BranchSide side, const SolveConfig& cfg) {
  const Complex w = w0_cut_limit(x, side, cfg);
  return w / (x * (1.0 + w));
}

Complex w0_prime_branch_series(Complex s) {
  const Complex d = s + kInvE;
  const double r = std::abs(d);
  if (r == 0.0) throw DomainError("w0_prime_branch_series: square-root singularity at -1/e");
  if (r >= series_switch_radius) {
    throw DomainError("w0_prime_branch_series: argument outside the trusted series radius");
  }
  return w0_prime_series(std::sqrt(2.0 * kE * d));
}

Complex w0_prime_branch_series(double x, BranchSide side) {
  const double eps = -(x + kInvE);
  if (!(eps > 0.0)) {
    throw DomainError("w0_prime_branch_series: cut form requires x < -1/e");
  }
  if (eps >= series_switch_radius) {
    throw DomainError("w0_prime_branch_series: argument outside the trusted series radius");
  }
  const double m = std::sqrt(2.0 * kE * eps);
  const Complex p(0.0, side == BranchSide::above ? m : -m);
  return w0_prime_series(p);
}

double w0_asymptotic(double t) {
  if (!(t > kE)) throw DomainError("w0_asymptotic: requires t > e (log log t must be positive)");
  return std::log(t) - std::log(std::log(t));
}

double w0_prime_asymptotic(double t) {
  if (!(t > 1.0)) throw DomainError("w0_prime_asymptotic: requires t > 1 (log t must be positive)");
  return 1.0 / t - 1.0 / (t + std::log(t));
}

}  // namespace lambertcreep::lw
