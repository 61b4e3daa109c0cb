#pragma once

#include <complex>

#include "lambertcreep/errors.hpp"

namespace lambertcreep::lw {

using Complex = std::complex<double>;

/// Which one-sided limit onto the branch cut (-inf, -1/e] is requested.
enum class BranchSide { above, below };

struct SolveConfig {
  double rel_tol = 1e-14;
  int max_iter = 50;
};

inline constexpr double kE = 2.71828182845904523536;
inline constexpr double kInvE = 0.36787944117144232160;  // 1/e
inline constexpr double kPi = 3.14159265358979323846;

/// Radius around s = -1/e inside which derivative evaluation must use the
/// branch-point series (the direct formula loses digits as 1 + W0 -> 0).
inline constexpr double series_switch_radius = 1e-3;

/// True when x is close enough to the branch point that series evaluation
/// is required for the derivative.
inline bool near_branch_point(double x) {
  return std::abs(x + kInvE) < series_switch_radius;
}

inline bool near_branch_point(Complex z) {
  return std::abs(z + kInvE) < series_switch_radius;
}

/// Principal branch W0(x) for real x >= -1/e, by Halley iteration with
/// region-dependent seeds; returns w with |w e^w - x| <= rel_tol (1+|x|)
/// and w >= -1.
double w0_real(double x, const SolveConfig& cfg = {});

/// Principal branch W0(z) for complex z off the cut (-inf, -1/e].
/// Conjugate-symmetric: w0_complex(conj z) == conj(w0_complex(z)).
Complex w0_complex(Complex z, const SolveConfig& cfg = {});

/// One-sided limit W0(x +- i0) for real x < -1/e. side == above gives
/// Im in (0, pi); the below value is its conjugate.
Complex w0_cut_limit(double x, BranchSide side, const SolveConfig& cfg = {});

/// W0'(t) for real t > -1/e; the removable limit at t = 0 returns exactly 1.
double w0_prime_real(double t, const SolveConfig& cfg = {});

/// One-sided limit W0'(x +- i0) = W0/(x(1+W0)) for real x < -1/e. Near the
/// branch point (|x + 1/e| < series_switch_radius) this loses accuracy;
/// callers should switch to w0_prime_branch_series there.
Complex w0_prime_cut_limit(double x, BranchSide side, const SolveConfig& cfg = {});

/// Branch-point series of W0'(s) about s = -1/e, valid for
/// |s + 1/e| < series_switch_radius. Leading terms
/// sqrt(e/2)/sqrt(s+1/e) - 2e/3 + (11 e^{3/2} / (12 sqrt 2)) sqrt(s+1/e),
/// extended to eight terms; the square-root branch is principal, so a
/// positive imaginary part of s selects the upper side of the cut.
Complex w0_prime_branch_series(Complex s);

/// Branch-point series of W0'(x +- i0) on the cut (x < -1/e), with the
/// square-root branch fixed by the requested side.
Complex w0_prime_branch_series(double x, BranchSide side);

/// Large-argument representation log t - log log t (valid for t > e).
double w0_asymptotic(double t);

/// Large-argument representation of the derivative, 1/t - 1/(t + log t)
/// (valid for t > 1).
double w0_prime_asymptotic(double t);

}  // namespace lambertcreep::lw
