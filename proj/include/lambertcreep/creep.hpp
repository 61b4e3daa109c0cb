#pragma once

#include <functional>
#include <vector>

#include "lambertcreep/lambertw.hpp"
#include "lambertcreep/transforms.hpp"

namespace lambertcreep::creep {

using lw::Complex;
using tr::InversionConfig;
using tr::QuadResult;
using tr::QuadratureConfig;
using tr::TransformFn;

/// Dimensional wrapper around the dimensionless pair (psi, phi):
/// J(t) = J0 (1 + q psi(t)), G(t) = G0 phi(t), G0 = 1/J0.
struct CreepModel {
  double J0 = 1.0;
  double q = 1.0;
  double G0() const { return 1.0 / J0; }
};

struct SpectralSample {
  double abscissa = 0.0;
  double value = 0.0;
  double est_error = 0.0;
};

enum class PhiRoute { laplace_inversion, volterra_time_domain };

struct PhiGrid {
  std::vector<double> times;
  std::vector<double> values;
  PhiRoute route = PhiRoute::laplace_inversion;
  /// laplace route: per-point inversion stability probe results
  std::vector<unsigned char> unstable;
  /// volterra route: set when halving the internal step still moves the
  /// solution by more than 1e-4 in sup norm
  bool step_warning = false;
};

/// Swappable creep-rate contract. The complex evaluator must continue the
/// rate analytically into |arg t| < pi for the rotated-ray transform.
struct PsiModel {
  std::function<double(double)> prime;
  std::function<Complex(Complex)> prime_complex;
};

/// The Lambert-W model: psi = W0, psi' = W0'.
PsiModel lambert_psi_model();
/// The analytic pipeline oracle psi(t) = t, whose relaxation is exp(-t).
PsiModel linear_psi_model();

double psi(double t);
double psi_prime(double t);

/// Spectral density of the creep rate; zero on (0, 1/e], unbounded from the
/// right at 1/e, positive and decreasing beyond.
double rho(double u);

/// K(r): Laplace transform of rho. K(0) = 1.
QuadResult spectrum_K(double r, const QuadratureConfig& cfg = {});
/// H(tau) = K(1/tau)/tau^2.
QuadResult spectrum_H(double tau, const QuadratureConfig& cfg = {});
/// Integral of rho(u)/u over (0, inf); equals 1.
QuadResult rho_over_u_integral(const QuadratureConfig& cfg = {});
/// Stieltjes reconstruction of psi' from rho (round-trip quantity).
QuadResult psi_prime_from_rho(double t, const QuadratureConfig& cfg = {});

/// s * psi_tilde(s) as a sectorial evaluator (computed on demand from the
/// rate, since the transform itself has no closed form).
TransformFn s_psi_tilde(const PsiModel& model = lambert_psi_model(),
                        const QuadratureConfig& cfg = {});

/// Relaxation by inverse Laplace transform of 1/(s(1 + s psi_tilde(s))).
PhiGrid phi_laplace(const std::vector<double>& times,
                    const InversionConfig& inv_cfg = {},
                    const QuadratureConfig& quad_cfg = {},
                    const PsiModel& model = lambert_psi_model());

/// Relaxation by direct time-domain solution of
/// phi(t) = 1 - int_0^t psi'(t') phi(t - t') dt'
/// with product-trapezoidal convolution weights on a uniform grid.
PhiGrid phi_volterra(double t_max, int steps,
                     const PsiModel& model = lambert_psi_model());

double creep_compliance(const CreepModel& model, double t);
double relaxation_modulus(const CreepModel& model, double t);

}  // namespace lambertcreep::creep
