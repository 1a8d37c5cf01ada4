#pragma once

// Spatial particle densities around the test particle and the force laws
// acting on it, together with the induced tail measure of the single-particle
// force contribution.
//
// The density is a two-zone model on the ball of radius L:
//   inner core  r < r_c : f(x) = c_g g(x^) r^nu, carrying mass `inner_weight`,
//   outer shell r_c <= r <= L : a power shell r^{outer_nu} carrying the rest.
// g >= 0 is an angular shape (not necessarily normalized);
//   c_g = inner_weight (nu+d) / (Int g dS * r_c^{nu+d}).
//
// A power force U(x) = kappa x^ / rho^delta (rho = |x|) maps the inner core
// to a power tail of |U| with index alpha = (d+nu)/delta and tail measure
//   P(|U| > u, U^ in dS) = C(u^) u^{-alpha} / alpha dS,
//   C(u^) = c_g g(q u^) |kappa_eff|^alpha / delta,     q = sgn(kappa),
// where kappa_eff = kappa for the bare law and kappa (delta - 1) for the
// screened law U = kappa e^{-lambda rho} (lambda rho + delta - 1) x^ / rho^delta,
// whose rho -> 0 expansion has the same power with coupling kappa (delta - 1).

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stablesum/angular.hpp"
#include "stablesum/geometry.hpp"

namespace stablesum {

enum class OuterDirection { InheritAngular, Isotropic };

struct SpatialDensity {
  int dim = 3;
  double nu = 0.0;          // inner radial exponent; requires nu > -dim
  double r_c = 1.0;         // core radius
  double L = 10.0;          // system radius
  double inner_weight = 1.0;  // mass in r < r_c, in (0, 1]
  AngularFunction shape;      // g(u^) >= 0
  double outer_nu = 0.0;      // outer shell exponent (0 = uniform in volume)
  OuterDirection outer_direction = OuterDirection::InheritAngular;
};

inline void validate(const SpatialDensity& de) {
  if (de.dim < 1 || de.dim > 3) throw std::invalid_argument("SpatialDensity: dim must be 1..3");
  if (!(de.nu > -de.dim)) throw std::invalid_argument("SpatialDensity: requires nu > -dim");
  if (!(de.r_c > 0.0)) throw std::invalid_argument("SpatialDensity: r_c must be > 0");
  if (!(de.L >= de.r_c)) throw std::invalid_argument("SpatialDensity: L must be >= r_c");
  if (!(de.inner_weight > 0.0) || de.inner_weight > 1.0)
    throw std::invalid_argument("SpatialDensity: inner_weight must lie in (0, 1]");
  if (de.inner_weight < 1.0 && !(de.L > de.r_c))
    throw std::invalid_argument("SpatialDensity: outer shell needs L > r_c");
  if (de.shape.dim != de.dim) throw std::invalid_argument("SpatialDensity: shape dim mismatch");
  if (!(de.shape.sup_bound > 0.0))
    throw std::invalid_argument("SpatialDensity: shape.sup_bound must be > 0");
}

struct ForceLaw {
  double kappa = 1.0;       // signed coupling; q = sgn(kappa)
  double delta = 2.0;       // decay exponent, >= 0
  bool damped = false;      // screened variant
  double lambda_bar = 0.0;  // screening rate (damped only)
};

inline void validate(const ForceLaw& law) {
  if (law.kappa == 0.0) throw std::invalid_argument("ForceLaw: kappa must be nonzero");
  if (!(law.delta >= 0.0)) throw std::invalid_argument("ForceLaw: delta must be >= 0");
  if (law.damped) {
    if (!(law.delta > 1.0)) throw std::invalid_argument("ForceLaw: screened law needs delta > 1");
    if (!(law.lambda_bar > 0.0))
      throw std::invalid_argument("ForceLaw: screened law needs lambda_bar > 0");
  }
}

/// Force on the test particle at the origin from a source at x.
inline Vec force_map(const ForceLaw& law, const Vec& x) {
  const double rho = norm(x);
  if (!(rho > 0.0)) throw std::invalid_argument("force_map: source at the origin");
  double mag = law.kappa * std::pow(rho, -law.delta);
  if (law.damped) mag *= std::exp(-law.lambda_bar * rho) * (law.lambda_bar * rho + law.delta - 1.0);
  return (mag / rho) * x;  // mag * x^
}

/// Effective small-rho coupling (the screened law renormalizes kappa).
inline double effective_kappa(const ForceLaw& law) {
  return law.damped ? law.kappa * (law.delta - 1.0) : law.kappa;
}

/// Tail index alpha = (d+nu)/delta; +infinity when delta = 0 (bounded force).
inline double tail_alpha(const SpatialDensity& de, const ForceLaw& law) {
  validate(de);
  validate(law);
  if (law.delta == 0.0) return std::numeric_limits<double>::infinity();
  return (de.dim + de.nu) / law.delta;
}

/// Int g dS (exact for d=1; product quadrature otherwise).
inline double shape_total(const SpatialDensity& de, int n_polar = 512, int n_azimuth = 1024) {
  const SphereQuadrature q = SphereQuadrature::build(de.dim, n_polar, n_azimuth);
  return integrate_sphere_real([&](const Vec& u) { return de.shape(u); }, q);
}

/// c_g Int g dS = inner_weight (nu+d) / r_c^{nu+d}: the total tail mass scale
/// of the inner core, independent of the angular shape.
inline double tail_mass_scale(const SpatialDensity& de) {
  validate(de);
  return de.inner_weight * (de.nu + de.dim) / std::pow(de.r_c, de.nu + de.dim);
}

/// Angular density C(u^) of the force tail measure (requires delta > 0).
inline AngularFunction tail_angular(const SpatialDensity& de, const ForceLaw& law) {
  validate(de);
  validate(law);
  if (!(law.delta > 0.0))
    throw std::invalid_argument("tail_angular: delta = 0 force has no power tail");
  const double alpha = tail_alpha(de, law);
  const double c_g = de.inner_weight * (de.nu + de.dim) /
                     (shape_total(de) * std::pow(de.r_c, de.nu + de.dim));
  const double amp = c_g * std::pow(std::abs(effective_kappa(law)), alpha) / law.delta;
  const double q = law.kappa > 0.0 ? 1.0 : -1.0;
  AngularFunction C;
  C.dim = de.dim;
  const AngularFunction g = de.shape;
  C.eval = [g, q, amp](const Vec& u) { return amp * g(q * u); };
  C.symmetric = de.shape.symmetric;
  C.sup_bound = amp * de.shape.sup_bound;
  if (!de.shape.jump_cosines.empty()) {
    C.jump_axis = q > 0.0 ? de.shape.jump_axis : -1.0 * de.shape.jump_axis;
    C.jump_cosines = de.shape.jump_cosines;
  }
  return C;
}

/// Int C dS: total tail amplitude, P(|U| > u) ~ (Int C dS) u^{-alpha}/alpha.
inline double tail_total_amplitude(const SpatialDensity& de, const ForceLaw& law) {
  if (!(law.delta > 0.0))
    throw std::invalid_argument("tail_total_amplitude: delta = 0 force has no power tail");
  const double alpha = tail_alpha(de, law);
  return tail_mass_scale(de) * std::pow(std::abs(effective_kappa(law)), alpha) / law.delta;
}

}  // namespace stablesum
