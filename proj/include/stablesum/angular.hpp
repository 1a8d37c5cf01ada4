#pragma once

// Angular densities C(u^) on the unit sphere S_d (d = 1, 2, 3) and the
// functionals of them that parametrize the limit laws:
//
//   A_alpha(z^) = Int_{S_d} C(u^) |z^.u^|^alpha dS
//   B_alpha(z^) = Int_{S_d} C(u^) sgn(z^.u^) |z^.u^|^alpha dS
//   D_alpha(z^) = Int_{S_d} C(u^) (z^.u^)^alpha ln|z^.u^| dS   (alpha in {1,2})
//   v           = -Int_{S_d} C(u^) u^ dS                        (drift vector)
//   M           = (1/2) Int_{S_d} C(u^) u^ u^^T dS              (Gaussian matrix)
//
// The projected kernels |t|^alpha and t^alpha ln|t| have a cusp / logarithmic
// singularity on the equator z^.u^ = 0, so A/B/D use dyadically graded
// Gauss-Legendre panels accumulating toward that set; smooth integrands use a
// plain product rule (exact two-point sum for d=1, trapezoid for d=2,
// Gauss-Legendre x trapezoid for d=3).
//
// Piecewise-constant densities additionally declare the circles axis.u^ = c
// they jump across; A/B/D split their panels on those circles so caps are
// integrated to panel accuracy (for every direction when d = 2, and for
// directions on the cap axis when d = 3 — off-axis d = 3 jumps cross the
// azimuthal rings and are only resolved to the ring resolution).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "stablesum/geometry.hpp"

namespace stablesum {

// ---------------------------------------------------------------------------
// Angular density type and builtins
// ---------------------------------------------------------------------------

/// Non-negative density on S_d.  `symmetric` asserts C(u^) = C(-u^);
/// `sup_bound` is an upper bound of C used for rejection sampling.
/// A piecewise-constant density records the circles jump_axis.u^ = c across
/// which it jumps (one cosine per circle) so the graded quadrature can place
/// panel boundaries on them.
struct AngularFunction {
  int dim = 1;
  std::function<double(const Vec&)> eval;
  bool symmetric = false;
  double sup_bound = 0.0;
  Vec jump_axis{};
  std::vector<double> jump_cosines{};

  double operator()(const Vec& u) const { return eval(u); }
};

/// C == scale on all of S_d.
inline AngularFunction angular_uniform(int dim, double scale = 1.0) {
  if (scale < 0.0) throw std::invalid_argument("angular_uniform: negative scale");
  AngularFunction f;
  f.dim = dim;
  f.eval = [scale](const Vec&) { return scale; };
  f.symmetric = true;
  f.sup_bound = scale;
  return f;
}

/// C(u^) = scale * (1 + amp * axis.u^), |amp| <= 1 keeps it non-negative.
inline AngularFunction angular_dipole(int dim, const Vec& axis, double amp, double scale = 1.0) {
  if (std::abs(amp) > 1.0) throw std::invalid_argument("angular_dipole: |amp| must be <= 1");
  if (scale < 0.0) throw std::invalid_argument("angular_dipole: negative scale");
  const Vec a = make_direction(axis);
  AngularFunction f;
  f.dim = dim;
  f.eval = [a, amp, scale](const Vec& u) { return scale * (1.0 + amp * dot(a, u)); };
  f.symmetric = (amp == 0.0);
  f.sup_bound = scale * (1.0 + std::abs(amp));
  return f;
}

/// d=1 two-point density: C(+1) = c_plus, C(-1) = c_minus.
inline AngularFunction angular_two_point(double c_plus, double c_minus) {
  if (c_plus < 0.0 || c_minus < 0.0) throw std::invalid_argument("angular_two_point: negative value");
  AngularFunction f;
  f.dim = 1;
  f.eval = [c_plus, c_minus](const Vec& u) { return u[0] > 0.0 ? c_plus : c_minus; };
  f.symmetric = (c_plus == c_minus);
  f.sup_bound = std::max(c_plus, c_minus);
  return f;
}

/// Piecewise-constant cap: `inside` where axis.u^ >= cos_cut, else `outside`.
inline AngularFunction angular_cap(int dim, const Vec& axis, double cos_cut, double inside,
                                   double outside) {
  if (inside < 0.0 || outside < 0.0) throw std::invalid_argument("angular_cap: negative value");
  const Vec a = make_direction(axis);
  AngularFunction f;
  f.dim = dim;
  f.eval = [a, cos_cut, inside, outside](const Vec& u) {
    return dot(a, u) >= cos_cut ? inside : outside;
  };
  f.symmetric = (inside == outside);
  f.sup_bound = std::max(inside, outside);
  if (inside != outside && dim > 1 && std::abs(cos_cut) < 1.0) {
    f.jump_axis = a;
    f.jump_cosines = {cos_cut};
  }
  return f;
}

/// Tabulated density: nearest-node lookup (greatest dot product wins).
inline AngularFunction angular_table(int dim, std::vector<Vec> nodes, std::vector<double> values,
                                     bool symmetric = false) {
  if (nodes.empty() || nodes.size() != values.size())
    throw std::invalid_argument("angular_table: nodes/values size mismatch or empty");
  double sup = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("angular_table: negative value");
    sup = std::max(sup, v);
  }
  for (auto& n : nodes) n = make_direction(n);
  AngularFunction f;
  f.dim = dim;
  f.eval = [nodes = std::move(nodes), values = std::move(values)](const Vec& u) {
    std::size_t best = 0;
    double bestdot = -2.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double d = dot(nodes[i], u);
      if (d > bestdot) {
        bestdot = d;
        best = i;
      }
    }
    return values[best];
  };
  f.symmetric = symmetric;
  f.sup_bound = sup;
  return f;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes
// ---------------------------------------------------------------------------

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      // p0 = P_n(t); derivative from the standard recurrence.
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -t;
    x[static_cast<std::size_t>(n - 1 - i)] = t;
    const double wi = 2.0 / ((1.0 - t * t) * pp * pp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

// ---------------------------------------------------------------------------
// Generic product quadrature on S_d (smooth integrands)
// ---------------------------------------------------------------------------

struct SphereQuadrature {
  int dim = 1;
  std::vector<Vec> nodes;
  std::vector<double> weights;

  /// d=1: exact two-point sum over {+1, -1}.
  /// d=2: n_azimuth-point trapezoid on [0, 2pi)       (default 512).
  /// d=3: Gauss-Legendre in cos(theta) (n_polar, default 128)
  ///      x uniform in phi (n_azimuth, default 256).
  static SphereQuadrature build(int dim, int n_polar = 0, int n_azimuth = 0) {
    SphereQuadrature q;
    q.dim = dim;
    if (dim == 1) {
      q.nodes = {make_vec1(1.0), make_vec1(-1.0)};
      q.weights = {1.0, 1.0};
    } else if (dim == 2) {
      const int n = n_azimuth > 0 ? n_azimuth : 512;
      q.nodes.reserve(static_cast<std::size_t>(n));
      q.weights.assign(static_cast<std::size_t>(n), 2.0 * M_PI / n);
      for (int j = 0; j < n; ++j) {
        const double psi = 2.0 * M_PI * j / n;
        q.nodes.push_back(make_vec2(std::cos(psi), std::sin(psi)));
      }
    } else if (dim == 3) {
      const int np = n_polar > 0 ? n_polar : 128;
      const int na = n_azimuth > 0 ? n_azimuth : 256;
      std::vector<double> xt, wt;
      gauss_legendre(np, xt, wt);
      q.nodes.reserve(static_cast<std::size_t>(np * na));
      q.weights.reserve(static_cast<std::size_t>(np * na));
      for (int i = 0; i < np; ++i) {
        const double t = xt[static_cast<std::size_t>(i)];
        const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (int j = 0; j < na; ++j) {
          const double phi = 2.0 * M_PI * j / na;
          q.nodes.push_back(make_vec3(rho * std::cos(phi), rho * std::sin(phi), t));
          q.weights.push_back(wt[static_cast<std::size_t>(i)] * 2.0 * M_PI / na);
        }
      }
    } else {
      throw std::invalid_argument("SphereQuadrature: dim must be 1, 2 or 3");
    }
    return q;
  }
};

/// Sum_k w_k f(node_k).
inline std::complex<double> integrate_sphere(
    const std::function<std::complex<double>(const Vec&)>& f, const SphereQuadrature& quad) {
  std::complex<double> s = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) s += quad.weights[k] * f(quad.nodes[k]);
  return s;
}

inline double integrate_sphere_real(const std::function<double(const Vec&)>& f,
                                    const SphereQuadrature& quad) {
  double s = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) s += quad.weights[k] * f(quad.nodes[k]);
  return s;
}

// ---------------------------------------------------------------------------
// Singularity-graded evaluation of A_alpha / B_alpha / D_alpha
// ---------------------------------------------------------------------------

/// Resolution knobs for the graded projected-kernel quadrature.  Doubling
/// `panel_order` / `azimuth` is the convergence check used by the tests.
struct AngularScheme {
  int panel_order = 12;  // Gauss-Legendre points per dyadic panel
  int panel_levels = 60; // dyadic panels accumulating toward the singular set
  int azimuth = 256;     // phi nodes for the d=3 inner integral
};

namespace detail {

enum class ProjectedKernel { AbsPow, SignedAbsPow, PowLog };

inline double kernel_plus(ProjectedKernel k, double alpha, double t) {
  // t > 0 branch of the kernel.
  switch (k) {
    case ProjectedKernel::AbsPow:
    case ProjectedKernel::SignedAbsPow:
      return std::pow(t, alpha);
    case ProjectedKernel::PowLog:
      return std::pow(t, alpha) * std::log(t);
  }
  return 0.0;
}

/// Panel boundaries on (0, 1]: 1, 1/2, ..., 2^{1-levels}, plus the final stub
/// [0, 2^{1-levels}].  All Gauss nodes are interior, so the kernel is never
/// evaluated at the singular point t = 0.
inline void graded_panels(int levels, std::vector<double>& bounds) {
  bounds.clear();
  double b = 1.0;
  for (int k = 0; k < levels; ++k) {
    bounds.push_back(b);
    b *= 0.5;
  }
  bounds.push_back(b);
  bounds.push_back(0.0);
}

/// Merge extra panel boundaries into the descending bounds list, dropping
/// cuts that coincide with an existing boundary (relative tolerance, since
/// the deep dyadic bounds are themselves closer together than any absolute
/// spacing).
inline void insert_panel_cuts(std::vector<double>& bounds, const std::vector<double>& cuts) {
  for (double c : cuts)
    if (c > 1e-14 && c < 1.0 - 1e-14) bounds.push_back(c);
  std::sort(bounds.begin(), bounds.end(), std::greater<double>());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double hi, double lo) { return hi - lo < 1e-14 * hi; }),
               bounds.end());
}

/// Integral over S_d of C(u^) * kernel(z^.u^) dS with the kernel singular only
/// on the equator z^.u^ = 0.  For each positive projected coordinate t the
/// +/-t contributions are paired so that the exact parity of the kernel is
/// preserved to rounding error.
inline double projected_kernel_integral(const AngularFunction& C, double alpha, const Vec& zhat_in,
                                        ProjectedKernel kern, const AngularScheme& sch) {
  const Vec zhat = make_direction(zhat_in);
  if (C.dim != zhat.dim) throw std::invalid_argument("angular functional: dimension mismatch");
  const double sign_minus =
      (kern == ProjectedKernel::AbsPow) ? 1.0
      : (kern == ProjectedKernel::SignedAbsPow)
          ? -1.0
          // (z^.u^)^alpha ln|z^.u^| with integer alpha: (-t)^alpha = (-1)^alpha t^alpha.
          : (static_cast<int>(std::lround(alpha)) % 2 == 0 ? 1.0 : -1.0);

  std::vector<double> gx, gw, bounds;
  gauss_legendre(sch.panel_order, gx, gw);
  graded_panels(sch.panel_levels, bounds);

  double total = 0.0;
  if (zhat.dim == 1) {
    // |z^.u^| = 1 at both points: kernel(+/-1) is finite, no grading needed.
    const double kp = kernel_plus(kern, alpha, 1.0);
    total = kp * C(make_vec1(zhat[0])) + sign_minus * kp * C(make_vec1(-zhat[0]));
    return total;
  }

  if (zhat.dim == 2) {
    // Write u^ = cos(chi) z^ + sin(chi) z^perp; the kernel depends on
    // cos(chi), singular at chi = pi/2, 3pi/2.  Each quarter-circle is graded
    // toward its singular endpoint via tau = distance to that endpoint, where
    // cos(chi) = +/- sin(tau).
    const Vec zperp = make_vec2(-zhat[1], zhat[0]);
    auto udir = [&](double cos_chi, double sin_chi) {
      return make_vec2(cos_chi * zhat[0] + sin_chi * zperp[0],
                       cos_chi * zhat[1] + sin_chi * zperp[1]);
    };
    // With u^(chi).a = cos(chi - chi_a), each declared jump cosine c puts
    // density jumps at chi = chi_a +/- acos(c); split the panels at the
    // quarter-circle coordinates of those angles.
    if (!C.jump_cosines.empty() && C.jump_axis.dim == 2) {
      const double chi_a = std::atan2(dot(C.jump_axis, zperp), dot(C.jump_axis, zhat));
      std::vector<double> cuts;
      for (double c : C.jump_cosines) {
        const double phi_c = std::acos(std::clamp(c, -1.0, 1.0));
        for (double chi : {chi_a + phi_c, chi_a - phi_c}) {
          chi = std::fmod(chi, 2.0 * M_PI);
          if (chi < 0.0) chi += 2.0 * M_PI;
          const double tau =
              chi < M_PI ? std::abs(M_PI / 2.0 - chi) : std::abs(3.0 * M_PI / 2.0 - chi);
          cuts.push_back(tau / (M_PI / 2.0));
        }
      }
      insert_panel_cuts(bounds, cuts);
    }
    for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
      const double hi = bounds[p] * (M_PI / 2.0), lo = bounds[p + 1] * (M_PI / 2.0);
      const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
      for (int i = 0; i < sch.panel_order; ++i) {
        const double tau = mid + half * gx[static_cast<std::size_t>(i)];
        const double wq = half * gw[static_cast<std::size_t>(i)];
        const double t = std::sin(tau);  // |cos(chi)| at distance tau from the zero
        const double kp = kernel_plus(kern, alpha, t);
        // The four quarters: chi = pi/2 - tau, pi/2 + tau, 3pi/2 - tau, 3pi/2 + tau
        // have cos(chi) = +t, -t, -t, +t and sin(chi) = cos(tau), cos(tau),
        // -cos(tau), -cos(tau).
        const double ct = std::cos(tau);
        total += wq * (kp * C(udir(t, ct)) + sign_minus * kp * C(udir(-t, ct)) +
                       sign_minus * kp * C(udir(-t, -ct)) + kp * C(udir(t, -ct)));
      }
    }
    return total;
  }

  // d = 3: u^ = t z^ + sqrt(1-t^2)(cos(phi) e1 + sin(phi) e2), dS = dt dphi.
  // On the jump axis the density jump is a single polar circle t = |c|;
  // split the graded panels there.
  if (!C.jump_cosines.empty() && C.jump_axis.dim == 3 &&
      std::abs(dot(zhat, C.jump_axis)) >= 1.0 - 1e-9) {
    std::vector<double> cuts;
    for (double c : C.jump_cosines) cuts.push_back(std::abs(c));
    insert_panel_cuts(bounds, cuts);
  }
  const Frame3 fr = adapted_frame(zhat);
  const int na = sch.azimuth;
  const double wphi = 2.0 * M_PI / na;
  std::vector<double> cphi(static_cast<std::size_t>(na)), sphi(static_cast<std::size_t>(na));
  for (int j = 0; j < na; ++j) {
    cphi[static_cast<std::size_t>(j)] = std::cos(2.0 * M_PI * j / na);
    sphi[static_cast<std::size_t>(j)] = std::sin(2.0 * M_PI * j / na);
  }
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    const double hi = bounds[p], lo = bounds[p + 1];
    const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
    for (int i = 0; i < sch.panel_order; ++i) {
      const double t = mid + half * gx[static_cast<std::size_t>(i)];
      const double wt = half * gw[static_cast<std::size_t>(i)];
      const double kp = kernel_plus(kern, alpha, t);
      const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
      double ring = 0.0;
      for (int j = 0; j < na; ++j) {
        const double ex = rho * (cphi[static_cast<std::size_t>(j)] * fr.e1[0] +
                                 sphi[static_cast<std::size_t>(j)] * fr.e2[0]);
        const double ey = rho * (cphi[static_cast<std::size_t>(j)] * fr.e1[1] +
                                 sphi[static_cast<std::size_t>(j)] * fr.e2[1]);
        const double ez = rho * (cphi[static_cast<std::size_t>(j)] * fr.e1[2] +
                                 sphi[static_cast<std::size_t>(j)] * fr.e2[2]);
        const Vec up = make_vec3(t * zhat[0] + ex, t * zhat[1] + ey, t * zhat[2] + ez);
        const Vec um = make_vec3(-t * zhat[0] + ex, -t * zhat[1] + ey, -t * zhat[2] + ez);
        ring += C(up) + sign_minus * C(um);
      }
      total += wt * kp * wphi * ring;
    }
  }
  return total;
}

}  // namespace detail

/// A_alpha(z^) = Int C(u^) |z^.u^|^alpha dS  (alpha > 0).
inline double a_alpha(const AngularFunction& C, double alpha, const Vec& zhat,
                      const AngularScheme& sch = {}) {
  if (!(alpha > 0.0)) throw std::invalid_argument("a_alpha: alpha must be > 0");
  return detail::projected_kernel_integral(C, alpha, zhat, detail::ProjectedKernel::AbsPow, sch);
}

/// B_alpha(z^) = Int C(u^) sgn(z^.u^) |z^.u^|^alpha dS  (alpha > 0).
inline double b_alpha(const AngularFunction& C, double alpha, const Vec& zhat,
                      const AngularScheme& sch = {}) {
  if (!(alpha > 0.0)) throw std::invalid_argument("b_alpha: alpha must be > 0");
  return detail::projected_kernel_integral(C, alpha, zhat, detail::ProjectedKernel::SignedAbsPow,
                                           sch);
}

/// D_alpha(z^) = Int C(u^) (z^.u^)^alpha ln|z^.u^| dS, alpha in {1, 2}.
inline double d_alpha(const AngularFunction& C, double alpha, const Vec& zhat,
                      const AngularScheme& sch = {}) {
  if (!(alpha == 1.0 || alpha == 2.0))
    throw std::invalid_argument("d_alpha: only alpha = 1 or alpha = 2 occur in the singular laws");
  return detail::projected_kernel_integral(C, alpha, zhat, detail::ProjectedKernel::PowLog, sch);
}

/// beta_alpha(z^) = B_alpha / A_alpha, the asymmetry ratio, in [-1, 1].
inline double skewness_ratio(const AngularFunction& C, double alpha, const Vec& zhat,
                             const AngularScheme& sch = {}) {
  const double a = a_alpha(C, alpha, zhat, sch);
  if (!(a > 0.0)) throw std::domain_error("skewness_ratio: A_alpha vanishes");
  return b_alpha(C, alpha, zhat, sch) / a;
}

/// v = -Int C(u^) u^ dS  (satisfies B_1(z^) = -z^.v).
inline Vec drift_vector_v(const AngularFunction& C, int n_polar = 0, int n_azimuth = 0) {
  const SphereQuadrature q = SphereQuadrature::build(C.dim, n_polar, n_azimuth);
  Vec v = make_vec(C.dim);
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double cw = -q.weights[k] * C(q.nodes[k]);
    for (int i = 0; i < C.dim; ++i) v[i] += cw * q.nodes[k][i];
  }
  return v;
}

/// M = (1/2) Int C(u^) u^ u^^T dS  (satisfies A_2(z^) = 2 z^^T M z^).
inline Mat gaussian_matrix_m(const AngularFunction& C, int n_polar = 0, int n_azimuth = 0) {
  const SphereQuadrature q = SphereQuadrature::build(C.dim, n_polar, n_azimuth);
  Mat m = make_mat(C.dim);
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double cw = 0.5 * q.weights[k] * C(q.nodes[k]);
    for (int i = 0; i < C.dim; ++i)
      for (int j = 0; j < C.dim; ++j) m(i, j) += cw * q.nodes[k][i] * q.nodes[k][j];
  }
  return m;
}

}  // namespace stablesum
