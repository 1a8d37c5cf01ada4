#pragma once

// The basic tail integral
//
//   J_alpha(z) = Int_R^inf e^{izy} / y^{alpha+1} dy,   alpha > 0, R > 0,
//
// in closed form, together with the non-analytic kernels T_alpha(s) that carry
// the same |s|^alpha / s^alpha ln|s| structure with the cutoff playing u_c.
//
// Closed forms:
//   non-integer alpha in (0,2):
//     J = Sum_{k>=0} R^{k-alpha} (iz)^k / (k! (alpha-k))
//         - [pi/Gamma(alpha+1)] [cos(alpha pi/2) - i sgn(z) sin(alpha pi/2)]
//           / sin(alpha pi) * |z|^alpha
//     (the k-th analytic coefficient keeps the signed denominator alpha-k,
//      which is what the term-wise continuation of Int_0^R e^{izy} y^{-alpha-1}
//      produces; k < alpha terms are positive, k > alpha terms negative).
//   integer alpha in {1,2}, z > 0:
//     E(z)   = -gamma - ln R - ln z + i pi/2 - Sum_{m>=1} (izR)^m / (m m!)
//     J_1(z) = e^{izR}/R + (iz) E(z)
//     J_2(z) = e^{izR}(1 + izR)/(2R^2) + ((iz)^2/2) E(z)
//     (E is the exponential-integral series of Int_R^inf e^{izy}/y dy; its
//      real/imaginary parts are the classical Ci/Si expansions).
//   z < 0 by conjugate reflection, z = 0 exactly R^{-alpha}/alpha.
//
// The alternating series loses ~|z|R/ln(10) digits to cancellation, so the
// closed form is restricted to |z| R <= 20 (long double accumulation keeps
// ~10 significant digits at the boundary) and silently delegates to the
// quadrature oracle beyond.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "stablesum/geometry.hpp"

namespace stablesum {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct TailIntegralParams {
  double alpha = 1.5;
  double R = 1.0;             // lower cutoff of the tail integral (plays u_c)
  int series_terms = 120;     // truncation order of the analytic series
  double gamma_euler = kEulerGamma;
};

inline void validate(const TailIntegralParams& p) {
  if (!(p.alpha > 0.0)) throw std::invalid_argument("TailIntegralParams: alpha must be > 0");
  if (!(p.R > 0.0)) throw std::invalid_argument("TailIntegralParams: R must be > 0");
  if (p.series_terms < static_cast<int>(std::ceil(p.alpha)) + 10)
    throw std::invalid_argument("TailIntegralParams: series_terms must be >= ceil(alpha)+10");
}

/// True when alpha is within 1e-9 of an integer (routes to the log branch).
inline bool is_integer_alpha(double alpha, long long* which = nullptr) {
  const long long n = std::llround(alpha);
  if (std::abs(alpha - static_cast<double>(n)) < 1e-9) {
    if (which) *which = n;
    return true;
  }
  return false;
}

/// Near-integer alpha in (1e-9, 1e-4) of an integer: the generic formula is
/// badly conditioned (sin(alpha pi) ~ 0 cancels against the series pole);
/// callers may want to surface a warning.
inline bool near_integer_conditioning(double alpha) {
  const double d = std::abs(alpha - std::round(alpha));
  return d >= 1e-9 && d < 1e-4;
}

namespace detail {

using cld = std::complex<long double>;

/// E(s) = Int_R^inf e^{isy}/y dy for s > 0, via the Ci/Si-type series.
inline cld exp_integral_series(long double s, long double R, int terms) {
  const cld isr(0.0L, s * R);
  cld sum = 0.0L;  // Sum_{m>=1} (isR)^m/(m m!)
  cld pw = 1.0L;   // (isR)^m / m!
  for (int m = 1; m <= terms; ++m) {
    pw *= isr / static_cast<long double>(m);
    sum += pw / static_cast<long double>(m);
  }
  return cld(-static_cast<long double>(kEulerGamma) - std::log(R) - std::log(s),
             static_cast<long double>(M_PI) / 2.0L) -
         sum;
}

inline std::complex<double> j_alpha_closed_positive(const TailIntegralParams& p, double z) {
  // z > 0 assumed.
  const long double a = p.alpha, R = p.R, s = z;
  long long n = 0;
  if (is_integer_alpha(p.alpha, &n)) {
    const cld E = exp_integral_series(s, R, p.series_terms);
    const cld isr(0.0L, s * R);
    const cld eisr = std::exp(isr);
    const cld is(0.0L, s);
    cld J;
    if (n == 1) {
      J = eisr / R + is * E;
    } else {  // n == 2
      J = eisr * (1.0L + isr) / (2.0L * R * R) + (is * is / 2.0L) * E;
    }
    return {static_cast<double>(J.real()), static_cast<double>(J.imag())};
  }
  // Non-integer branch: analytic series with signed denominators + |z|^alpha term.
  const cld isR(0.0L, s * R);
  cld series = 0.0L;
  cld pw = 1.0L;  // (is)^k R^k / k!
  const long double Rma = std::pow(R, -a);
  for (int k = 0; k <= p.series_terms; ++k) {
    series += pw * (Rma / (a - static_cast<long double>(k)));
    pw *= isR / static_cast<long double>(k + 1);
  }
  const long double half = a * static_cast<long double>(M_PI) / 2.0L;
  const long double pref =
      static_cast<long double>(M_PI) / (std::tgamma(a + 1.0L) * std::sin(a * static_cast<long double>(M_PI)));
  const cld nonanalytic = -pref * cld(std::cos(half), -std::sin(half)) * std::pow(s, a);
  const cld J = series + nonanalytic;
  return {static_cast<double>(J.real()), static_cast<double>(J.imag())};
}

}  // namespace detail

std::complex<double> j_alpha_oracle(const TailIntegralParams& params, double z);

/// Closed-form J_alpha(z).  Domain: non-integer alpha in (0,2) or alpha in
/// {1,2}; other integers and everything above 2 are rejected (the alpha > 2
/// regime never needs J and only the quadrature oracle serves it).
inline std::complex<double> j_alpha(const TailIntegralParams& params, double z) {
  validate(params);
  long long n = 0;
  const bool is_int = is_integer_alpha(params.alpha, &n);
  if (is_int && n != 1 && n != 2)
    throw std::invalid_argument("j_alpha: integer alpha outside {1,2} has no closed form here");
  if (!is_int && params.alpha > 2.0)
    throw std::invalid_argument("j_alpha: alpha > 2 is oracle-only (use j_alpha_oracle)");
  if (z == 0.0) return {std::pow(params.R, -params.alpha) / params.alpha, 0.0};
  if (std::abs(z) * params.R > 20.0) return j_alpha_oracle(params, z);  // cancellation guard
  const std::complex<double> Jp = detail::j_alpha_closed_positive(params, std::abs(z));
  return z > 0.0 ? Jp : std::conj(Jp);
}

/// Non-analytic kernel T_alpha(s) (cutoff u_c):
///   non-integer alpha: -pi |s|^alpha [cos(a pi/2) - i sgn(s) sin(a pi/2)]
///                      / (Gamma(alpha+1) sin(alpha pi))
///   alpha = 1: -(pi/2)|s| + i s (1 - gamma - ln u_c) - i s ln|s|
///   alpha = 2: -i(pi/4) s|s| - (s^2/2) [(3/2 - gamma - ln u_c) - ln|s|]
/// The integer forms are exactly the |s|-homogeneous package of J_alpha with
/// R -> u_c (f_alpha plus the -(is)^alpha ln|s| / alpha! term), which is what
/// makes the alpha = 2 log sign a minus inside the bracket.
inline std::complex<double> t_alpha(double alpha, double u_c, double s) {
  if (!(alpha > 0.0)) throw std::invalid_argument("t_alpha: alpha must be > 0");
  if (alpha > 2.0 + 1e-9)
    throw std::invalid_argument(
        "t_alpha: alpha must be <= 2 (the compensated integral diverges above)");
  if (!(u_c > 0.0)) throw std::invalid_argument("t_alpha: u_c must be > 0");
  long long n = 0;
  if (is_integer_alpha(alpha, &n)) {
    if (n != 1 && n != 2)
      throw std::invalid_argument("t_alpha: integer alpha outside {1,2} rejected");
    if (s == 0.0) return {0.0, 0.0};
    if (n == 1) {
      return {-(M_PI / 2.0) * std::abs(s),
              s * (1.0 - kEulerGamma - std::log(u_c)) - s * std::log(std::abs(s))};
    }
    return {-(s * s / 2.0) * ((1.5 - kEulerGamma - std::log(u_c)) - std::log(std::abs(s))),
            -(M_PI / 4.0) * s * std::abs(s)};
  }
  if (s == 0.0) return {0.0, 0.0};
  const double mag = M_PI * std::pow(std::abs(s), alpha) /
                     (std::tgamma(alpha + 1.0) * std::sin(alpha * M_PI));
  const double half = alpha * M_PI / 2.0;
  const double sg = (s > 0.0) ? 1.0 : -1.0;
  return {-mag * std::cos(half), mag * sg * std::sin(half)};
}

// ---------------------------------------------------------------------------
// Quadrature oracle
// ---------------------------------------------------------------------------

namespace detail {

/// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr double kGK15X[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK15WK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
  std::complex<double> kronrod;
  double err;
};

template <class F>
GkEstimate gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> kr = 0.0, gs = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGK15X[i];
    const std::complex<double> fp = f(mid + dx);
    const std::complex<double> fm = (i < 7) ? f(mid - dx) : 0.0;  // center counted once
    const std::complex<double> both = (i < 7) ? fp + fm : fp;
    kr += kGK15WK[i] * both;
    if (i % 2 == 1) gs += kGK15WG[i / 2] * both;  // Gauss points sit at odd Kronrod indices
  }
  kr *= half;
  gs *= half;
  return {kr, std::abs(kr - gs)};
}

template <class F>
std::complex<double> adaptive_gk(const F& f, double a, double b, double tol, int depth,
                                 long long& budget) {
  if (--budget < 0)
    throw std::runtime_error("j_alpha_oracle: adaptive refinement did not converge");
  const GkEstimate e = gk15(f, a, b);
  if (e.err <= tol || depth >= 48) return e.kronrod;
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, 0.5 * tol, depth + 1, budget) +
         adaptive_gk(f, mid, b, 0.5 * tol, depth + 1, budget);
}

}  // namespace detail

/// Independent evaluation of J_alpha(z) for any alpha > 0: adaptive
/// Gauss-Kronrod panels on [R, T] with T ~ 60/|z| (so the remaining phase is
/// deep in the asymptotic zone) plus the integration-by-parts tail
///
///   Int_T^inf e^{izy} y^{-alpha-1} dy
///     = -e^{izT} Sum_m (alpha+1)_m T^{-alpha-1-m} / (iz)^{m+1},
///
/// truncated at its smallest term (error ~ e^{-|z|T}).  Accuracy target 1e-9.
inline std::complex<double> j_alpha_oracle(const TailIntegralParams& params, double z) {
  if (!(params.alpha > 0.0)) throw std::invalid_argument("j_alpha_oracle: alpha must be > 0");
  if (!(params.R > 0.0)) throw std::invalid_argument("j_alpha_oracle: R must be > 0");
  const double a = params.alpha, R = params.R;
  if (z == 0.0) return {std::pow(R, -a) / a, 0.0};
  const double s = std::abs(z);

  double T = std::max(R, 60.0 / s);
  std::complex<double> numeric = 0.0;
  if (T > R) {
    const auto f = [a, s](double y) {
      return std::exp(std::complex<double>(0.0, s * y)) * std::pow(y, -a - 1.0);
    };
    const double scale = std::pow(R, -a) / a;  // |J| never exceeds this
    long long budget = 4'000'000;
    // Geometric panels R, 2R, 4R, ..., T keep each panel's relative phase span bounded.
    double lo = R;
    while (lo < T) {
      const double hi = std::min(2.0 * lo, T);
      numeric += detail::adaptive_gk(f, lo, hi, 1e-13 * scale, 0, budget);
      lo = hi;
    }
  } else {
    T = R;  // |z| R >= 60: asymptotic series applies from the cutoff itself
  }

  // Tail by parts: the terms shrink until m ~ |z|T - alpha and then diverge;
  // truncate just before the smallest term, so the error is of its size
  // (~ (|z|T)^{-|z|T} territory for |z|T = 60).
  const std::complex<double> iz(0.0, s);
  const std::complex<double> eT = std::exp(std::complex<double>(0.0, s * T));
  std::complex<double> term = std::pow(T, -a - 1.0) / iz;  // m = 0
  std::complex<double> tail = term;
  double prev_mag = std::abs(term);
  const double floor_mag = 1e-18 * std::pow(R, -a) / a;
  for (int m = 1; m <= 400; ++m) {
    term *= (a + m) / (T * iz);
    const double mag = std::abs(term);
    if (mag >= prev_mag) break;  // past the minimum term: stop, do not add
    tail += term;
    prev_mag = mag;
    if (mag < floor_mag) break;
  }
  const std::complex<double> Jp = numeric - eT * tail;
  return z > 0.0 ? Jp : std::conj(Jp);
}

}  // namespace stablesum
