#pragma once

// Characteristic functions of the limit laws for renormalized force sums.
//
// A single-particle force contribution with an alpha-power tail and angular
// weight C produces, after summation over N particles and renormalization,
// one of five limit families indexed by the regime of alpha:
//
//   StableSub1  0 < alpha < 1   strictly alpha-stable
//   Singular1   alpha = 1       semi-stable family with log-periodic drift
//   Stable12    1 < alpha < 2   centered alpha-stable
//   Singular2   alpha = 2       Gaussian with log-divergent variance scale
//   Gauss       alpha > 2       Gaussian with finite covariance
//
// All characteristic functions are reported through their logarithm
// ln Phi(z); the canonical exponent coefficient Xi_alpha multiplies
// -|z|^alpha (or -|z|^2 above alpha = 2).

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "stablesum/angular.hpp"
#include "stablesum/geometry.hpp"
#include "stablesum/renorm.hpp"

namespace stablesum {

inline constexpr double kPi = 3.14159265358979323846;

enum class Regime { StableSub1, Singular1, Stable12, Singular2, Gauss };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::StableSub1: return "stable_sub1";
    case Regime::Singular1: return "singular_1";
    case Regime::Stable12: return "stable_12";
    case Regime::Singular2: return "singular_2";
    case Regime::Gauss: return "gauss";
  }
  return "?";
}

/// Regime of the tail index.  Integer detection uses a 1e-9 band; alpha may
/// be +infinity (the zero-range-exponent convention), which is Gaussian.
inline Regime classify_regime(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("classify_regime: alpha must be > 0");
  if (std::abs(alpha - 1.0) < 1e-9) return Regime::Singular1;
  if (std::abs(alpha - 2.0) < 1e-9) return Regime::Singular2;
  if (alpha < 1.0) return Regime::StableSub1;
  if (alpha < 2.0) return Regime::Stable12;
  return Regime::Gauss;
}

/// Parameters of a limit law.  `dispersion` is the positive scale multiplying
/// the whole exponent: the canonical lambda of the stable form, or the
/// coupling K of the renormalized force modes.  Optional moment fields are
/// required only by the operations that consume them:
///   mean_U       full single-particle mean <U>                    (alpha > 1 forms)
///   cov_Mbar     covariance Mbar = <U U^T> - <U><U>^T             (alpha > 2 forms)
///   mean_U_trunc truncated mean <U>_{u_c}                         (Xi at alpha = 1)
///   cov_trunc    Mbar_{u_c} = <U U^T>_{u_c} - <U><U>^T            (Xi at alpha = 2)
struct StableLawSpec {
  int dim = 3;
  double alpha = 1.5;
  Regime regime = Regime::Stable12;
  AngularFunction angular;
  double dispersion = 1.0;
  int sign_q = +1;
  double u_c = 1.0;
  std::optional<Vec> mean_U;
  std::optional<Mat> cov_Mbar;
  std::optional<Vec> mean_U_trunc;
  std::optional<Mat> cov_trunc;
  AngularScheme scheme{};
};

inline void validate_spec(const StableLawSpec& s) {
  if (s.dim < 1 || s.dim > 3) throw std::invalid_argument("StableLawSpec: dim must be 1..3");
  if (!(s.alpha > 0.0)) throw std::invalid_argument("StableLawSpec: alpha must be > 0");
  if (!(s.dispersion > 0.0)) throw std::invalid_argument("StableLawSpec: dispersion must be > 0");
  if (!(s.u_c > 0.0)) throw std::invalid_argument("StableLawSpec: u_c must be > 0");
  if (s.sign_q != 1 && s.sign_q != -1)
    throw std::invalid_argument("StableLawSpec: sign_q must be +1 or -1");
  if (s.angular.dim != s.dim) throw std::invalid_argument("StableLawSpec: angular dim mismatch");
  if (s.regime != classify_regime(s.alpha))
    throw std::invalid_argument("StableLawSpec: regime inconsistent with alpha");
}

inline StableLawSpec make_stable_law_spec(int dim, double alpha, AngularFunction angular,
                                          double dispersion = 1.0, int sign_q = +1,
                                          double u_c = 1.0) {
  StableLawSpec s;
  s.dim = dim;
  s.alpha = alpha;
  s.regime = classify_regime(alpha);
  s.angular = std::move(angular);
  s.dispersion = dispersion;
  s.sign_q = sign_q;
  s.u_c = u_c;
  validate_spec(s);
  return s;
}

namespace detail {

/// pi [cos(alpha pi/2) A(zhat) - i sin(alpha pi/2) B(zhat)] / sin(alpha pi),
/// the exponent coefficient of a strictly alpha-stable law before dividing by
/// Gamma(alpha+1).  Valid for non-integer alpha in (0, 2).
inline std::complex<double> stable_tail_coefficient(const AngularFunction& C, double alpha,
                                                    const Vec& zhat, const AngularScheme& sch) {
  const double A = a_alpha(C, alpha, zhat, sch);
  const double B = b_alpha(C, alpha, zhat, sch);
  const double half = 0.5 * alpha * kPi;
  return kPi / std::sin(alpha * kPi) *
         std::complex<double>(std::cos(half) * A, -std::sin(half) * B);
}

inline const Vec& require_mean(const StableLawSpec& s) {
  if (!s.mean_U) throw std::invalid_argument("charfn: mean_U required for alpha > 1");
  return *s.mean_U;
}

inline const Mat& require_cov(const StableLawSpec& s) {
  if (!s.cov_Mbar) throw std::invalid_argument("charfn: cov_Mbar required for alpha > 2");
  return *s.cov_Mbar;
}

}  // namespace detail

/// Canonical exponent coefficient Xi_alpha(z).  For the stable regimes it
/// depends on z only through zhat; at alpha in {1, 2} it carries an explicit
/// -ln|z| from the scale mixing of the singular regimes, so z = 0 is
/// rejected there (and is needed anyway to form zhat).
inline std::complex<double> xi_alpha(const StableLawSpec& s, const Vec& z) {
  validate_spec(s);
  const double zn = norm(z);
  if (!(zn > 0.0)) throw std::invalid_argument("xi_alpha: z must be nonzero");
  const Vec zhat = (1.0 / zn) * z;
  const double gamma = 0.57721566490153286061;
  switch (s.regime) {
    case Regime::StableSub1:
    case Regime::Stable12:
      return detail::stable_tail_coefficient(s.angular, s.alpha, zhat, s.scheme) /
             std::tgamma(s.alpha + 1.0);
    case Regime::Singular1: {
      if (!s.mean_U_trunc)
        throw std::invalid_argument("xi_alpha: mean_U_trunc required at alpha = 1");
      const double A = a_alpha(s.angular, 1.0, zhat, s.scheme);
      const double B = b_alpha(s.angular, 1.0, zhat, s.scheme);
      const double D = d_alpha(s.angular, 1.0, zhat, s.scheme);
      const double re = 0.5 * kPi * A;
      const double im = dot(zhat, *s.mean_U_trunc) + B * (1.0 - gamma - std::log(s.u_c)) -
                        B * std::log(zn) - D;
      return {re, -im};
    }
    case Regime::Singular2: {
      if (!s.cov_trunc) throw std::invalid_argument("xi_alpha: cov_trunc required at alpha = 2");
      const double A = a_alpha(s.angular, 2.0, zhat, s.scheme);
      const double B = b_alpha(s.angular, 2.0, zhat, s.scheme);
      const double D = d_alpha(s.angular, 2.0, zhat, s.scheme);
      const double re = quadratic_form(*s.cov_trunc, zhat) +
                        A * (1.5 - gamma - std::log(s.u_c)) - D - A * std::log(zn);
      return 0.5 * std::complex<double>(re, 0.5 * kPi * B);
    }
    case Regime::Gauss:
      return {0.5 * quadratic_form(detail::require_cov(s), zhat), 0.0};
  }
  throw std::logic_error("xi_alpha: unreachable");
}

// ---------------------------------------------------------------------------
// Levy-Khintchine form, stability, marginals
// ---------------------------------------------------------------------------

/// Characteristic function of the alpha-stable law in skewness form,
///   Phi(z) = exp( -lambda A(zhat) |z|^alpha / Gamma(1+alpha)
///                 * [1 - i beta(zhat) tan(alpha pi/2)] ),  beta = B/A,
/// for alpha in (0, 2].  At alpha = 1 the tangent diverges and no skewness
/// form exists; the call is routed to the lambda-fold convolution power of
/// the semi-stable family, exp(lambda ln Phi_1(z)).  At alpha = 2 the
/// skewness factor is exactly 1 (the tangent term vanishes identically, not
/// merely to rounding).
inline std::complex<double> levy_khintchine_cf(const StableLawSpec& s, const Vec& z) {
  validate_spec(s);
  if (!(s.alpha <= 2.0 + 1e-9))
    throw std::invalid_argument("levy_khintchine_cf: requires alpha <= 2");
  const double zn = norm(z);
  if (!(zn > 0.0)) return {1.0, 0.0};
  const Vec zhat = (1.0 / zn) * z;
  if (s.regime == Regime::Singular1) {
    const double A = a_alpha(s.angular, 1.0, zhat, s.scheme);
    const double D = d_alpha(s.angular, 1.0, zhat, s.scheme);
    const Vec v = drift_vector_v(s.angular);
    const std::complex<double> lcf(-0.5 * kPi * A * zn, dot(z, v) * std::log(zn) - zn * D);
    return std::exp(s.dispersion * lcf);
  }
  const double A = a_alpha(s.angular, s.alpha, zhat, s.scheme);
  const double mag = s.dispersion * A * std::pow(zn, s.alpha) / std::tgamma(1.0 + s.alpha);
  std::complex<double> skew(1.0, 0.0);
  if (s.regime != Regime::Singular2 && A > 0.0) {
    const double beta = b_alpha(s.angular, s.alpha, zhat, s.scheme) / A;
    skew = {1.0, -beta * std::tan(0.5 * s.alpha * kPi)};
  }
  return std::exp(-mag * skew);
}

/// Dispersion of the weighted sum a_1 X_1 + a_2 X_2 of independent copies
/// from the same alpha family: lambda = lambda_1 a_1^alpha + lambda_2 a_2^alpha.
inline double stability_combine(double lambda1, double a1, double lambda2, double a2,
                                double alpha) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw std::invalid_argument("stability_combine: dispersions must be > 0");
  if (a1 < 0.0 || a2 < 0.0)
    throw std::invalid_argument("stability_combine: scale factors must be >= 0");
  if (!(alpha > 0.0) || !(alpha <= 2.0 + 1e-9))
    throw std::invalid_argument("stability_combine: alpha must lie in (0, 2]");
  return lambda1 * std::pow(a1, alpha) + lambda2 * std::pow(a2, alpha);
}

/// Characteristic function of the k-th component: the skewness form evaluated
/// on the k-th axis.  Rejected at alpha = 1, where the one-dimensional
/// marginal of the semi-stable family is not an alpha-stable law.
inline std::complex<double> marginal_cf(const StableLawSpec& s, int k, double z_k) {
  if (k < 0 || k >= s.dim) throw std::invalid_argument("marginal_cf: axis out of range");
  if (classify_regime(s.alpha) == Regime::Singular1)
    throw std::invalid_argument("marginal_cf: alpha = 1 marginals are not stable-form");
  Vec z = make_vec(s.dim);
  z[k] = z_k;
  return levy_khintchine_cf(s, z);
}

// ---------------------------------------------------------------------------
// Limit laws of the renormalized force sum
// ---------------------------------------------------------------------------

enum class LimitMode { Clt, Vlasov, Fluctuation };

inline const char* limit_mode_name(LimitMode m) {
  switch (m) {
    case LimitMode::Clt: return "clt";
    case LimitMode::Vlasov: return "vlasov";
    case LimitMode::Fluctuation: return "fluctuation";
  }
  return "?";
}

/// Scale sigma_N of the decomposition F_N ~ drift + sigma_N * (limit law).
///   Clt mode reports the *growing* normalization 1/a_N of the bare sum:
///     N^{1/alpha} (alpha < 1 and 1 < alpha < 2), N (alpha = 1),
///     sqrt(N ln N) (alpha = 2), sqrt(N) (alpha > 2).
///   Vlasov mode (kappa_N = q K/N), alpha >= 1 only:
///     N h(K/N) (alpha = 1), K N^{(1-alpha)/alpha} (1 < alpha < 2),
///     K sqrt(ln N / N) (alpha = 2), K / sqrt(N) (alpha > 2).
///   Fluctuation mode (zero-mean condition for alpha >= 1): K^{1/alpha}
///     (alpha < 2) and sqrt(K) (alpha >= 2), independent of N.
/// Conventions for the Gaussian-type scales: at alpha = 2 sigma pairs with
/// exponent -sigma^2 z^T M z; for alpha > 2 with -(sigma^2/2) z^T Mbar z.
inline double sigma_n(double alpha, LimitMode mode, double K, long long N) {
  const Regime r = classify_regime(alpha);
  const double Nf = static_cast<double>(N);
  switch (mode) {
    case LimitMode::Clt:
      if (N < 1) throw std::invalid_argument("sigma_n: N must be >= 1");
      switch (r) {
        case Regime::StableSub1:
        case Regime::Stable12: return std::pow(Nf, 1.0 / alpha);
        case Regime::Singular1:
          if (N < 2) throw std::invalid_argument("sigma_n: alpha = 1 requires N >= 2");
          return Nf;
        case Regime::Singular2:
          if (N < 2) throw std::invalid_argument("sigma_n: alpha = 2 requires N >= 2");
          return std::sqrt(Nf * std::log(Nf));
        case Regime::Gauss: return std::sqrt(Nf);
      }
      break;
    case LimitMode::Vlasov:
      if (N < 1) throw std::invalid_argument("sigma_n: N must be >= 1");
      switch (r) {
        case Regime::StableSub1:
          throw std::invalid_argument("sigma_n: Vlasov mode requires alpha >= 1");
        case Regime::Singular1: return Nf * solve_singular(K, Nf);
        case Regime::Stable12: return K * std::pow(Nf, (1.0 - alpha) / alpha);
        case Regime::Singular2:
          if (N < 2) throw std::invalid_argument("sigma_n: alpha = 2 requires N >= 2");
          return K * std::sqrt(std::log(Nf) / Nf);
        case Regime::Gauss: return K / std::sqrt(Nf);
      }
      break;
    case LimitMode::Fluctuation:
      if (r == Regime::Singular2 || r == Regime::Gauss) return std::sqrt(K);
      return std::pow(K, 1.0 / alpha);
  }
  throw std::logic_error("sigma_n: unreachable");
}

namespace detail {

/// Fluctuation mode at alpha >= 1 is valid only for a zero-mean force: a
/// declared nonzero mean is rejected, and an undeclared mean is accepted only
/// when the angular weight is even (which forces the mean to vanish).
inline void check_zero_mean(const StableLawSpec& s) {
  if (s.regime == Regime::StableSub1) return;
  if (s.mean_U) {
    if (norm(*s.mean_U) > 1e-12)
      throw std::invalid_argument("fluctuation mode: declared mean_U must be zero for alpha >= 1");
    return;
  }
  if (!s.angular.symmetric)
    throw std::invalid_argument(
        "fluctuation mode: alpha >= 1 needs a zero-mean declaration (set mean_U = 0 or use an "
        "even angular weight)");
}

}  // namespace detail

/// ln Phi(z) of the limit law of the renormalized force sum.
///
/// Clt mode (scale a_N, shift b_N; N-free limit):
///   alpha in (0,1) u (1,2): -|z|^alpha G_alpha(zhat)/Gamma(alpha+1) with
///     G_alpha = pi [cos(alpha pi/2) A - i sin(alpha pi/2) B]/sin(alpha pi)
///     (centered by b_N when alpha > 1);
///   alpha = 1: -(pi/2) A_1(zhat) |z| + i (z.v) ln|z| - i |z| D_1(zhat),
///     the semi-stable family with drift vector v = -Int C(u) u dS;
///   alpha = 2: -(1/2) z^T M z, M = (1/2) Int C(u) u u^T dS;
///   alpha > 2: -(1/2) z^T Mbar z.
///
/// Vlasov mode (kappa_N = q K/N, alpha >= 1; finite-N law with q = sign_q):
///   alpha = 1: -i q K (z.v) - sigma_N (pi/2) A_1(zhat) |z|;
///   1 < alpha < 2: i q K (z.<U>) - sigma_N^alpha |z|^alpha G_alpha(q zhat)/Gamma(alpha+1);
///   alpha = 2: i q K (z.<U>) - (1/2) sigma_N^2 z^T M z;
///   alpha > 2: i q K (z.<U>) - (1/2) sigma_N^2 z^T Mbar z.
///
/// Fluctuation mode (zero-mean condition at alpha >= 1; N-free limit):
///   alpha in (0,1) u (1,2): -K |z|^alpha G_alpha(q zhat)/Gamma(alpha+1);
///   alpha = 1: -K (pi/2) A_1(zhat) |z|;
///   alpha = 2: -K z^T M z;   alpha > 2: -(K/2) z^T Mbar z.
inline std::complex<double> limit_log_cf(const StableLawSpec& s, const Vec& z,
                                         LimitMode mode = LimitMode::Clt, long long N = 0) {
  validate_spec(s);
  const double zn = norm(z);
  if (!(zn > 0.0)) return {0.0, 0.0};
  const Vec zhat = (1.0 / zn) * z;
  const double K = s.dispersion;
  const double q = static_cast<double>(s.sign_q);
  const std::complex<double> i1(0.0, 1.0);

  switch (mode) {
    case LimitMode::Clt: {
      switch (s.regime) {
        case Regime::StableSub1:
        case Regime::Stable12:
          return -std::pow(zn, s.alpha) *
                 detail::stable_tail_coefficient(s.angular, s.alpha, zhat, s.scheme) /
                 std::tgamma(s.alpha + 1.0);
        case Regime::Singular1: {
          const double A = a_alpha(s.angular, 1.0, zhat, s.scheme);
          const double D = d_alpha(s.angular, 1.0, zhat, s.scheme);
          const Vec v = drift_vector_v(s.angular);
          return {-0.5 * kPi * A * zn, dot(z, v) * std::log(zn) - zn * D};
        }
        case Regime::Singular2:
          return {-0.5 * quadratic_form(gaussian_matrix_m(s.angular), z), 0.0};
        case Regime::Gauss:
          return {-0.5 * quadratic_form(detail::require_cov(s), z), 0.0};
      }
      break;
    }
    case LimitMode::Vlasov: {
      if (N < 1) throw std::invalid_argument("limit_log_cf: Vlasov mode needs N >= 1");
      const double sig = sigma_n(s.alpha, LimitMode::Vlasov, K, N);
      switch (s.regime) {
        case Regime::StableSub1:
          throw std::invalid_argument("limit_log_cf: Vlasov mode requires alpha >= 1");
        case Regime::Singular1: {
          const double A = a_alpha(s.angular, 1.0, zhat, s.scheme);
          const Vec v = drift_vector_v(s.angular);
          return -i1 * (q * K * dot(z, v)) - std::complex<double>(sig * 0.5 * kPi * A * zn, 0.0);
        }
        case Regime::Stable12:
          return i1 * (q * K * dot(z, detail::require_mean(s))) -
                 std::pow(sig * zn, s.alpha) *
                     detail::stable_tail_coefficient(s.angular, s.alpha, q * zhat, s.scheme) /
                     std::tgamma(s.alpha + 1.0);
        case Regime::Singular2:
          return i1 * (q * K * dot(z, detail::require_mean(s))) -
                 std::complex<double>(
                     0.5 * sig * sig * quadratic_form(gaussian_matrix_m(s.angular), z), 0.0);
        case Regime::Gauss:
          return i1 * (q * K * dot(z, detail::require_mean(s))) -
                 std::complex<double>(0.5 * sig * sig * quadratic_form(detail::require_cov(s), z),
                                      0.0);
      }
      break;
    }
    case LimitMode::Fluctuation: {
      detail::check_zero_mean(s);
      switch (s.regime) {
        case Regime::StableSub1:
        case Regime::Stable12:
          return -K * std::pow(zn, s.alpha) *
                 detail::stable_tail_coefficient(s.angular, s.alpha, q * zhat, s.scheme) /
                 std::tgamma(s.alpha + 1.0);
        case Regime::Singular1:
          return {-K * 0.5 * kPi * a_alpha(s.angular, 1.0, zhat, s.scheme) * zn, 0.0};
        case Regime::Singular2:
          return {-K * quadratic_form(gaussian_matrix_m(s.angular), z), 0.0};
        case Regime::Gauss:
          return {-0.5 * K * quadratic_form(detail::require_cov(s), z), 0.0};
      }
      break;
    }
  }
  throw std::logic_error("limit_log_cf: unreachable");
}

// ---------------------------------------------------------------------------
// Drift / scale / law decomposition of the bare sum
// ---------------------------------------------------------------------------

struct AsymptoticDecomposition {
  Vec drift;
  double sigma = 1.0;
  std::string law;  // family tag: S_alpha, S_1^(i), S_2*, S_2
};

inline std::string law_tag(Regime r) {
  switch (r) {
    case Regime::StableSub1:
    case Regime::Stable12: return "S_alpha";
    case Regime::Singular1: return "S_1^(i)";
    case Regime::Singular2: return "S_2*";
    case Regime::Gauss: return "S_2";
  }
  return "?";
}

/// Leading decomposition F_N ~ drift_N + sigma_N Y with Y from the family tag.
///   Clt (bare sum Sum U_i): drift 0 (alpha < 1), -(N ln N) v (alpha = 1),
///     N <U> (alpha > 1); sigma_N as in sigma_n(Clt).
///   Vlasov: drift -q K v (alpha = 1), q K <U> (alpha > 1).
///   Fluctuation: drift 0 (zero-mean condition at alpha >= 1).
inline AsymptoticDecomposition asymptotic_decomposition(const StableLawSpec& s, long long N,
                                                        LimitMode mode) {
  validate_spec(s);
  AsymptoticDecomposition out;
  out.sigma = sigma_n(s.alpha, mode, s.dispersion, N);
  out.law = law_tag(s.regime);
  out.drift = make_vec(s.dim);
  const double q = static_cast<double>(s.sign_q);
  const double K = s.dispersion;
  switch (mode) {
    case LimitMode::Clt:
      if (s.regime == Regime::Singular1) {
        const double Nf = static_cast<double>(N);
        out.drift = (-Nf * std::log(Nf)) * drift_vector_v(s.angular);
      } else if (s.alpha > 1.0) {
        out.drift = static_cast<double>(N) * detail::require_mean(s);
      }
      break;
    case LimitMode::Vlasov:
      if (s.regime == Regime::StableSub1)
        throw std::invalid_argument("asymptotic_decomposition: Vlasov requires alpha >= 1");
      if (s.regime == Regime::Singular1)
        out.drift = (-q * K) * drift_vector_v(s.angular);
      else
        out.drift = (q * K) * detail::require_mean(s);
      break;
    case LimitMode::Fluctuation:
      detail::check_zero_mean(s);
      break;
  }
  return out;
}

}  // namespace stablesum
