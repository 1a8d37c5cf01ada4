#pragma once

// Renormalization schemes for the N-particle resultant force.
//
// The distributional limits exist only after an N-dependent scale a_N (and,
// in the classical-limit mode, a shift b_N) is applied.  Five interlocking
// scheme families are implemented:
//
//   * classical-limit (a_N, b_N) per regime of alpha,
//   * the scale conditions on a_N alone, split by regime:
//       fluctuation   |a_N| = (K/N)^{1/alpha}        (0 < alpha < 1)
//       singular      -N|a_N| ln|a_N| = K            (alpha = 1)
//       Vlasov        |a_N| = K/N                    (alpha > 1)
//   * the scale pair (T_N, L_N) with x = T_N^2/L_N playing |a_N|^{delta-slot},
//   * the physical pair (kappa_N, L_N) with a_N = kappa_N / L_N^delta,
//   * the zero-mean high-alpha fluctuation conditions
//       N|a_N|^alpha = K (1 <= alpha < 2),  -N|a_N|^2 ln|a_N| = K (alpha = 2),
//       N|a_N|^2 = K (alpha > 2).
//
// K is an arbitrary positive constant (default 1 in the CLI).

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "stablesum/geometry.hpp"

namespace stablesum {

inline constexpr double kSingularDomainFactor = 2.0 / 0.6931471805599453;  // 2/ln 2

/// Root of -a ln a = K/N on the ascending branch a in (0, 1/e).
///
/// The map a -> -a ln a increases from 0 to its maximum 1/e at a = 1/e and
/// decreases beyond, so K/N < 1/e gives two roots; the scheme root is the
/// small (ascending-branch) one, which vanishes as N grows.  The admissible
/// domain is the stricter N >= (2/ln 2) K, i.e. K/N <= (ln 2)/2, which caps
/// the scheme root at 1/4 (at equality -(1/4) ln(1/4) = (ln 2)/2 exactly)
/// and keeps the large root outside the search bracket [0, 1/2].  Bisection
/// (bracket preserved) plus Newton polish; residual <= 1e-14.
inline double solve_singular(double K, double N) {
  if (!(K > 0.0)) throw std::invalid_argument("solve_singular: K must be > 0");
  if (!(N >= kSingularDomainFactor * K * (1.0 - 1e-14)))
    throw std::domain_error("solve_singular: requires N >= (2/ln2) K");
  const double c = K / N;
  auto f = [c](double a) { return -a * std::log(a) - c; };
  double lo = 1e-300, hi = 0.5;
  if (f(hi) < 0.0) hi = 0.5000000000000002;  // guard rounding at the domain edge
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double fa = f(a);
    const double da = -(std::log(a) + 1.0);  // f'(a)
    if (da == 0.0) break;
    double next = a - fa / da;
    if (next <= lo || next >= hi) break;  // keep the bracket
    a = next;
  }
  return a;
}

enum class SchemeKind {
  Clt,
  FluctuationAN,
  SingularAN,
  VlasovAN,
  Scale,
  PhysicalFixedSize,
  PhysicalFixedForce,
  FluctuationHighAlpha,
};

inline const char* scheme_kind_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::Clt: return "clt";
    case SchemeKind::FluctuationAN: return "fluctuation";
    case SchemeKind::SingularAN: return "singular";
    case SchemeKind::VlasovAN: return "vlasov";
    case SchemeKind::Scale: return "scale";
    case SchemeKind::PhysicalFixedSize: return "physical_fixed_size";
    case SchemeKind::PhysicalFixedForce: return "physical_fixed_force";
    case SchemeKind::FluctuationHighAlpha: return "fluctuation_high";
  }
  return "?";
}

struct RenormScheme {
  SchemeKind kind = SchemeKind::VlasovAN;
  double alpha = 2.0;     // may be +infinity (delta = 0 convention)
  double K = 1.0;
  // Physical parameters, used by the scale/physical/high-alpha schemes.
  double d = 0.0;
  double nu = 0.0;
  double delta = 0.0;
};

inline bool alpha_is_one(double alpha) { return std::abs(alpha - 1.0) < 1e-9; }
inline bool alpha_is_two(double alpha) { return std::abs(alpha - 2.0) < 1e-9; }

inline void validate(const RenormScheme& s) {
  if (!(s.K > 0.0)) throw std::invalid_argument("RenormScheme: K must be > 0");
  if (!(s.alpha > 0.0)) throw std::invalid_argument("RenormScheme: alpha must be > 0");
  switch (s.kind) {
    case SchemeKind::FluctuationAN:
      if (!(s.alpha < 1.0))
        throw std::invalid_argument("fluctuation a_N scheme requires 0 < alpha < 1");
      break;
    case SchemeKind::SingularAN:
      if (!alpha_is_one(s.alpha))
        throw std::invalid_argument("singular a_N scheme requires alpha = 1");
      break;
    case SchemeKind::VlasovAN:
      if (!(s.alpha > 1.0)) throw std::invalid_argument("Vlasov a_N scheme requires alpha > 1");
      break;
    case SchemeKind::FluctuationHighAlpha:
      if (!(s.alpha >= 1.0 - 1e-12))
        throw std::invalid_argument(
            "high-alpha fluctuation scheme requires alpha >= 1 (zero-mean side condition)");
      break;
    case SchemeKind::Scale:
    case SchemeKind::PhysicalFixedSize:
    case SchemeKind::PhysicalFixedForce: {
      if (!(s.nu > -s.d))
        throw std::invalid_argument("physical scheme requires nu > -d (integrable density)");
      if (s.delta < 0.0) throw std::invalid_argument("physical scheme requires delta >= 0");
      const double implied =
          s.delta == 0.0 ? std::numeric_limits<double>::infinity() : (s.d + s.nu) / s.delta;
      if (std::isfinite(implied) ? std::abs(implied - s.alpha) > 1e-12 : std::isfinite(s.alpha))
        throw std::invalid_argument("physical scheme: alpha must equal (d+nu)/delta");
      break;
    }
    case SchemeKind::Clt:
      break;
  }
}

// ---------------------------------------------------------------------------
// Classical-limit renormalization (a_N, b_N)
// ---------------------------------------------------------------------------

/// Moments feeding b_N.  mean_Fres = N <U> (full mean of the resultant, used
/// for alpha > 1); mean_U_trunc = <U>_{u_c} and v enter only at alpha = 1.
struct CltMoments {
  Vec mean_Fres;
  Vec mean_U_trunc;
  Vec v;
  double u_c = 1.0;
};

struct CltRenorm {
  double a_n = 0.0;
  Vec b_n;
};

/// Classical-limit scale and shift:
///   0 < alpha < 1 : a_N = N^{-1/alpha},        b_N = 0
///   alpha = 1     : a_N = 1/N,
///                   b_N = -<U>_{u_c} + (1 - gamma - ln u_c) v + (ln N) v
///   1 < alpha < 2 : a_N = N^{-1/alpha},        b_N = -a_N <F_res>
///   alpha = 2     : a_N = (N ln N)^{-1/2},     b_N = -a_N <F_res>
///   alpha > 2     : a_N = N^{-1/2},            b_N = -a_N <F_res>
///
/// The alpha = 1 shift carries +v ln N: the raw mean of (1/N) Sum U_i drifts
/// like -v ln N (the truncated mean of a marginal 1-tail grows
/// logarithmically), and b_N must cancel that drift for the shifted sum to
/// converge.
inline CltRenorm clt_renorm(double alpha, long long N, const CltMoments& m) {
  if (N < 1) throw std::invalid_argument("clt_renorm: N must be >= 1");
  const double gamma = 0.57721566490153286061;
  CltRenorm r;
  if (alpha_is_one(alpha)) {
    if (N < 2) throw std::invalid_argument("clt_renorm: alpha = 1 requires N >= 2");
    r.a_n = 1.0 / static_cast<double>(N);
    r.b_n = -1.0 * m.mean_U_trunc + (1.0 - gamma - std::log(m.u_c)) * m.v +
            std::log(static_cast<double>(N)) * m.v;
    return r;
  }
  if (alpha_is_two(alpha)) {
    if (N < 2) throw std::invalid_argument("clt_renorm: alpha = 2 requires N >= 2");
    r.a_n = 1.0 / std::sqrt(static_cast<double>(N) * std::log(static_cast<double>(N)));
  } else if (alpha < 1.0) {
    r.a_n = std::pow(static_cast<double>(N), -1.0 / alpha);
    r.b_n = make_vec(m.mean_Fres.dim);
    return r;
  } else if (alpha < 2.0) {
    r.a_n = std::pow(static_cast<double>(N), -1.0 / alpha);
  } else {  // alpha > 2 (possibly infinite)
    r.a_n = 1.0 / std::sqrt(static_cast<double>(N));
  }
  r.b_n = -r.a_n * m.mean_Fres;
  return r;
}

// ---------------------------------------------------------------------------
// Scale conditions on |a_N| (including the zero-mean high-alpha family)
// ---------------------------------------------------------------------------

/// |a_N| for the fluctuation / singular / Vlasov schemes, and for the
/// zero-mean high-alpha fluctuation conditions:
///   FluctuationAN        (K/N)^{1/alpha}                  (0 < alpha < 1)
///   SingularAN           h(K/N): root of -a ln a = K/N    (alpha = 1)
///   VlasovAN             K/N                              (alpha > 1)
///   FluctuationHighAlpha (K/N)^{1/alpha} (1 <= alpha < 2),
///                        sqrt(h(2K/N))   (alpha = 2),
///                        sqrt(K/N)       (alpha > 2).
inline double a_n_scheme(const RenormScheme& s, long long N) {
  validate(s);
  if (N < 1) throw std::invalid_argument("a_n_scheme: N must be >= 1");
  const double Nf = static_cast<double>(N);
  switch (s.kind) {
    case SchemeKind::FluctuationAN:
      return std::pow(s.K / Nf, 1.0 / s.alpha);
    case SchemeKind::SingularAN:
      return solve_singular(s.K, Nf);
    case SchemeKind::VlasovAN:
      return s.K / Nf;
    case SchemeKind::FluctuationHighAlpha:
      if (alpha_is_two(s.alpha)) return std::sqrt(solve_singular(2.0 * s.K, Nf));
      if (s.alpha < 2.0) return std::pow(s.K / Nf, 1.0 / s.alpha);
      return std::sqrt(s.K / Nf);
    default:
      throw std::invalid_argument("a_n_scheme: scheme has no bare a_N condition");
  }
}

// ---------------------------------------------------------------------------
// Scale pair (T_N, L_N)
// ---------------------------------------------------------------------------

enum class ScaleFix { FixT, FixL };

struct ScaleRenorm {
  double T_n = 1.0;
  double L_n = 1.0;
};

/// With |kappa| = 1, the scale conditions constrain x = T_N^2 / L_N:
///   x^alpha = K/N (fluctuation), -x ln x = K/N (singular), x = K/N (Vlasov);
/// the parameter not fixed by `fix` is solved from x.
inline ScaleRenorm scale_renorm(const RenormScheme& s, long long N, ScaleFix fix) {
  if (s.kind != SchemeKind::Scale) throw std::invalid_argument("scale_renorm: kind must be Scale");
  if (!(s.K > 0.0)) throw std::invalid_argument("scale_renorm: K must be > 0");
  if (N < 1) throw std::invalid_argument("scale_renorm: N must be >= 1");
  const double Nf = static_cast<double>(N);
  double x;
  if (alpha_is_one(s.alpha))
    x = solve_singular(s.K, Nf);
  else if (s.alpha < 1.0)
    x = std::pow(s.K / Nf, 1.0 / s.alpha);
  else
    x = s.K / Nf;
  ScaleRenorm r;
  if (fix == ScaleFix::FixT) {
    r.T_n = 1.0;
    r.L_n = 1.0 / x;
  } else {
    r.L_n = 1.0;
    r.T_n = std::sqrt(x);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Physical pair (kappa_N, L_N), a_N = kappa_N / L_N^delta
// ---------------------------------------------------------------------------

struct PhysicalRenorm {
  double kappa_n = 1.0;  // magnitude |kappa_N|; the force sign q is carried separately
  double L_n = 1.0;
};

/// Fixed size (L_N = 1):
///   |kappa_N| = (K/N)^{delta/(d+nu)}  (fluctuation, alpha < 1)
///   -|kappa_N| ln|kappa_N| = K/N      (singular, alpha = 1)
///   |kappa_N| = K/N                   (Vlasov, alpha > 1; the 1/N force
///                                      constant of mean-field prescriptions)
/// Fixed force (|kappa_N| = 1), solved for L_N:
///   N = K L_N^{d+nu}                  (fluctuation)
///   N = (K/(d+nu)) L_N^{d+nu}/ln L_N  (singular; equivalently L = h(K/N)^{-1/delta})
///   N = K L_N^delta                   (Vlasov)
inline PhysicalRenorm physical_renorm(const RenormScheme& s, long long N) {
  validate(s);
  if (s.kind != SchemeKind::PhysicalFixedSize && s.kind != SchemeKind::PhysicalFixedForce)
    throw std::invalid_argument("physical_renorm: kind must be a physical scheme");
  if (N < 1) throw std::invalid_argument("physical_renorm: N must be >= 1");
  const double Nf = static_cast<double>(N);
  const double dnu = s.d + s.nu;
  PhysicalRenorm r;
  if (s.kind == SchemeKind::PhysicalFixedSize) {
    r.L_n = 1.0;
    if (alpha_is_one(s.alpha))
      r.kappa_n = solve_singular(s.K, Nf);
    else if (s.alpha < 1.0)
      r.kappa_n = std::pow(s.K / Nf, s.delta / dnu);
    else
      r.kappa_n = s.K / Nf;
    return r;
  }
  r.kappa_n = 1.0;
  if (alpha_is_one(s.alpha)) {
    const double a = solve_singular(s.K, Nf);
    r.L_n = std::pow(a, -1.0 / s.delta);
    if (!(r.L_n > 1.0))
      throw std::domain_error("physical_renorm: fixed-force singular needs L_N > 1");
  } else if (s.alpha < 1.0) {
    r.L_n = std::pow(Nf / s.K, 1.0 / dnu);
  } else {
    if (s.delta == 0.0)
      throw std::invalid_argument("physical_renorm: delta = 0 has no fixed-force system size");
    r.L_n = std::pow(Nf / s.K, 1.0 / s.delta);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Zero-mean high-alpha fluctuation conditions
// ---------------------------------------------------------------------------

enum class HighAlphaCase { FixedSize, FixedForce };

struct HighAlphaRenorm {
  std::string condition;  // the defining constraint on |a_N|
  double kappa_n = 1.0;
  double L_n = 1.0;
};

/// Zero-mean fluctuation renormalization for alpha >= 1 (the declared mean of
/// the force must vanish; otherwise the dropped drift term diverges):
///   base condition            fixed size (L=1)        fixed force (|kappa|=1)
///   N|a|^alpha = K (a<2)      |kappa|=(K/N)^{delta/(d+nu)}  L = (N/K)^{1/(d+nu)}
///   -N|a|^2 ln|a| = K (a=2)   |kappa|=sqrt(h(2K/N))    L = h(2K/N)^{-1/(2 delta)}
///   N|a|^2 = K (a>2)          |kappa|=sqrt(K/N)        L = (N/K)^{1/(2 delta)}
/// (In the fixed-force alpha = 2 case the constraint reads
///  N = K L^{2 delta}/(delta ln L); the alpha > 2 case reads N = K L^{2 delta}.)
inline HighAlphaRenorm fluctuation_high_alpha(const RenormScheme& s, long long N,
                                              HighAlphaCase which, bool zero_mean_declared = true) {
  validate(s);
  if (s.kind != SchemeKind::FluctuationHighAlpha)
    throw std::invalid_argument("fluctuation_high_alpha: kind must be FluctuationHighAlpha");
  if (!zero_mean_declared)
    throw std::invalid_argument(
        "fluctuation_high_alpha: requires a declared zero-mean force (<F_N> = 0)");
  if (N < 1) throw std::invalid_argument("fluctuation_high_alpha: N must be >= 1");
  const double Nf = static_cast<double>(N);
  HighAlphaRenorm r;
  const double a = a_n_scheme(s, N);
  if (alpha_is_two(s.alpha))
    r.condition = "-N |a_N|^2 ln|a_N| = K";
  else if (s.alpha < 2.0)
    r.condition = "N |a_N|^alpha = K";
  else
    r.condition = "N |a_N|^2 = K";
  if (which == HighAlphaCase::FixedSize) {
    r.L_n = 1.0;
    r.kappa_n = a;  // a_N = kappa_N / L^delta = kappa_N
  } else {
    r.kappa_n = 1.0;
    if (s.delta == 0.0)
      throw std::invalid_argument("fluctuation_high_alpha: delta = 0 has no fixed-force size");
    r.L_n = std::pow(a, -1.0 / s.delta);
    (void)Nf;
  }
  return r;
}

}  // namespace stablesum
