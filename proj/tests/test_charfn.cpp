// Characteristic functions: regime classification, the canonical exponent
// coefficient Xi, the skewness (Levy-Khintchine) form, stability under
// weighted sums, and the limit laws of the three renormalization modes.
//
// The load-bearing checks are structural identities evaluated with the dense
// independent sphere quadrature from tests/oracles.hpp:
//   -|z|^alpha Xi_alpha(z) = Int C(u^) T_alpha(|z| z^.u^) dS   (stable range)
// with the alpha = 1 / alpha = 2 variants picking up exactly the truncated
// moment terms.  These bind the assembled coefficients to the compensated
// tail kernels they summarize.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>

#include "oracles.hpp"
#include "stablesum/charfn.hpp"
#include "stablesum/tail_integrals.hpp"

namespace ss = stablesum;
using cd = std::complex<double>;

namespace {
const double kGammaE = 0.57721566490153286061;

ss::Vec unit3(double x, double y, double z) { return ss::normalized(ss::make_vec3(x, y, z)); }

ss::Mat mat1(double a) {
  ss::Mat m = ss::make_mat(1);
  m(0, 0) = a;
  return m;
}

ss::Mat mat2(double a00, double a01, double a10, double a11) {
  ss::Mat m = ss::make_mat(2);
  m(0, 0) = a00;
  m(0, 1) = a01;
  m(1, 0) = a10;
  m(1, 1) = a11;
  return m;
}

cd sphere_complex(int dim, const ss::AngularFunction& C, const std::function<cd(double)>& kernel,
                  const ss::Vec& zhat) {
  const auto Cfn = [&C](const ss::Vec& u) { return C(u); };
  const double re = testoracle::sphere_functional(
      dim, Cfn, [&kernel](double t) { return kernel(t).real(); }, zhat);
  const double im = testoracle::sphere_functional(
      dim, Cfn, [&kernel](double t) { return kernel(t).imag(); }, zhat);
  return {re, im};
}
}  // namespace

TEST_CASE("regime classification") {
  REQUIRE(ss::classify_regime(0.5) == ss::Regime::StableSub1);
  REQUIRE(ss::classify_regime(1.0 - 1e-10) == ss::Regime::Singular1);
  REQUIRE(ss::classify_regime(1.0 + 1e-10) == ss::Regime::Singular1);
  REQUIRE(ss::classify_regime(1.5) == ss::Regime::Stable12);
  REQUIRE(ss::classify_regime(2.0) == ss::Regime::Singular2);
  REQUIRE(ss::classify_regime(2.5) == ss::Regime::Gauss);
  REQUIRE(ss::classify_regime(std::numeric_limits<double>::infinity()) == ss::Regime::Gauss);
  REQUIRE_THROWS_AS(ss::classify_regime(0.0), std::invalid_argument);
  REQUIRE(std::string(ss::regime_name(ss::Regime::Singular1)) == "singular_1");
  REQUIRE(std::string(ss::regime_name(ss::Regime::Gauss)) == "gauss");
}

TEST_CASE("canonical coefficient in the stable range") {
  // [closed] uniform density, alpha = 3/2: A = 8 pi/5, B = 0, so
  // Xi = pi (sqrt(2)/2)(8 pi/5) / Gamma(5/2)  (real and positive).
  const ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.5, ss::angular_uniform(3));
  const cd xi = ss::xi_alpha(s, ss::make_vec3(0.0, 0.0, 2.0));
  const double expect = ss::kPi * (std::sqrt(2.0) / 2.0) * (8.0 * ss::kPi / 5.0) / std::tgamma(2.5);
  REQUIRE(std::abs(xi.real() - expect) < 1e-9);
  REQUIRE(std::abs(xi.imag()) < 1e-12);
  // Scale invariance: Xi depends on z only through its direction here.
  const cd xi2 = ss::xi_alpha(s, ss::make_vec3(0.0, 0.0, 0.01));
  REQUIRE(std::abs(xi - xi2) < 1e-12);
}

TEST_CASE("canonical coefficient at the singular exponents, closed cases") {
  SECTION("alpha = 1, one dimension") {
    // [closed] A = 1, B = 0.4, D = 0 for the two-sided point density.
    ss::StableLawSpec s = ss::make_stable_law_spec(1, 1.0, ss::angular_two_point(0.7, 0.3));
    s.u_c = 0.7;
    s.mean_U_trunc = ss::make_vec1(0.15);
    const double zn = 2.0;
    const cd xi = ss::xi_alpha(s, ss::make_vec1(zn));
    const double im = 0.15 + 0.4 * (1.0 - kGammaE - std::log(0.7)) - 0.4 * std::log(zn);
    REQUIRE(std::abs(xi - cd(0.5 * ss::kPi, -im)) < 1e-12);
    // The explicit log: doubling |z| shifts Xi by +i B ln 2.
    const cd xi1 = ss::xi_alpha(s, ss::make_vec1(1.0));
    REQUIRE(std::abs((xi - xi1) - cd(0.0, 0.4 * std::log(2.0))) < 1e-12);
  }
  SECTION("alpha = 2, one dimension") {
    ss::StableLawSpec s = ss::make_stable_law_spec(1, 2.0, ss::angular_two_point(0.75, 0.25));
    s.u_c = 0.9;
    s.cov_trunc = mat1(0.6);
    const double zn = 1.7;
    const cd xi = ss::xi_alpha(s, ss::make_vec1(zn));
    const double re = 0.6 + 1.0 * (1.5 - kGammaE - std::log(0.9)) - std::log(zn);
    REQUIRE(std::abs(xi - 0.5 * cd(re, 0.5 * ss::kPi * 0.5)) < 1e-12);
  }
  SECTION("alpha > 2 quadratic form") {
    ss::StableLawSpec s = ss::make_stable_law_spec(2, 3.0, ss::angular_uniform(2));
    s.cov_Mbar = mat2(2.0, 0.3, 0.3, 1.0);
    const cd xi = ss::xi_alpha(s, ss::make_vec2(0.6, 0.8));
    REQUIRE(std::abs(xi - cd(0.5 * (0.36 * 2.0 + 2.0 * 0.6 * 0.8 * 0.3 + 0.64 * 1.0), 0.0)) <
            1e-14);
  }
}

TEST_CASE("coefficient binds to the compensated kernel integral") {
  // [oracle] -|z|^alpha Xi_alpha(z) = Int C(u^) T_alpha(|z| z^.u^; u_c) dS,
  // plus the truncated-moment residues at the integer exponents.
  const ss::AngularFunction C = ss::angular_dipole(3, ss::make_vec3(0.0, 0.0, 1.0), 0.5);
  const ss::Vec z = 1.3 * unit3(0.2, -0.4, 0.8);
  const double zn = ss::norm(z);
  const ss::Vec zhat = ss::normalized(z);

  SECTION("stable range") {
    for (double alpha : {0.7, 1.5}) {
      ss::StableLawSpec s = ss::make_stable_law_spec(3, alpha, C);
      const cd lhs = -std::pow(zn, alpha) * ss::xi_alpha(s, z);
      const cd rhs = sphere_complex(
          3, C, [alpha, zn](double t) { return ss::t_alpha(alpha, 1.0, zn * t); }, zhat);
      REQUIRE(std::abs(lhs - rhs) < 1e-8);
    }
  }
  SECTION("alpha = 1: truncated mean residue") {
    ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.0, C);
    s.u_c = 0.7;
    s.mean_U_trunc = ss::make_vec3(0.05, -0.1, 0.2);
    const cd lhs = -zn * ss::xi_alpha(s, z);
    const cd integral = sphere_complex(
        3, C, [zn](double t) { return ss::t_alpha(1.0, 0.7, zn * t); }, zhat);
    const cd rhs = integral + cd(0.0, ss::dot(z, *s.mean_U_trunc));
    REQUIRE(std::abs(lhs - rhs) < 1e-8);
  }
  SECTION("alpha = 2: truncated second-moment residue") {
    ss::StableLawSpec s = ss::make_stable_law_spec(3, 2.0, C);
    s.u_c = 0.7;
    ss::Mat ct = ss::make_mat(3);
    const double vals[9] = {1.1, 0.2, -0.1, 0.2, 0.9, 0.05, -0.1, 0.05, 1.4};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ct(i, j) = vals[3 * i + j];
    s.cov_trunc = ct;
    const cd lhs = -zn * zn * ss::xi_alpha(s, z);
    const cd integral = sphere_complex(
        3, C, [zn](double t) { return ss::t_alpha(2.0, 0.7, zn * t); }, zhat);
    const cd rhs = integral - cd(0.5 * ss::quadratic_form(*s.cov_trunc, z), 0.0);
    REQUIRE(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("skewness form coincides with the renormalized limit at the stable dispersion") {
  // With dispersion lambda = pi / (2 sin(alpha pi / 2)) the skewness form is
  // algebraically identical to the mode-free limit law; both sides use the
  // same projection quadrature, so agreement is to rounding.
  const ss::AngularFunction C = ss::angular_dipole(3, unit3(1.0, 2.0, -1.0), 0.6);
  for (double alpha : {0.7, 1.5}) {
    const double lambda = ss::kPi / (2.0 * std::sin(0.5 * alpha * ss::kPi));
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, alpha, C, lambda);
    for (const ss::Vec& z : {ss::make_vec3(0.9, 0.0, 0.0), 1.7 * unit3(0.3, -0.5, 0.8)}) {
      const cd lk = ss::levy_khintchine_cf(s, z);
      const cd lim = std::exp(ss::limit_log_cf(s, z, ss::LimitMode::Clt));
      REQUIRE(std::abs(lk - lim) < 1e-12);
    }
  }
}

TEST_CASE("characteristic function basics") {
  const ss::AngularFunction C = ss::angular_dipole(3, unit3(-1.0, 0.4, 0.2), 0.8);
  SECTION("unit value at the origin") {
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.3, C, 2.0);
    REQUIRE(ss::levy_khintchine_cf(s, ss::make_vec(3)) == cd(1.0, 0.0));
    REQUIRE(ss::limit_log_cf(s, ss::make_vec(3), ss::LimitMode::Clt) == cd(0.0, 0.0));
  }
  SECTION("modulus bound and Hermitian symmetry") {
    for (double alpha : {0.4, 1.0, 1.3, 2.0}) {
      const ss::StableLawSpec s = ss::make_stable_law_spec(3, alpha, C, 0.7);
      for (const ss::Vec& z : {0.3 * unit3(1, 1, 1), 2.0 * unit3(0.1, -0.9, 0.4)}) {
        const cd plus = ss::levy_khintchine_cf(s, z);
        const cd minus = ss::levy_khintchine_cf(s, -1.0 * z);
        REQUIRE(std::abs(plus) <= 1.0 + 1e-12);
        REQUIRE(std::abs(minus - std::conj(plus)) < 1e-13);
      }
    }
  }
  SECTION("even density gives a real characteristic function") {
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.5, ss::angular_uniform(3));
    const cd lcf = ss::limit_log_cf(s, 1.4 * unit3(0.5, 0.5, -0.7), ss::LimitMode::Clt);
    REQUIRE(std::abs(lcf.imag()) < 1e-15);
  }
  SECTION("alpha = 2 is exactly real (skewness factor identically one)") {
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, 2.0, C, 1.2);
    const cd phi = ss::levy_khintchine_cf(s, 1.1 * unit3(0.3, 0.9, 0.1));
    REQUIRE(phi.imag() == 0.0);
  }
}

TEST_CASE("stability of weighted sums") {
  const ss::AngularFunction C = ss::angular_dipole(2, ss::make_vec2(0.6, 0.8), 0.5);
  for (double alpha : {0.7, 1.3, 2.0}) {
    const double l1 = 0.8, l2 = 1.7, a1 = 0.6, a2 = 1.1;
    const double lc = ss::stability_combine(l1, a1, l2, a2, alpha);
    REQUIRE(std::abs(lc - (l1 * std::pow(a1, alpha) + l2 * std::pow(a2, alpha))) < 1e-15);
    const ss::Vec z = 0.9 * ss::normalized(ss::make_vec2(-0.3, 0.7));
    const cd lhs = ss::levy_khintchine_cf(ss::make_stable_law_spec(2, alpha, C, lc), z);
    const cd rhs = ss::levy_khintchine_cf(ss::make_stable_law_spec(2, alpha, C, l1), a1 * z) *
                   ss::levy_khintchine_cf(ss::make_stable_law_spec(2, alpha, C, l2), a2 * z);
    REQUIRE(std::abs(lhs - rhs) < 1e-12);
  }
  REQUIRE_THROWS_AS(ss::stability_combine(1.0, 1.0, 1.0, 1.0, 2.5), std::invalid_argument);
  REQUIRE_THROWS_AS(ss::stability_combine(0.0, 1.0, 1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("marginals") {
  const ss::AngularFunction C = ss::angular_dipole(3, unit3(0.0, 1.0, 1.0), 0.4);
  const ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.5, C, 1.3);
  const cd m = ss::marginal_cf(s, 1, 0.8);
  REQUIRE(std::abs(m - ss::levy_khintchine_cf(s, ss::make_vec3(0.0, 0.8, 0.0))) < 1e-15);
  REQUIRE_THROWS_AS(ss::marginal_cf(ss::make_stable_law_spec(3, 1.0, C), 0, 1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(ss::marginal_cf(s, 3, 1.0), std::invalid_argument);
}

TEST_CASE("renormalized-limit scales") {
  const long long N = 4000;
  const double Nf = 4000.0, K = 1.7;
  using M = ss::LimitMode;
  REQUIRE(std::abs(ss::sigma_n(0.5, M::Clt, K, N) - Nf * Nf) < 1e-6);
  REQUIRE(ss::sigma_n(1.0, M::Clt, K, N) == Nf);
  REQUIRE(std::abs(ss::sigma_n(1.5, M::Clt, K, N) - std::pow(Nf, 2.0 / 3.0)) < 1e-10);
  REQUIRE(ss::sigma_n(2.0, M::Clt, K, N) == std::sqrt(Nf * std::log(Nf)));
  REQUIRE(ss::sigma_n(3.0, M::Clt, K, N) == std::sqrt(Nf));
  REQUIRE(ss::sigma_n(1.0, M::Vlasov, K, N) == Nf * ss::solve_singular(K, Nf));
  REQUIRE(std::abs(ss::sigma_n(1.5, M::Vlasov, K, N) - K * std::pow(Nf, -1.0 / 3.0)) < 1e-16);
  REQUIRE(ss::sigma_n(2.0, M::Vlasov, K, N) == K * std::sqrt(std::log(Nf) / Nf));
  REQUIRE(ss::sigma_n(3.0, M::Vlasov, K, N) == K / std::sqrt(Nf));
  REQUIRE(std::abs(ss::sigma_n(1.5, M::Fluctuation, K, N) - std::pow(K, 2.0 / 3.0)) < 1e-15);
  REQUIRE(ss::sigma_n(2.0, M::Fluctuation, K, N) == std::sqrt(K));
  REQUIRE(ss::sigma_n(3.0, M::Fluctuation, K, N) == std::sqrt(K));
  REQUIRE_THROWS_AS(ss::sigma_n(0.5, M::Vlasov, K, N), std::invalid_argument);
}

TEST_CASE("limit-law guards") {
  const ss::AngularFunction asym = ss::angular_dipole(3, unit3(1.0, 0.0, 0.0), 0.7);
  const ss::Vec z = 0.8 * unit3(0.2, 0.5, -0.8);
  SECTION("Vlasov needs alpha >= 1 and N") {
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, 0.7, asym);
    REQUIRE_THROWS_AS(ss::limit_log_cf(s, z, ss::LimitMode::Vlasov, 100), std::invalid_argument);
    ss::StableLawSpec s2 = ss::make_stable_law_spec(3, 1.5, asym);
    s2.mean_U = ss::make_vec3(0.1, 0.0, 0.0);
    REQUIRE_THROWS_AS(ss::limit_log_cf(s2, z, ss::LimitMode::Vlasov, 0), std::invalid_argument);
    REQUIRE_NOTHROW(ss::limit_log_cf(s2, z, ss::LimitMode::Vlasov, 100));
  }
  SECTION("fluctuation mode demands a vanishing mean above one") {
    ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.5, asym);
    REQUIRE_THROWS_AS(ss::limit_log_cf(s, z, ss::LimitMode::Fluctuation), std::invalid_argument);
    s.mean_U = ss::make_vec(3);  // declared zero: accepted
    REQUIRE_NOTHROW(ss::limit_log_cf(s, z, ss::LimitMode::Fluctuation));
    s.mean_U = ss::make_vec3(0.0, 0.0, 0.2);  // declared nonzero: rejected
    REQUIRE_THROWS_AS(ss::limit_log_cf(s, z, ss::LimitMode::Fluctuation), std::invalid_argument);
    // Below one no condition applies even for an asymmetric density.
    const ss::StableLawSpec s07 = ss::make_stable_law_spec(3, 0.7, asym);
    REQUIRE_NOTHROW(ss::limit_log_cf(s07, z, ss::LimitMode::Fluctuation));
    // An even density is accepted without a declaration.
    const ss::StableLawSpec se = ss::make_stable_law_spec(3, 1.5, ss::angular_uniform(3));
    REQUIRE_NOTHROW(ss::limit_log_cf(se, z, ss::LimitMode::Fluctuation));
  }
  SECTION("missing covariance above two") {
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, 3.0, ss::angular_uniform(3));
    REQUIRE_THROWS_AS(ss::limit_log_cf(s, z, ss::LimitMode::Clt), std::invalid_argument);
  }
}

TEST_CASE("drift, scale, and family decomposition") {
  const ss::Vec e3 = ss::make_vec3(0.0, 0.0, 1.0);
  const ss::AngularFunction C = ss::angular_dipole(3, e3, 0.5);
  const ss::Vec v = ss::drift_vector_v(C);  // = -(2 pi/3) e3

  SECTION("bare-sum drift at alpha = 1 grows like N ln N") {
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.0, C);
    const ss::AsymptoticDecomposition d =
        ss::asymptotic_decomposition(s, 1000, ss::LimitMode::Clt);
    REQUIRE(d.law == "S_1^(i)");
    REQUIRE(d.sigma == 1000.0);
    const double want = -1000.0 * std::log(1000.0) * v[2];
    REQUIRE(std::abs(d.drift[2] - want) < 1e-9 * std::abs(want));
  }
  SECTION("mean-field drift") {
    ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.5, C, 2.0, -1);
    s.mean_U = ss::make_vec3(0.0, 0.0, 0.4);
    const ss::AsymptoticDecomposition d =
        ss::asymptotic_decomposition(s, 500, ss::LimitMode::Vlasov);
    REQUIRE(d.law == "S_alpha");
    REQUIRE(std::abs(d.drift[2] - (-1.0) * 2.0 * 0.4) < 1e-14);
    const ss::StableLawSpec s1 = ss::make_stable_law_spec(3, 1.0, C, 2.0, -1);
    const ss::AsymptoticDecomposition d1 =
        ss::asymptotic_decomposition(s1, 500, ss::LimitMode::Vlasov);
    REQUIRE(std::abs(d1.drift[2] - 2.0 * v[2]) < 1e-12);  // -q K v with q = -1
  }
  SECTION("fluctuation mode is centered with an N-free scale") {
    const ss::StableLawSpec s = ss::make_stable_law_spec(3, 0.8, C, 1.3);
    const ss::AsymptoticDecomposition d =
        ss::asymptotic_decomposition(s, 999, ss::LimitMode::Fluctuation);
    REQUIRE(ss::norm(d.drift) == 0.0);
    REQUIRE(std::abs(d.sigma - std::pow(1.3, 1.0 / 0.8)) < 1e-15);
    const ss::StableLawSpec s2 = ss::make_stable_law_spec(2, 2.0, ss::angular_uniform(2));
    REQUIRE(ss::asymptotic_decomposition(s2, 10, ss::LimitMode::Fluctuation).law == "S_2*");
  }
}

TEST_CASE("law specification validation") {
  ss::StableLawSpec s = ss::make_stable_law_spec(3, 1.5, ss::angular_uniform(3));
  s.regime = ss::Regime::Gauss;  // inconsistent with alpha
  REQUIRE_THROWS_AS(ss::validate_spec(s), std::invalid_argument);
  REQUIRE_THROWS_AS(ss::make_stable_law_spec(2, 1.5, ss::angular_uniform(3)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(ss::make_stable_law_spec(3, 1.5, ss::angular_uniform(3), 0.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(ss::make_stable_law_spec(3, 1.5, ss::angular_uniform(3), 1.0, 0),
                    std::invalid_argument);
}
