// Angular measure functionals: projected-kernel integrals A/B/D, drift vector,
// Gaussian matrix, and the sphere quadrature underneath them.
//
// Reference values come from three independent sources, noted per assertion:
//   [closed]  exact closed-form surface integrals (hemisphere/arc calculus),
//   [oracle]  testoracle::sphere_functional, a dense plain product quadrature
//             sharing no code with the panel integrator,
//   [exact]   identities that hold to rounding by construction.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "stablesum/angular.hpp"

namespace ss = stablesum;

namespace {
const double kPi = std::acos(-1.0);

ss::Vec unit3(double x, double y, double z) { return ss::normalized(ss::make_vec3(x, y, z)); }
}  // namespace

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  ss::gauss_legendre(8, x, w);
  REQUIRE(x.size() == 8);
  double total = 0.0, p10 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += w[i];
    p10 += w[i] * std::pow(x[i], 10);
  }
  REQUIRE(std::abs(total - 2.0) < 1e-14);            // [exact] weights sum to |[-1,1]|
  REQUIRE(std::abs(p10 - 2.0 / 11.0) < 1e-14);       // [exact] degree 10 < 2n-1 = 15
}

TEST_CASE("sphere quadrature reproduces total surface measure") {
  for (int dim : {1, 2, 3}) {
    const ss::SphereQuadrature q = ss::SphereQuadrature::build(dim);
    double total = 0.0;
    for (double w : q.weights) total += w;
    const double expect = dim == 3 ? 4.0 * kPi : (dim == 2 ? 2.0 * kPi : 2.0);
    REQUIRE(std::abs(total - expect) < 1e-12);       // [closed] |S_d|
  }
}

TEST_CASE("closed-form projections: uniform density in three dimensions") {
  const ss::AngularFunction C = ss::angular_uniform(3);
  const ss::Vec z = unit3(0.3, -0.5, 0.81);  // direction must not matter
  for (double alpha : {0.5, 1.5, 2.5}) {
    // [closed] Int_{S^2} |t|^alpha dS = 4 pi / (alpha + 1)
    REQUIRE(std::abs(ss::a_alpha(C, alpha, z) - 4.0 * kPi / (alpha + 1.0)) < 1e-10);
    REQUIRE(std::abs(ss::b_alpha(C, alpha, z)) < 1e-10);  // [exact] even density
  }
  // [closed] Int t^2 ln|t| dS = 4 pi Int_0^1 t^2 ln t dt = -4 pi / 9
  REQUIRE(std::abs(ss::d_alpha(C, 2.0, z) - (-4.0 * kPi / 9.0)) < 1e-10);
  REQUIRE(std::abs(ss::d_alpha(C, 1.0, z)) < 1e-10);      // [exact] odd integrand
  REQUIRE(std::abs(testoracle::closed_a_uniform_d3(1.0, 1.5) - 4.0 * kPi / 2.5) < 1e-15);
  REQUIRE(std::abs(testoracle::closed_d2_uniform_d3() - (-4.0 * kPi / 9.0)) < 1e-15);
}

TEST_CASE("closed-form projections: aligned dipole density") {
  const double amp = 0.5;
  const ss::Vec e3 = ss::make_vec3(0.0, 0.0, 1.0);
  const ss::AngularFunction C = ss::angular_dipole(3, e3, amp);
  const double alpha = 1.5;
  // Even part (the 1) feeds A, odd part (the dipole) feeds B:
  // [closed] A = 4 pi/(alpha+1),  B = amp * Int |t|^{alpha+1} dS = amp * 4 pi/(alpha+2)
  REQUIRE(std::abs(ss::a_alpha(C, alpha, e3) - 4.0 * kPi / 2.5) < 1e-10);
  REQUIRE(std::abs(ss::b_alpha(C, alpha, e3) - amp * 4.0 * kPi / 3.5) < 1e-10);
  // [closed] skewness beta = B/A = amp (alpha+1)/(alpha+2) = 5/14
  REQUIRE(std::abs(ss::skewness_ratio(C, alpha, e3) - 5.0 / 14.0) < 1e-10);
  // [closed] D_1 = amp * Int t^2 ln|t| dS = -amp 4 pi / 9
  REQUIRE(std::abs(ss::d_alpha(C, 1.0, e3) - (-amp * 4.0 * kPi / 9.0)) < 1e-10);
}

TEST_CASE("closed-form projections: axis-aligned cap density") {
  const double in = 1.3, out = 0.4, cos_cut = 0.0;
  const ss::Vec e3 = ss::make_vec3(0.0, 0.0, 1.0);
  const ss::AngularFunction C = ss::angular_cap(3, e3, cos_cut, in, out);
  const double alpha = 0.8;
  // [closed] each hemisphere contributes 2 pi/(alpha+1) to A and (signed) to B:
  // Int_{t>=0} |t|^alpha dS = 2 pi Int_0^1 t^alpha dt = 2 pi/(alpha+1)
  REQUIRE(std::abs(ss::a_alpha(C, alpha, e3) - (in + out) * 2.0 * kPi / (alpha + 1.0)) < 1e-9);
  REQUIRE(std::abs(ss::b_alpha(C, alpha, e3) - (in - out) * 2.0 * kPi / (alpha + 1.0)) < 1e-9);
}

TEST_CASE("closed-form projections: two dimensions and one dimension") {
  const ss::AngularFunction U2 = ss::angular_uniform(2);
  const ss::Vec z2 = ss::normalized(ss::make_vec2(0.6, -0.8));
  // [closed] Int_0^{2pi} |cos psi| dpsi = 4
  REQUIRE(std::abs(ss::a_alpha(U2, 1.0, z2) - 4.0) < 1e-10);

  const ss::AngularFunction T = ss::angular_two_point(0.7, 0.3);
  const ss::Vec plus = ss::make_vec1(1.0);
  // [exact] two-point sums: A = c+ + c-, B = c+ - c-, any exponent
  REQUIRE(std::abs(ss::a_alpha(T, 1.3, plus) - 1.0) < 1e-14);
  REQUIRE(std::abs(ss::b_alpha(T, 1.3, plus) - 0.4) < 1e-14);
  REQUIRE(std::abs(ss::b_alpha(T, 1.3, ss::make_vec1(-1.0)) + 0.4) < 1e-14);
}

TEST_CASE("parity of the projections in the probe direction") {
  const ss::AngularFunction C = ss::angular_cap(3, unit3(1.0, 2.0, -1.0), 0.35, 2.0, 0.5);
  const ss::Vec z = unit3(0.2, -0.4, 0.8);
  const ss::Vec mz = -1.0 * z;
  for (double alpha : {0.7, 1.0, 1.6}) {
    REQUIRE(std::abs(ss::a_alpha(C, alpha, z) - ss::a_alpha(C, alpha, mz)) < 1e-9);
    REQUIRE(std::abs(ss::b_alpha(C, alpha, z) + ss::b_alpha(C, alpha, mz)) < 1e-9);
  }
  REQUIRE(std::abs(ss::d_alpha(C, 1.0, z) + ss::d_alpha(C, 1.0, mz)) < 1e-9);
  REQUIRE(std::abs(ss::d_alpha(C, 2.0, z) - ss::d_alpha(C, 2.0, mz)) < 1e-9);
}

TEST_CASE("drift vector and Gaussian matrix identities") {
  // B_1(z^) = -z^.v and A_2(z^) = 2 z^ M z^ hold for every density; probe with
  // an asymmetric mixture in each dimension.
  const ss::AngularFunction C3 = ss::angular_dipole(3, unit3(1.0, -2.0, 0.5), 0.8);
  const ss::Vec v3 = ss::drift_vector_v(C3);
  const ss::Mat m3 = ss::gaussian_matrix_m(C3);
  for (const ss::Vec& z : {unit3(1, 0, 0), unit3(0.2, -0.4, 0.8), unit3(-1.0, 1.0, 3.0)}) {
    REQUIRE(std::abs(ss::b_alpha(C3, 1.0, z) + ss::dot(z, v3)) < 1e-10);
    REQUIRE(std::abs(ss::a_alpha(C3, 2.0, z) - 2.0 * ss::quadratic_form(m3, z)) < 1e-8);
  }
  // [closed] aligned dipole: v = -(4 pi/3) amp axis, M = (2 pi/3) I for uniform part
  const ss::Vec e3 = ss::make_vec3(0.0, 0.0, 1.0);
  const ss::Vec vd = ss::drift_vector_v(ss::angular_dipole(3, e3, 0.5));
  REQUIRE(std::abs(vd[0]) < 1e-12);
  REQUIRE(std::abs(vd[1]) < 1e-12);
  REQUIRE(std::abs(vd[2] - (-2.0 * kPi / 3.0)) < 1e-10);
  const ss::Mat mu = ss::gaussian_matrix_m(ss::angular_uniform(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      REQUIRE(std::abs(mu(i, j) - (i == j ? 2.0 * kPi / 3.0 : 0.0)) < 1e-10);

  const ss::AngularFunction C1 = ss::angular_two_point(0.9, 0.1);
  const ss::Vec v1 = ss::drift_vector_v(C1);
  REQUIRE(std::abs(v1[0] - (-0.8)) < 1e-14);  // [exact] -(c+ - c-)
}

TEST_CASE("panel refinement is converged for smooth densities") {
  const ss::AngularFunction C = ss::angular_dipole(3, unit3(2.0, 1.0, -1.0), 0.9);
  const ss::Vec z = unit3(-0.3, 0.7, 0.2);
  ss::AngularScheme fine;
  fine.panel_order = 16;
  fine.panel_levels = 80;
  fine.azimuth = 512;
  for (double alpha : {0.6, 1.5}) {
    REQUIRE(std::abs(ss::a_alpha(C, alpha, z) - ss::a_alpha(C, alpha, z, fine)) < 1e-8);
    REQUIRE(std::abs(ss::b_alpha(C, alpha, z) - ss::b_alpha(C, alpha, z, fine)) < 1e-8);
  }
  REQUIRE(std::abs(ss::d_alpha(C, 2.0, z) - ss::d_alpha(C, 2.0, z, fine)) < 1e-8);
}

TEST_CASE("agreement with the dense independent quadrature") {
  // [oracle] smooth tilted dipole in d=3; both integrators are converged, so
  // they must agree far beyond either one's nominal accuracy target.
  const ss::Vec axis = unit3(1.0, 2.0, -1.0);
  const double amp = 0.8;
  const ss::AngularFunction C = ss::angular_dipole(3, axis, amp);
  const auto Cfn = [&C](const ss::Vec& u) { return C(u); };
  const ss::Vec z = unit3(0.2, -0.4, 0.8);
  for (double alpha : {0.7, 1.5}) {
    const double a_ref = testoracle::sphere_functional(
        3, Cfn, [alpha](double t) { return std::pow(std::abs(t), alpha); }, z);
    const double b_ref = testoracle::sphere_functional(
        3, Cfn,
        [alpha](double t) { return (t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0)) * std::pow(std::abs(t), alpha); },
        z);
    REQUIRE(std::abs(ss::a_alpha(C, alpha, z) - a_ref) < 1e-8);
    REQUIRE(std::abs(ss::b_alpha(C, alpha, z) - b_ref) < 1e-8);
  }
  const double d2_ref = testoracle::sphere_functional(
      3, Cfn, [](double t) { return t == 0.0 ? 0.0 : t * t * std::log(std::abs(t)); }, z);
  REQUIRE(std::abs(ss::d_alpha(C, 2.0, z) - d2_ref) < 1e-8);

  // [oracle] d=2 tilted dipole against the dense absolute-angle trapezoid.
  const ss::AngularFunction C2 =
      ss::angular_dipole(2, ss::make_vec2(std::cos(0.7), std::sin(0.7)), 0.6);
  const ss::Vec z2 = ss::normalized(ss::make_vec2(-0.8, 0.6));
  const double a2_ref = testoracle::sphere_functional(
      2, [&C2](const ss::Vec& u) { return C2(u); },
      [](double t) { return std::pow(std::abs(t), 1.3); }, z2);
  REQUIRE(std::abs(ss::a_alpha(C2, 1.3, z2) - a2_ref) < 1e-8);
}

TEST_CASE("angular argument validation") {
  const ss::AngularFunction C = ss::angular_uniform(3);
  const ss::Vec z = ss::make_vec3(0.0, 0.0, 1.0);
  REQUIRE_THROWS_AS(ss::a_alpha(C, 0.0, z), std::invalid_argument);
  REQUIRE_THROWS_AS(ss::d_alpha(C, 1.5, z), std::invalid_argument);
  REQUIRE_THROWS_AS(ss::angular_dipole(3, z, 1.5), std::invalid_argument);
  REQUIRE_THROWS_AS(ss::angular_two_point(-0.1, 0.5), std::invalid_argument);
}
