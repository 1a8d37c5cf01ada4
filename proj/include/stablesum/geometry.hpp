#pragma once

// Small fixed-capacity vector/matrix helpers for dimensions 1..3.
//
// Everything in this library lives on R^d with d in {1,2,3}; a Vec carries its
// dimension at runtime so one code path serves all three.  Components beyond
// `dim` are kept at zero, which lets dot/norm run over the full array without
// branching.

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace stablesum {

constexpr int kMaxDim = 3;

struct Vec {
  int dim = 1;
  std::array<double, kMaxDim> c{0.0, 0.0, 0.0};

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
};

inline Vec make_vec(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Vec dimension must be 1, 2 or 3");
  return Vec{dim, {0.0, 0.0, 0.0}};
}

inline Vec make_vec1(double x) { return Vec{1, {x, 0.0, 0.0}}; }
inline Vec make_vec2(double x, double y) { return Vec{2, {x, y, 0.0}}; }
inline Vec make_vec3(double x, double y, double z) { return Vec{3, {x, y, z}}; }

inline void check_same_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.dim != b.dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline Vec operator+(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "Vec operator+");
  Vec r = a;
  for (int i = 0; i < a.dim; ++i) r.c[static_cast<std::size_t>(i)] += b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "Vec operator-");
  Vec r = a;
  for (int i = 0; i < a.dim; ++i) r.c[static_cast<std::size_t>(i)] -= b[i];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r = a;
  for (int i = 0; i < a.dim; ++i) r.c[static_cast<std::size_t>(i)] *= s;
  return r;
}

inline Vec operator-(const Vec& a) { return -1.0 * a; }

inline Vec& operator+=(Vec& a, const Vec& b) {
  a = a + b;
  return a;
}

inline double dot(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "dot");
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw std::invalid_argument("normalized: zero vector");
  return (1.0 / n) * a;
}

/// A direction is a unit vector; callers that require unit norm validate with this.
inline Vec make_direction(const Vec& a) {
  Vec u = normalized(a);
  if (std::abs(norm(u) - 1.0) > 1e-12) throw std::invalid_argument("make_direction: not unit norm");
  return u;
}

/// Symmetric d x d matrix stored dense (row major over the active block).
struct Mat {
  int dim = 1;
  std::array<double, kMaxDim * kMaxDim> m{};  // zero-initialized

  double operator()(int i, int j) const { return m[static_cast<std::size_t>(i * kMaxDim + j)]; }
  double& operator()(int i, int j) { return m[static_cast<std::size_t>(i * kMaxDim + j)]; }
};

inline Mat make_mat(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Mat dimension must be 1, 2 or 3");
  Mat r;
  r.dim = dim;
  return r;
}

inline Mat identity_mat(int dim) {
  Mat r = make_mat(dim);
  for (int i = 0; i < dim; ++i) r(i, i) = 1.0;
  return r;
}

inline Mat operator*(double s, const Mat& a) {
  Mat r = a;
  for (double& x : r.m) x *= s;
  return r;
}

inline Mat operator+(const Mat& a, const Mat& b) {
  if (a.dim != b.dim) throw std::invalid_argument("Mat operator+: dimension mismatch");
  Mat r = a;
  for (std::size_t i = 0; i < r.m.size(); ++i) r.m[i] += b.m[i];
  return r;
}

inline Vec operator*(const Mat& a, const Vec& x) {
  if (a.dim != x.dim) throw std::invalid_argument("Mat*Vec: dimension mismatch");
  Vec r = make_vec(x.dim);
  for (int i = 0; i < a.dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.dim; ++j) s += a(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

/// z^T M z.
inline double quadratic_form(const Mat& m, const Vec& z) {
  if (m.dim != z.dim) throw std::invalid_argument("quadratic_form: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) s += z[i] * m(i, j) * z[j];
  return s;
}

/// Orthonormal frame {e1, e2, zhat} adapted to a unit vector zhat (d=3).
///
/// The construction is deterministic in zhat and chosen so that the frames of
/// zhat and -zhat share e1 while e2 flips sign.  Quadrature node sets built in
/// this frame are then exactly invariant under zhat -> -zhat, which makes the
/// parity identities of the angular functionals hold to rounding error even
/// for discontinuous angular densities.
struct Frame3 {
  Vec e1, e2, zhat;
};

inline Frame3 adapted_frame(const Vec& zhat) {
  if (zhat.dim != 3) throw std::invalid_argument("adapted_frame: dim 3 only");
  // Pick the coordinate axis least aligned with zhat; ties resolved by index.
  int k = 0;
  double best = std::abs(zhat[0]);
  for (int i = 1; i < 3; ++i) {
    if (std::abs(zhat[i]) < best) {
      best = std::abs(zhat[i]);
      k = i;
    }
  }
  Vec axis = make_vec3(0, 0, 0);
  axis[k] = 1.0;
  // Remove the zhat component; the projection is even in zhat.
  const double p = dot(axis, zhat);
  Vec e1 = axis - p * zhat;
  e1 = normalized(e1);
  // e2 = zhat x e1 (odd in zhat).
  Vec e2 = make_vec3(zhat[1] * e1[2] - zhat[2] * e1[1], zhat[2] * e1[0] - zhat[0] * e1[2],
                     zhat[0] * e1[1] - zhat[1] * e1[0]);
  return Frame3{e1, e2, zhat};
}

}  // namespace stablesum
