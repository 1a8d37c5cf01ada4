#pragma once

// Monte Carlo engine: position sampling from the two-zone density, resultant
// force ensembles, empirical characteristic functions, tail-exponent fits,
// and moment estimators.
//
// Determinism contract: every replica r of a run with master seed s draws
// from RandomStream(s, r) and from nothing else, so ensembles are
// bit-identical for any thread count.  Estimators that need a single i.i.d.
// stream use RandomStream(s, 0).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "stablesum/density.hpp"
#include "stablesum/geometry.hpp"
#include "stablesum/rng.hpp"

namespace stablesum {

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Uniform direction on S_d.
inline Vec uniform_direction(int dim, RandomStream& rs) {
  switch (dim) {
    case 1:
      return make_vec1(rs.next_double() < 0.5 ? 1.0 : -1.0);
    case 2: {
      const double th = 6.283185307179586476925286766559 * rs.next_double();
      return make_vec2(std::cos(th), std::sin(th));
    }
    case 3: {
      const double ct = 2.0 * rs.next_double() - 1.0;
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double ph = 6.283185307179586476925286766559 * rs.next_double();
      return make_vec3(st * std::cos(ph), st * std::sin(ph), ct);
    }
    default:
      throw std::invalid_argument("uniform_direction: dim must be 1..3");
  }
}

/// Direction with density proportional to g: exact two-sided coin for d = 1,
/// rejection against sup_bound otherwise.
inline Vec sample_direction(const AngularFunction& g, RandomStream& rs) {
  if (g.dim == 1) {
    const double gp = g(make_vec1(1.0));
    const double gm = g(make_vec1(-1.0));
    if (!(gp + gm > 0.0)) throw std::invalid_argument("sample_direction: zero density on S_1");
    return make_vec1(rs.next_double() * (gp + gm) < gp ? 1.0 : -1.0);
  }
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Vec u = uniform_direction(g.dim, rs);
    if (rs.next_double() * g.sup_bound < g(u)) return u;
  }
  throw std::runtime_error("sample_direction: rejection failed (check sup_bound)");
}

/// Position of one source particle.  Draw order per sample: zone selector,
/// radial uniform, then direction (one coin for d = 1; one uniform direction
/// plus one acceptance uniform per rejection round otherwise).
inline Vec sample_position(const SpatialDensity& de, RandomStream& rs) {
  const double p_inner = de.inner_weight;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const bool inner = rs.next_double() < p_inner;
    const double u = rs.next_open();
    double r;
    if (inner) {
      r = de.r_c * std::pow(u, 1.0 / (de.nu + de.dim));
    } else {
      const double p = de.dim + de.outer_nu;
      if (p != 0.0) {
        const double rp = std::pow(de.r_c, p);
        const double Lp = std::pow(de.L, p);
        r = std::pow(rp + u * (Lp - rp), 1.0 / p);
      } else {
        r = de.r_c * std::pow(de.L / de.r_c, u);
      }
    }
    if (!(r > 1e-300)) continue;  // guard against an exactly-coincident source
    const Vec dir = (!inner && de.outer_direction == OuterDirection::Isotropic)
                        ? uniform_direction(de.dim, rs)
                        : sample_direction(de.shape, rs);
    return r * dir;
  }
  throw std::runtime_error("sample_position: could not draw a nonzero radius");
}

inline Vec sample_force(const SpatialDensity& de, const ForceLaw& law, RandomStream& rs) {
  return force_map(law, sample_position(de, rs));
}

/// Resultant force from n_particles i.i.d. sources.
inline Vec resultant_force(const SpatialDensity& de, const ForceLaw& law, long long n_particles,
                           RandomStream& rs) {
  Vec f = make_vec(de.dim);
  for (long long i = 0; i < n_particles; ++i) f += sample_force(de, law, rs);
  return f;
}

namespace detail {

/// Run fn(i) for i in [0, n) over `threads` contiguous chunks.
template <typename Fn>
inline void parallel_for(long long n, int threads, Fn&& fn) {
  threads = static_cast<int>(std::min<long long>(std::max(threads, 1), std::max<long long>(n, 1)));
  if (threads <= 1) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const long long chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long long lo = t * chunk;
    const long long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Ensemble of resultant forces; replica r uses RandomStream(seed, r).
inline std::vector<Vec> run_ensemble(const SpatialDensity& de, const ForceLaw& law,
                                     long long n_particles, long long replicas,
                                     std::uint64_t seed, int threads = 1) {
  validate(de);
  validate(law);
  if (n_particles < 1) throw std::invalid_argument("run_ensemble: n_particles must be >= 1");
  if (replicas < 1) throw std::invalid_argument("run_ensemble: replicas must be >= 1");
  std::vector<Vec> out(static_cast<std::size_t>(replicas), make_vec(de.dim));
  detail::parallel_for(replicas, threads, [&](long long r) {
    RandomStream rs(seed, static_cast<std::uint64_t>(r));
    out[static_cast<std::size_t>(r)] = resultant_force(de, law, n_particles, rs);
  });
  return out;
}

/// samples[i] -> scale * samples[i] + shift, in place.
inline void renormalize_samples(std::vector<Vec>& samples, double scale, const Vec& shift) {
  for (auto& s : samples) s = scale * s + shift;
}

// ---------------------------------------------------------------------------
// Empirical characteristic function
// ---------------------------------------------------------------------------

struct EcfResult {
  std::vector<std::complex<double>> values;
  std::vector<double> stderrs;  // sqrt((1 - |phi|^2)/m), the asymptotic sd per point
};

inline EcfResult empirical_cf(const std::vector<Vec>& samples, const std::vector<Vec>& grid,
                              int threads = 1) {
  if (samples.empty()) throw std::invalid_argument("empirical_cf: no samples");
  const double m = static_cast<double>(samples.size());
  EcfResult out;
  out.values.assign(grid.size(), {0.0, 0.0});
  out.stderrs.assign(grid.size(), 0.0);
  detail::parallel_for(static_cast<long long>(grid.size()), threads, [&](long long j) {
    const Vec& z = grid[static_cast<std::size_t>(j)];
    if (!(norm(z) > 0.0)) {
      out.values[static_cast<std::size_t>(j)] = {1.0, 0.0};  // ECF(0) = 1 identically
      return;
    }
    double re = 0.0, im = 0.0;
    for (const Vec& x : samples) {
      const double p = dot(z, x);
      re += std::cos(p);
      im += std::sin(p);
    }
    const std::complex<double> v(re / m, im / m);
    out.values[static_cast<std::size_t>(j)] = v;
    out.stderrs[static_cast<std::size_t>(j)] = std::sqrt(std::max(0.0, 1.0 - std::norm(v)) / m);
  });
  return out;
}

/// Cartesian product grid, per_axis points per axis spanning [-z_max, z_max].
inline std::vector<Vec> tensor_grid(int dim, int per_axis = 21, double z_max = 5.0) {
  if (per_axis < 2) throw std::invalid_argument("tensor_grid: per_axis must be >= 2");
  if (!(z_max > 0.0)) throw std::invalid_argument("tensor_grid: z_max must be > 0");
  std::vector<double> axis(static_cast<std::size_t>(per_axis));
  for (int i = 0; i < per_axis; ++i)
    axis[static_cast<std::size_t>(i)] = -z_max + 2.0 * z_max * i / (per_axis - 1);
  std::vector<Vec> grid;
  const int n1 = per_axis, n2 = dim >= 2 ? per_axis : 1, n3 = dim >= 3 ? per_axis : 1;
  grid.reserve(static_cast<std::size_t>(n1) * n2 * n3);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n3; ++k) {
        Vec z = make_vec(dim);
        z[0] = axis[static_cast<std::size_t>(i)];
        if (dim >= 2) z[1] = axis[static_cast<std::size_t>(j)];
        if (dim >= 3) z[2] = axis[static_cast<std::size_t>(k)];
        grid.push_back(z);
      }
  return grid;
}

/// n+1 points t_k u^ with t_k = k z_max / n, k = 0..n (z = 0 included).
inline std::vector<Vec> ray_grid(const Vec& direction, int n, double z_max) {
  if (n < 1) throw std::invalid_argument("ray_grid: n must be >= 1");
  if (!(z_max > 0.0)) throw std::invalid_argument("ray_grid: z_max must be > 0");
  const Vec u = make_direction(direction);
  std::vector<Vec> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) grid.push_back((z_max * k / n) * u);
  return grid;
}

inline double sup_abs_diff(const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_abs_diff: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

// ---------------------------------------------------------------------------
// Tail-exponent (Hill) fit
// ---------------------------------------------------------------------------

struct TailFit {
  double alpha_hat = 0.0;
  double alpha_stderr = 0.0;
  double amplitude = 0.0;  // estimate of Int C dS in P(|U|>u) ~ (Int C dS) u^{-alpha}/alpha
  double x0 = 0.0;         // fit threshold (order statistic at the fit fraction)
  long long k = 0;         // order statistics above the threshold
};

/// Hill estimator on the top `fit_fraction` of the magnitudes.  The fraction
/// must stay well inside the inner-core tail: it is capped at 0.1 and must be
/// strictly below the inner mass fraction, otherwise the window mixes in
/// outer-shell samples that do not follow the power law.
inline TailFit fit_tail_exponent(std::vector<double> mags, double fit_fraction,
                                 double inner_weight = 1.0) {
  if (!(fit_fraction > 0.0) || fit_fraction > 0.1)
    throw std::invalid_argument("fit_tail_exponent: fit_fraction must lie in (0, 0.1]");
  if (!(fit_fraction < inner_weight))
    throw std::invalid_argument("fit_tail_exponent: fit_fraction must be < inner mass fraction");
  const long long n = static_cast<long long>(mags.size());
  if (n < 100) throw std::invalid_argument("fit_tail_exponent: need at least 100 samples");
  const long long k = static_cast<long long>(fit_fraction * static_cast<double>(n));
  if (k < 10) throw std::invalid_argument("fit_tail_exponent: fewer than 10 tail samples");
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  const double x0 = mags[static_cast<std::size_t>(k)];
  if (!(x0 > 0.0)) throw std::invalid_argument("fit_tail_exponent: non-positive threshold");
  double s = 0.0;
  for (long long i = 0; i < k; ++i) s += std::log(mags[static_cast<std::size_t>(i)] / x0);
  if (!(s > 0.0)) throw std::invalid_argument("fit_tail_exponent: degenerate tail");
  TailFit f;
  f.k = k;
  f.x0 = x0;
  f.alpha_hat = static_cast<double>(k) / s;
  f.alpha_stderr = f.alpha_hat / std::sqrt(static_cast<double>(k));
  f.amplitude = f.alpha_hat * (static_cast<double>(k) / static_cast<double>(n)) *
                std::pow(x0, f.alpha_hat);
  return f;
}

/// n i.i.d. single-contribution force magnitudes |U|.
inline std::vector<double> single_force_magnitudes(const SpatialDensity& de, const ForceLaw& law,
                                                   long long n, std::uint64_t seed) {
  validate(de);
  validate(law);
  if (n < 1) throw std::invalid_argument("single_force_magnitudes: n must be >= 1");
  RandomStream rs(seed, 0);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = norm(sample_force(de, law, rs));
  return out;
}

// ---------------------------------------------------------------------------
// Moment estimators
// ---------------------------------------------------------------------------

struct TruncatedMoments {
  Vec mean_trunc;     // <U 1[|U| <= u_c]>
  Mat second_trunc;   // raw <U U^T 1[|U| <= u_c]>
  std::optional<Vec> mean_full;    // <U>, reported when alpha > 1
  std::optional<Mat> cov_trunc;    // <U U^T>_{u_c} - <U><U>^T, reported when alpha > 1
  std::optional<Mat> cov_full;     // covariance <U U^T> - <U><U>^T, reported when alpha > 2
  double mean_trunc_stderr = 0.0;  // largest per-component standard error
  double mean_full_stderr = 0.0;
  long long n = 0;
};

/// Monte Carlo truncated moments of the single-contribution force.  The full
/// mean exists only above alpha = 1 and the covariance only above alpha = 2;
/// each is reported only there (with a margin at the boundary: an estimator of
/// a barely-finite moment has infinite variance).  The centered matrices
/// subtract the full-mean outer product, which is why they too need alpha > 1.
inline TruncatedMoments truncated_moments(const SpatialDensity& de, const ForceLaw& law,
                                          double u_c, long long n, std::uint64_t seed) {
  validate(de);
  validate(law);
  if (!(u_c > 0.0)) throw std::invalid_argument("truncated_moments: u_c must be > 0");
  if (n < 2) throw std::invalid_argument("truncated_moments: need n >= 2");
  const double alpha = tail_alpha(de, law);
  const int d = de.dim;
  RandomStream rs(seed, 0);
  Vec sum_t = make_vec(d), sum_f = make_vec(d);
  Vec sum_t2 = make_vec(d), sum_f2 = make_vec(d);  // per-component squares
  Mat mat_t = make_mat(d), mat_f = make_mat(d);
  for (long long i = 0; i < n; ++i) {
    const Vec u = sample_force(de, law, rs);
    const bool in = norm(u) <= u_c;
    for (int a = 0; a < d; ++a) {
      if (in) {
        sum_t[a] += u[a];
        sum_t2[a] += u[a] * u[a];
      }
      sum_f[a] += u[a];
      sum_f2[a] += u[a] * u[a];
      for (int b = 0; b < d; ++b) {
        if (in) mat_t(a, b) += u[a] * u[b];
        mat_f(a, b) += u[a] * u[b];
      }
    }
  }
  const double nf = static_cast<double>(n);
  TruncatedMoments out;
  out.n = n;
  out.mean_trunc = (1.0 / nf) * sum_t;
  out.second_trunc = (1.0 / nf) * mat_t;
  for (int a = 0; a < d; ++a) {
    const double var_t =
        std::max(0.0, sum_t2[a] / nf - out.mean_trunc[a] * out.mean_trunc[a]);
    out.mean_trunc_stderr = std::max(out.mean_trunc_stderr, std::sqrt(var_t / nf));
  }
  if (alpha > 1.0 + 1e-9) {
    out.mean_full = (1.0 / nf) * sum_f;
    for (int a = 0; a < d; ++a) {
      const double mu = (*out.mean_full)[a];
      const double var_f = std::max(0.0, sum_f2[a] / nf - mu * mu);
      out.mean_full_stderr = std::max(out.mean_full_stderr, std::sqrt(var_f / nf));
    }
    Mat ct = out.second_trunc;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) ct(a, b) -= (*out.mean_full)[a] * (*out.mean_full)[b];
    out.cov_trunc = ct;
  }
  if (alpha > 2.0 + 1e-9) {
    Mat cov = (1.0 / nf) * mat_f;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) cov(a, b) -= (*out.mean_full)[a] * (*out.mean_full)[b];
    out.cov_full = cov;
  }
  return out;
}

/// Mean-field force estimate K <U_1>, with U_1 the unit-coupling contribution
/// (the sign of kappa is kept, its magnitude replaced by 1).  Defined only in
/// the mean-field regime alpha > 1, where <U_1> is finite.
inline Vec mean_field_estimate(const SpatialDensity& de, const ForceLaw& law, double K,
                               long long n, std::uint64_t seed) {
  validate(de);
  validate(law);
  if (!(tail_alpha(de, law) > 1.0))
    throw std::invalid_argument("mean_field_estimate: requires alpha > 1");
  if (n < 1) throw std::invalid_argument("mean_field_estimate: n must be >= 1");
  ForceLaw unit = law;
  unit.kappa = law.kappa > 0.0 ? 1.0 : -1.0;
  RandomStream rs(seed, 0);
  Vec sum = make_vec(de.dim);
  for (long long i = 0; i < n; ++i) sum += sample_force(de, unit, rs);
  return (K / static_cast<double>(n)) * sum;
}

/// Sample covariance (mean removed, divisor m-1).
inline Mat sample_covariance(const std::vector<Vec>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_covariance: need at least 2 samples");
  const int d = xs.front().dim;
  const double m = static_cast<double>(xs.size());
  Vec mean = make_vec(d);
  for (const Vec& x : xs) mean += x;
  mean = (1.0 / m) * mean;
  Mat cov = make_mat(d);
  for (const Vec& x : xs) {
    const Vec c = x - mean;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) cov(a, b) += c[a] * c[b];
  }
  return (1.0 / (m - 1.0)) * cov;
}

inline std::vector<double> component(const std::vector<Vec>& xs, int k) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const Vec& x : xs) out.push_back(x[k]);
  return out;
}

/// Variance after discarding a fraction of each tail (guards a log-divergent
/// second moment against its extreme order statistics).
inline double trimmed_variance(std::vector<double> xs, double trim_fraction) {
  if (!(trim_fraction >= 0.0) || trim_fraction >= 0.5)
    throw std::invalid_argument("trimmed_variance: fraction must lie in [0, 0.5)");
  if (xs.size() < 10) throw std::invalid_argument("trimmed_variance: need at least 10 samples");
  std::sort(xs.begin(), xs.end());
  const long long n = static_cast<long long>(xs.size());
  const long long t = static_cast<long long>(trim_fraction * static_cast<double>(n));
  const long long lo = t, hi = n - t;
  if (hi - lo < 2) throw std::invalid_argument("trimmed_variance: trim leaves too few samples");
  double mean = 0.0;
  for (long long i = lo; i < hi; ++i) mean += xs[static_cast<std::size_t>(i)];
  mean /= static_cast<double>(hi - lo);
  double v = 0.0;
  for (long long i = lo; i < hi; ++i) {
    const double c = xs[static_cast<std::size_t>(i)] - mean;
    v += c * c;
  }
  return v / static_cast<double>(hi - lo - 1);
}

}  // namespace stablesum
