#pragma once

// Flat `key = value` run configuration with a strict schema.
//
// Keys are dotted paths (density.*, law.*, scheme.*, run.*, grid.*,
// verify.*, out.*).  Parsing is line-based: blank lines and lines starting
// with '#' are ignored, duplicate keys are an error.  Resolution fills every
// applicable key with its default, rejects any key outside the applicable
// set (including keys that exist in the schema but do not apply to the
// selected variants), and the resolved setup serializes back to an identical
// key set: resolve(parse(serialize(to_config(s)))) == s.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablesum/charfn.hpp"
#include "stablesum/density.hpp"
#include "stablesum/geometry.hpp"
#include "stablesum/mc.hpp"

namespace stablesum {

/// Default master seed used when run.seed is absent; the CLI warns on stderr
/// whenever this fallback is taken.
inline constexpr std::uint64_t kDefaultSeed = 8675309ULL;

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace detail

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (!m.emplace(key, val).second)
      throw std::invalid_argument("config: duplicate key '" + key + "'");
  }
  return m;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Shortest round-trip decimal representation (%.17g, trimmed by re-reading).
inline std::string format_double(double x) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string serialize_config(const ConfigMap& m) {
  std::ostringstream out;
  for (const auto& [k, v] : m) out << k << " = " << v << "\n";
  return out.str();
}

/// FNV-1a 64 over the serialized configuration, as fixed-width hex.
inline std::string config_hash(const ConfigMap& m) {
  const std::string s = serialize_config(m);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Typed schema
// ---------------------------------------------------------------------------

enum class ShapeKind { Uniform, Dipole, TwoPoint, Cap };
enum class GridKind { Tensor, Ray };

/// Fully resolved run description.
struct RunSetup {
  // density
  int dim = 3;
  double nu = 0.0;
  double r_c = 1.0;
  double L = 10.0;
  double inner_weight = 1.0;
  double outer_nu = 0.0;
  OuterDirection outer_direction = OuterDirection::InheritAngular;
  ShapeKind shape = ShapeKind::Uniform;
  double shape_scale = 1.0;
  Vec shape_axis = make_vec3(0, 0, 1);
  double shape_amp = 0.0;
  double shape_c_plus = 1.0;
  double shape_c_minus = 1.0;
  double shape_cos_cut = 0.0;
  double shape_inside = 1.0;
  double shape_outside = 0.0;
  // law
  double kappa = 1.0;
  double delta = 2.0;
  bool damped = false;
  double lambda_bar = 1.0;
  // scheme
  LimitMode mode = LimitMode::Fluctuation;
  double K = 1.0;
  double u_c = 1.0;
  // run
  long long particles = 1000;
  long long replicas = 1000;
  std::uint64_t seed = kDefaultSeed;
  bool seed_provided = false;  // false: kDefaultSeed fallback was taken
  int threads = 0;             // 0 = use the hardware concurrency
  // grid
  GridKind grid = GridKind::Tensor;
  int grid_per_axis = 21;
  int grid_n = 30;
  double grid_z_max = 5.0;
  Vec grid_direction = make_vec3(1, 0, 0);
  // verify / out
  std::optional<double> verify_tolerance;
  std::string out_prefix = "run";
};

namespace detail {

class ConfigReader {
 public:
  explicit ConfigReader(const ConfigMap& m) : m_(m) {}

  std::string str(const std::string& key, const std::string& dflt) {
    used_.insert(key);
    auto it = m_.find(key);
    return it == m_.end() ? dflt : it->second;
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return m_.count(key) != 0;
  }

  double num(const std::string& key, double dflt) {
    used_.insert(key);
    auto it = m_.find(key);
    if (it == m_.end()) return dflt;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
      throw std::invalid_argument("config: key '" + key + "' is not a number: " + it->second);
    return v;
  }

  long long integer(const std::string& key, long long dflt) {
    const double v = num(key, static_cast<double>(dflt));
    const long long n = static_cast<long long>(v);
    if (static_cast<double>(n) != v)
      throw std::invalid_argument("config: key '" + key + "' must be an integer");
    return n;
  }

  bool flag(const std::string& key, bool dflt) {
    used_.insert(key);
    auto it = m_.find(key);
    if (it == m_.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument("config: key '" + key + "' must be true/false");
  }

  Vec vec(const std::string& key, int dim, const Vec& dflt) {
    used_.insert(key);
    auto it = m_.find(key);
    if (it == m_.end()) {
      Vec v = make_vec(dim);
      for (int i = 0; i < dim && i < dflt.dim; ++i) v[i] = dflt[i];
      return v;
    }
    std::vector<double> comps;
    std::string tok;
    std::istringstream ss(it->second);
    while (std::getline(ss, tok, ',')) {
      char* end = nullptr;
      tok = trim(tok);
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw std::invalid_argument("config: key '" + key + "' has a bad component: " + tok);
      comps.push_back(v);
    }
    if (static_cast<int>(comps.size()) != dim)
      throw std::invalid_argument("config: key '" + key + "' needs " + std::to_string(dim) +
                                  " comma-separated components");
    Vec v = make_vec(dim);
    for (int i = 0; i < dim; ++i) v[i] = comps[static_cast<std::size_t>(i)];
    return v;
  }

  /// Every present key must have been consumed by one of the accessors.
  void reject_unknown() const {
    for (const auto& [k, v] : m_)
      if (!used_.count(k))
        throw std::invalid_argument("config: unknown or inapplicable key '" + k + "'");
  }

 private:
  const ConfigMap& m_;
  std::set<std::string> used_;
};

}  // namespace detail

inline RunSetup resolve_run_setup(const ConfigMap& m) {
  detail::ConfigReader r(m);
  RunSetup s;

  s.dim = static_cast<int>(r.integer("density.dim", 3));
  if (s.dim < 1 || s.dim > 3) throw std::invalid_argument("config: density.dim must be 1..3");
  s.nu = r.num("density.nu", 0.0);
  s.r_c = r.num("density.r_c", 1.0);
  s.L = r.num("density.L", 10.0);
  s.inner_weight = r.num("density.inner_weight", 1.0);
  s.outer_nu = r.num("density.outer_nu", 0.0);
  const std::string od = r.str("density.outer_direction", "inherit");
  if (od == "inherit")
    s.outer_direction = OuterDirection::InheritAngular;
  else if (od == "isotropic")
    s.outer_direction = OuterDirection::Isotropic;
  else
    throw std::invalid_argument("config: density.outer_direction must be inherit|isotropic");

  const std::string sh = r.str("density.shape", "uniform");
  if (sh == "uniform") {
    s.shape = ShapeKind::Uniform;
    s.shape_scale = r.num("density.shape.scale", 1.0);
  } else if (sh == "dipole") {
    s.shape = ShapeKind::Dipole;
    s.shape_scale = r.num("density.shape.scale", 1.0);
    s.shape_axis = r.vec("density.shape.axis", s.dim, make_vec3(0, 0, 1));
    s.shape_amp = r.num("density.shape.amp", 0.0);
  } else if (sh == "two_point") {
    if (s.dim != 1) throw std::invalid_argument("config: two_point shape requires density.dim = 1");
    s.shape = ShapeKind::TwoPoint;
    s.shape_c_plus = r.num("density.shape.c_plus", 1.0);
    s.shape_c_minus = r.num("density.shape.c_minus", 1.0);
  } else if (sh == "cap") {
    s.shape = ShapeKind::Cap;
    s.shape_axis = r.vec("density.shape.axis", s.dim, make_vec3(0, 0, 1));
    s.shape_cos_cut = r.num("density.shape.cos_cut", 0.0);
    s.shape_inside = r.num("density.shape.inside", 1.0);
    s.shape_outside = r.num("density.shape.outside", 0.0);
  } else {
    throw std::invalid_argument("config: density.shape must be uniform|dipole|two_point|cap");
  }

  s.kappa = r.num("law.kappa", 1.0);
  s.delta = r.num("law.delta", 2.0);
  s.damped = r.flag("law.damped", false);
  if (s.damped) s.lambda_bar = r.num("law.lambda_bar", 1.0);

  const std::string mode = r.str("scheme.mode", "fluctuation");
  if (mode == "clt")
    s.mode = LimitMode::Clt;
  else if (mode == "vlasov")
    s.mode = LimitMode::Vlasov;
  else if (mode == "fluctuation")
    s.mode = LimitMode::Fluctuation;
  else
    throw std::invalid_argument("config: scheme.mode must be clt|vlasov|fluctuation");
  s.K = r.num("scheme.K", 1.0);
  s.u_c = r.num("scheme.u_c", 1.0);

  s.particles = r.integer("run.particles", 1000);
  s.replicas = r.integer("run.replicas", 1000);
  s.seed_provided = r.has("run.seed");
  s.seed = static_cast<std::uint64_t>(r.integer("run.seed", static_cast<long long>(kDefaultSeed)));
  s.threads = static_cast<int>(r.integer("run.threads", 0));
  if (s.threads < 0) throw std::invalid_argument("config: run.threads must be >= 0");

  const std::string gk = r.str("grid.kind", "tensor");
  if (gk == "tensor") {
    s.grid = GridKind::Tensor;
    s.grid_per_axis = static_cast<int>(r.integer("grid.per_axis", 21));
  } else if (gk == "ray") {
    s.grid = GridKind::Ray;
    s.grid_n = static_cast<int>(r.integer("grid.n", 30));
    s.grid_direction = r.vec("grid.direction", s.dim, make_vec3(1, 0, 0));
  } else {
    throw std::invalid_argument("config: grid.kind must be tensor|ray");
  }
  s.grid_z_max = r.num("grid.z_max", 5.0);

  if (r.has("verify.tolerance")) s.verify_tolerance = r.num("verify.tolerance", 0.0);
  s.out_prefix = r.str("out.prefix", "run");

  r.reject_unknown();
  return s;
}

inline AngularFunction build_shape(const RunSetup& s) {
  switch (s.shape) {
    case ShapeKind::Uniform: return angular_uniform(s.dim, s.shape_scale);
    case ShapeKind::Dipole: return angular_dipole(s.dim, s.shape_axis, s.shape_amp, s.shape_scale);
    case ShapeKind::TwoPoint: return angular_two_point(s.shape_c_plus, s.shape_c_minus);
    case ShapeKind::Cap:
      return angular_cap(s.dim, s.shape_axis, s.shape_cos_cut, s.shape_inside, s.shape_outside);
  }
  throw std::logic_error("build_shape: unreachable");
}

inline SpatialDensity build_density(const RunSetup& s) {
  SpatialDensity de;
  de.dim = s.dim;
  de.nu = s.nu;
  de.r_c = s.r_c;
  de.L = s.L;
  de.inner_weight = s.inner_weight;
  de.shape = build_shape(s);
  de.outer_nu = s.outer_nu;
  de.outer_direction = s.outer_direction;
  validate(de);
  return de;
}

inline ForceLaw build_force_law(const RunSetup& s) {
  ForceLaw law;
  law.kappa = s.kappa;
  law.delta = s.delta;
  law.damped = s.damped;
  law.lambda_bar = s.damped ? s.lambda_bar : 0.0;
  validate(law);
  return law;
}

inline std::vector<Vec> build_grid(const RunSetup& s) {
  if (s.grid == GridKind::Tensor) return tensor_grid(s.dim, s.grid_per_axis, s.grid_z_max);
  return ray_grid(s.grid_direction, s.grid_n, s.grid_z_max);
}

namespace detail {

inline std::string vec_to_string(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.dim; ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace detail

/// Resolved configuration: exactly the applicable keys, defaults included.
inline ConfigMap to_config(const RunSetup& s) {
  ConfigMap m;
  m["density.dim"] = std::to_string(s.dim);
  m["density.nu"] = format_double(s.nu);
  m["density.r_c"] = format_double(s.r_c);
  m["density.L"] = format_double(s.L);
  m["density.inner_weight"] = format_double(s.inner_weight);
  m["density.outer_nu"] = format_double(s.outer_nu);
  m["density.outer_direction"] =
      s.outer_direction == OuterDirection::InheritAngular ? "inherit" : "isotropic";
  switch (s.shape) {
    case ShapeKind::Uniform:
      m["density.shape"] = "uniform";
      m["density.shape.scale"] = format_double(s.shape_scale);
      break;
    case ShapeKind::Dipole:
      m["density.shape"] = "dipole";
      m["density.shape.scale"] = format_double(s.shape_scale);
      m["density.shape.axis"] = detail::vec_to_string(s.shape_axis);
      m["density.shape.amp"] = format_double(s.shape_amp);
      break;
    case ShapeKind::TwoPoint:
      m["density.shape"] = "two_point";
      m["density.shape.c_plus"] = format_double(s.shape_c_plus);
      m["density.shape.c_minus"] = format_double(s.shape_c_minus);
      break;
    case ShapeKind::Cap:
      m["density.shape"] = "cap";
      m["density.shape.axis"] = detail::vec_to_string(s.shape_axis);
      m["density.shape.cos_cut"] = format_double(s.shape_cos_cut);
      m["density.shape.inside"] = format_double(s.shape_inside);
      m["density.shape.outside"] = format_double(s.shape_outside);
      break;
  }
  m["law.kappa"] = format_double(s.kappa);
  m["law.delta"] = format_double(s.delta);
  m["law.damped"] = s.damped ? "true" : "false";
  if (s.damped) m["law.lambda_bar"] = format_double(s.lambda_bar);
  m["scheme.mode"] = limit_mode_name(s.mode);
  m["scheme.K"] = format_double(s.K);
  m["scheme.u_c"] = format_double(s.u_c);
  m["run.particles"] = std::to_string(s.particles);
  m["run.replicas"] = std::to_string(s.replicas);
  m["run.seed"] = std::to_string(s.seed);
  m["run.threads"] = std::to_string(s.threads);
  if (s.grid == GridKind::Tensor) {
    m["grid.kind"] = "tensor";
    m["grid.per_axis"] = std::to_string(s.grid_per_axis);
  } else {
    m["grid.kind"] = "ray";
    m["grid.n"] = std::to_string(s.grid_n);
    m["grid.direction"] = detail::vec_to_string(s.grid_direction);
  }
  m["grid.z_max"] = format_double(s.grid_z_max);
  if (s.verify_tolerance) m["verify.tolerance"] = format_double(*s.verify_tolerance);
  m["out.prefix"] = s.out_prefix;
  return m;
}

}  // namespace stablesum
