// stablesum command-line tool.
//
// Subcommands:
//   simulate      draw a renormalized force ensemble, write samples + config
//   verify        simulate, compare the empirical CF against the limit law,
//                 write a verdict JSON (exit 1 when the check fails)
//   limits        tabulate the limit-law CF and the drift/scale decomposition
//   renorm-table  tabulate the renormalization schemes over a range of N
//   oracle        compare the closed-form tail integral against quadrature
//
// All randomness is controlled by run.seed; outputs carry no timestamps, so
// a rerun of the same resolved configuration is byte-identical.
//
// Exit codes: 0 success / verification passed, 1 verification failed,
// 2 configuration or usage error.

#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stablesum/charfn.hpp"
#include "stablesum/config.hpp"
#include "stablesum/csv.hpp"
#include "stablesum/density.hpp"
#include "stablesum/mc.hpp"
#include "stablesum/renorm.hpp"
#include "stablesum/tail_integrals.hpp"

namespace ss = stablesum;
using json = nlohmann::json;

namespace {

constexpr long long kMomentSamples = 200000;  // draws for MC moment estimates

struct CommonFlags {
  std::string config_path;
  std::optional<long long> seed;
  std::optional<std::string> out_prefix;
  std::optional<long long> replicas;
  std::optional<long long> particles;
  std::optional<std::string> grid;
  std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key = value configuration file")->required();
  cmd->add_option("--seed", f.seed, "override run.seed");
  cmd->add_option("--out", f.out_prefix, "override out.prefix (output path prefix)");
  cmd->add_option("--replicas", f.replicas, "override run.replicas");
  cmd->add_option("--particles", f.particles, "override run.particles");
  cmd->add_option("--grid", f.grid,
                  "override grid: tensor:PER_AXIS:Z_MAX or ray:N:Z_MAX:dx[,dy[,dz]]");
  cmd->add_option("--threads", f.threads, "override run.threads (0 = hardware)");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss_(s);
  while (std::getline(ss_, tok, sep)) out.push_back(tok);
  return out;
}

ss::RunSetup load_setup(const CommonFlags& f) {
  ss::RunSetup s = ss::resolve_run_setup(ss::parse_config_file(f.config_path));
  if (f.seed) {
    s.seed = static_cast<std::uint64_t>(*f.seed);
    s.seed_provided = true;
  }
  if (f.out_prefix) s.out_prefix = *f.out_prefix;
  if (f.replicas) s.replicas = *f.replicas;
  if (f.particles) s.particles = *f.particles;
  if (f.threads) s.threads = *f.threads;
  if (f.grid) {
    const auto parts = split(*f.grid, ':');
    if (parts.empty()) throw std::invalid_argument("--grid: empty specification");
    if (parts[0] == "tensor" && parts.size() == 3) {
      s.grid = ss::GridKind::Tensor;
      s.grid_per_axis = std::stoi(parts[1]);
      s.grid_z_max = std::stod(parts[2]);
    } else if (parts[0] == "ray" && parts.size() == 4) {
      s.grid = ss::GridKind::Ray;
      s.grid_n = std::stoi(parts[1]);
      s.grid_z_max = std::stod(parts[2]);
      const auto comps = split(parts[3], ',');
      if (static_cast<int>(comps.size()) != s.dim)
        throw std::invalid_argument("--grid: direction needs density.dim components");
      ss::Vec dir = ss::make_vec(s.dim);
      for (int i = 0; i < s.dim; ++i) dir[i] = std::stod(comps[static_cast<std::size_t>(i)]);
      s.grid_direction = dir;
    } else {
      throw std::invalid_argument("--grid: use tensor:PER_AXIS:Z_MAX or ray:N:Z_MAX:dx[,dy[,dz]]");
    }
  }
  if (!s.seed_provided)
    std::cerr << "warning: run.seed not set; using default seed " << ss::kDefaultSeed << "\n";
  return s;
}

int effective_threads(const ss::RunSetup& s) {
  if (s.threads > 0) return s.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::uint64_t moment_seed(const ss::RunSetup& s) {
  // A distinct master seed keeps moment streams independent of every replica.
  return ss::detail::mix64(s.seed ^ 0x6d6f6d656e747321ULL);
}

/// Everything a run derives from its setup.
struct RunPieces {
  ss::SpatialDensity density;
  ss::ForceLaw law;         // as configured (unit coupling in vlasov/fluctuation)
  ss::ForceLaw sample_law;  // what the ensemble actually draws with
  double alpha = 0.0;
  int q = +1;
  double scale_a = 1.0;  // sample renormalization F -> scale_a F + shift_b
  ss::Vec shift_b;
  ss::StableLawSpec spec;  // limit-law parameters for predictions
};

RunPieces prepare_run(const ss::RunSetup& s, bool need_limit_spec) {
  RunPieces p;
  p.density = ss::build_density(s);
  p.law = ss::build_force_law(s);
  p.alpha = ss::tail_alpha(p.density, p.law);
  p.q = p.law.kappa > 0.0 ? +1 : -1;
  p.shift_b = ss::make_vec(s.dim);
  p.sample_law = p.law;

  const ss::Regime regime = ss::classify_regime(p.alpha);
  const long long N = s.particles;

  if (s.mode != ss::LimitMode::Clt && std::abs(std::abs(p.law.kappa) - 1.0) > 1e-12)
    throw std::invalid_argument(
        "vlasov/fluctuation modes renormalize the coupling: set law.kappa to +1 or -1 and put "
        "the magnitude into scheme.K");

  switch (s.mode) {
    case ss::LimitMode::Fluctuation: {
      ss::RenormScheme rs;
      rs.alpha = p.alpha;
      rs.K = s.K;
      rs.kind = p.alpha < 1.0 ? ss::SchemeKind::FluctuationAN : ss::SchemeKind::FluctuationHighAlpha;
      if (std::isfinite(p.alpha)) {
        p.scale_a = ss::a_n_scheme(rs, N);
      } else {
        rs.alpha = 3.0;  // alpha > 2 branch: N |a|^2 = K
        p.scale_a = ss::a_n_scheme(rs, N);
      }
      break;
    }
    case ss::LimitMode::Vlasov: {
      if (!(p.alpha >= 1.0 - 1e-12))
        throw std::invalid_argument("vlasov mode requires alpha >= 1");
      p.sample_law.kappa = static_cast<double>(p.q) * s.K / static_cast<double>(N);
      p.scale_a = 1.0;  // the finite-N law is the object itself
      break;
    }
    case ss::LimitMode::Clt: {
      ss::CltMoments m;
      m.u_c = s.u_c;
      m.v = ss::make_vec(s.dim);
      m.mean_Fres = ss::make_vec(s.dim);
      m.mean_U_trunc = ss::make_vec(s.dim);
      const ss::AngularFunction C = ss::tail_angular(p.density, p.law);
      if (regime == ss::Regime::Singular1) {
        m.v = ss::drift_vector_v(C);
        const ss::TruncatedMoments tm =
            ss::truncated_moments(p.density, p.law, s.u_c, kMomentSamples, moment_seed(s));
        m.mean_U_trunc = tm.mean_trunc;
      } else if (p.alpha > 1.0) {
        const ss::TruncatedMoments tm =
            ss::truncated_moments(p.density, p.law, s.u_c, kMomentSamples, moment_seed(s));
        if (tm.mean_full) m.mean_Fres = static_cast<double>(N) * (*tm.mean_full);
      }
      const ss::CltRenorm r = ss::clt_renorm(std::isfinite(p.alpha) ? p.alpha : 3.0, N, m);
      p.scale_a = r.a_n;
      p.shift_b = r.b_n;
      break;
    }
  }

  if (need_limit_spec) {
    ss::StableLawSpec spec;
    spec.dim = s.dim;
    spec.alpha = std::isfinite(p.alpha) ? p.alpha : 3.0;  // any alpha > 2 is the same regime
    spec.regime = ss::classify_regime(spec.alpha);
    spec.sign_q = p.q;
    spec.dispersion = s.K;
    spec.u_c = s.u_c;
    ss::ForceLaw unit = p.law;
    if (s.mode != ss::LimitMode::Clt) unit.kappa = 1.0;  // q carried by sign_q
    spec.angular = ss::tail_angular(p.density, unit);
    const bool need_mean = (s.mode == ss::LimitMode::Vlasov && spec.alpha > 1.0) ||
                           (s.mode == ss::LimitMode::Clt && spec.regime == ss::Regime::Gauss);
    const bool need_cov = spec.regime == ss::Regime::Gauss;
    if (need_mean || need_cov) {
      const ss::TruncatedMoments tm =
          ss::truncated_moments(p.density, unit, s.u_c, kMomentSamples, moment_seed(s) + 1);
      if (tm.mean_full) spec.mean_U = tm.mean_full;
      if (tm.cov_trunc) spec.cov_trunc = tm.cov_trunc;
      if (tm.cov_full) spec.cov_Mbar = tm.cov_full;
    }
    if (s.mode == ss::LimitMode::Fluctuation && spec.regime != ss::Regime::StableSub1 &&
        spec.angular.symmetric)
      spec.mean_U = ss::make_vec(s.dim);  // even tail: declared zero mean
    ss::validate_spec(spec);
    p.spec = spec;
  }
  return p;
}

void write_resolved_config(const ss::RunSetup& s) {
  ss::write_text_file(s.out_prefix + "_config.txt", ss::serialize_config(ss::to_config(s)));
}

std::vector<ss::Vec> simulate_samples(const ss::RunSetup& s, const RunPieces& p) {
  std::vector<ss::Vec> forces = ss::run_ensemble(p.density, p.sample_law, s.particles, s.replicas,
                                                 s.seed, effective_threads(s));
  ss::renormalize_samples(forces, p.scale_a, p.shift_b);
  return forces;
}

void write_samples_csv(const ss::RunSetup& s, const std::vector<ss::Vec>& forces) {
  ss::CsvTable t;
  t.header = {"replica"};
  for (int i = 0; i < s.dim; ++i) t.header.push_back("F" + std::to_string(i));
  for (std::size_t r = 0; r < forces.size(); ++r) {
    std::vector<std::string> row{std::to_string(r)};
    for (int i = 0; i < s.dim; ++i) row.push_back(ss::format_double(forces[r][i]));
    t.add_row(std::move(row));
  }
  ss::write_csv(s.out_prefix + "_samples.csv", t);
}

int run_simulate(const CommonFlags& f) {
  const ss::RunSetup s = load_setup(f);
  const RunPieces p = prepare_run(s, /*need_limit_spec=*/false);
  const auto forces = simulate_samples(s, p);
  write_samples_csv(s, forces);
  write_resolved_config(s);
  std::cout << "wrote " << s.out_prefix << "_samples.csv (" << forces.size() << " replicas), "
            << s.out_prefix << "_config.txt\n";
  return 0;
}

int run_verify(const CommonFlags& f) {
  const ss::RunSetup s = load_setup(f);
  const RunPieces p = prepare_run(s, /*need_limit_spec=*/true);
  const auto forces = simulate_samples(s, p);
  const auto grid = ss::build_grid(s);
  const ss::EcfResult ecf = ss::empirical_cf(forces, grid, effective_threads(s));

  double sup = 0.0, max_se = 0.0;
  ss::CsvTable t;
  t.header = {"z0", "z1", "z2", "ecf_re", "ecf_im", "pred_re", "pred_im", "abs_diff", "stderr"};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const std::complex<double> pred =
        std::exp(ss::limit_log_cf(p.spec, grid[j], s.mode, s.particles));
    const double diff = std::abs(pred - ecf.values[j]);
    sup = std::max(sup, diff);
    max_se = std::max(max_se, ecf.stderrs[j]);
    std::vector<std::string> row;
    for (int i = 0; i < 3; ++i) row.push_back(ss::format_double(i < s.dim ? grid[j][i] : 0.0));
    row.push_back(ss::format_double(ecf.values[j].real()));
    row.push_back(ss::format_double(ecf.values[j].imag()));
    row.push_back(ss::format_double(pred.real()));
    row.push_back(ss::format_double(pred.imag()));
    row.push_back(ss::format_double(diff));
    row.push_back(ss::format_double(ecf.stderrs[j]));
    t.add_row(std::move(row));
  }
  const double tol = s.verify_tolerance ? *s.verify_tolerance : std::max(0.03, 3.0 * max_se);
  const bool pass = sup <= tol;

  json verdict;
  verdict["regime"] = ss::regime_name(p.spec.regime);
  verdict["mode"] = ss::limit_mode_name(s.mode);
  verdict["N"] = s.particles;
  verdict["replicas"] = s.replicas;
  verdict["sup_diff"] = sup;
  verdict["tolerance"] = tol;
  verdict["max_stderr"] = max_se;
  verdict["pass"] = pass;
  verdict["config_hash"] = ss::config_hash(ss::to_config(s));
  ss::write_text_file(s.out_prefix + "_verdict.json", verdict.dump(2) + "\n");
  ss::write_csv(s.out_prefix + "_ecf.csv", t);
  write_resolved_config(s);
  std::cout << verdict.dump(2) << "\n";
  return pass ? 0 : 1;
}

int run_limits(const CommonFlags& f) {
  const ss::RunSetup s = load_setup(f);
  const RunPieces p = prepare_run(s, /*need_limit_spec=*/true);
  const ss::AsymptoticDecomposition dec =
      ss::asymptotic_decomposition(p.spec, s.particles, s.mode);

  const auto grid = ss::build_grid(s);
  ss::CsvTable t;
  t.header = {"z0", "z1", "z2", "log_cf_re", "log_cf_im", "cf_re", "cf_im"};
  for (const ss::Vec& z : grid) {
    const std::complex<double> l = ss::limit_log_cf(p.spec, z, s.mode, s.particles);
    const std::complex<double> c = std::exp(l);
    std::vector<std::string> row;
    for (int i = 0; i < 3; ++i) row.push_back(ss::format_double(i < s.dim ? z[i] : 0.0));
    row.push_back(ss::format_double(l.real()));
    row.push_back(ss::format_double(l.imag()));
    row.push_back(ss::format_double(c.real()));
    row.push_back(ss::format_double(c.imag()));
    t.add_row(std::move(row));
  }
  ss::write_csv(s.out_prefix + "_limit.csv", t);
  write_resolved_config(s);

  json out;
  out["alpha"] = p.alpha;
  out["regime"] = ss::regime_name(p.spec.regime);
  out["mode"] = ss::limit_mode_name(s.mode);
  out["law"] = dec.law;
  out["sigma_n"] = dec.sigma;
  std::vector<double> drift(static_cast<std::size_t>(s.dim));
  for (int i = 0; i < s.dim; ++i) drift[static_cast<std::size_t>(i)] = dec.drift[i];
  out["drift"] = drift;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_renorm_table(const CommonFlags& f) {
  const ss::RunSetup s = load_setup(f);
  const ss::SpatialDensity de = ss::build_density(s);
  const ss::ForceLaw law = ss::build_force_law(s);
  const double alpha = ss::tail_alpha(de, law);
  const double alpha_eff = std::isfinite(alpha) ? alpha : 3.0;
  const ss::Regime regime = ss::classify_regime(alpha_eff);

  ss::RenormScheme base;
  base.alpha = alpha_eff;
  base.K = s.K;
  base.d = de.dim;
  base.nu = de.nu;
  base.delta = law.delta;

  ss::CsvTable t;
  t.header = {"N",           "a_n",           "scale_fix_t_L", "scale_fix_l_T",
              "phys_size_kappa", "phys_force_L", "high_kappa",   "high_L"};
  for (long long N : {100LL, 1000LL, 10000LL, 100000LL, 1000000LL, 10000000LL}) {
    std::vector<std::string> row{std::to_string(N)};
    ss::RenormScheme an = base;
    an.kind = regime == ss::Regime::StableSub1 ? ss::SchemeKind::FluctuationAN
              : regime == ss::Regime::Singular1 ? ss::SchemeKind::SingularAN
                                                : ss::SchemeKind::VlasovAN;
    row.push_back(ss::format_double(ss::a_n_scheme(an, N)));
    ss::RenormScheme sc = base;
    sc.kind = ss::SchemeKind::Scale;
    row.push_back(ss::format_double(ss::scale_renorm(sc, N, ss::ScaleFix::FixT).L_n));
    row.push_back(ss::format_double(ss::scale_renorm(sc, N, ss::ScaleFix::FixL).T_n));
    ss::RenormScheme pf = base;
    pf.kind = ss::SchemeKind::PhysicalFixedSize;
    row.push_back(ss::format_double(ss::physical_renorm(pf, N).kappa_n));
    pf.kind = ss::SchemeKind::PhysicalFixedForce;
    row.push_back(ss::format_double(ss::physical_renorm(pf, N).L_n));
    if (alpha_eff >= 1.0) {
      ss::RenormScheme hi = base;
      hi.kind = ss::SchemeKind::FluctuationHighAlpha;
      row.push_back(
          ss::format_double(ss::fluctuation_high_alpha(hi, N, ss::HighAlphaCase::FixedSize).kappa_n));
      row.push_back(
          ss::format_double(ss::fluctuation_high_alpha(hi, N, ss::HighAlphaCase::FixedForce).L_n));
    } else {
      row.push_back("");
      row.push_back("");
    }
    t.add_row(std::move(row));
  }
  ss::write_csv(s.out_prefix + "_renorm.csv", t);
  write_resolved_config(s);
  std::cout << ss::csv_to_string(t);
  return 0;
}

int run_oracle(const CommonFlags& f) {
  const ss::RunSetup s = load_setup(f);
  const ss::SpatialDensity de = ss::build_density(s);
  const ss::ForceLaw law = ss::build_force_law(s);
  const double alpha = ss::tail_alpha(de, law);
  if (!std::isfinite(alpha)) throw std::invalid_argument("oracle: delta = 0 has no tail integral");

  ss::TailIntegralParams params;
  params.alpha = alpha;
  params.R = s.u_c;
  const int n = s.grid == ss::GridKind::Ray ? s.grid_n : s.grid_per_axis;

  ss::CsvTable t;
  t.header = {"z", "closed_re", "closed_im", "oracle_re", "oracle_im", "rel_err"};
  double worst = 0.0;
  for (int kix = 0; kix <= 2 * n; ++kix) {
    const double z = -s.grid_z_max + s.grid_z_max * kix / n;
    const std::complex<double> oracle = ss::j_alpha_oracle(params, z);
    std::complex<double> closed{0.0, 0.0};
    bool have_closed = true;
    try {
      closed = ss::j_alpha(params, z);
    } catch (const std::exception&) {
      have_closed = false;  // closed form is defined only for alpha in (0,2)
    }
    const double rel = have_closed ? std::abs(closed - oracle) / std::abs(oracle) : 0.0;
    worst = std::max(worst, rel);
    std::vector<std::string> row{ss::format_double(z)};
    row.push_back(have_closed ? ss::format_double(closed.real()) : "");
    row.push_back(have_closed ? ss::format_double(closed.imag()) : "");
    row.push_back(ss::format_double(oracle.real()));
    row.push_back(ss::format_double(oracle.imag()));
    row.push_back(have_closed ? ss::format_double(rel) : "");
    t.add_row(std::move(row));
  }
  ss::write_csv(s.out_prefix + "_oracle.csv", t);
  write_resolved_config(s);
  std::cout << "alpha = " << ss::format_double(alpha) << ", max rel err = "
            << ss::format_double(worst) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit laws of renormalized random force sums"};
  app.require_subcommand(1);

  CommonFlags fsim, fver, flim, ftab, fora;
  CLI::App* sim = app.add_subcommand("simulate", "draw a renormalized force ensemble");
  add_common_flags(sim, fsim);
  CLI::App* ver = app.add_subcommand("verify", "compare empirical CF against the limit law");
  add_common_flags(ver, fver);
  CLI::App* lim = app.add_subcommand("limits", "tabulate the limit-law CF and decomposition");
  add_common_flags(lim, flim);
  CLI::App* tab = app.add_subcommand("renorm-table", "tabulate renormalization schemes");
  add_common_flags(tab, ftab);
  CLI::App* ora = app.add_subcommand("oracle", "closed-form tail integral vs quadrature");
  add_common_flags(ora, fora);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are configuration errors
  }

  try {
    if (sim->parsed()) return run_simulate(fsim);
    if (ver->parsed()) return run_verify(fver);
    if (lim->parsed()) return run_limits(flim);
    if (tab->parsed()) return run_renorm_table(ftab);
    if (ora->parsed()) return run_oracle(fora);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
