// mwindex - complex index of refraction of a dilute gas for matter
// waves. Subcommands:
//   index     one row per (v_p, formula): Re/Im(n-1), rho, diagnostics
//   scan      velocity scan with per-formula Re/Im(n-1) and sigma_eff
//   validate  built-in consistency suite (normalization, T->0
//             equivalence, MC vs quadrature, cross-formalism identity)
//   estimate  order-of-magnitude (n-1)/n_t for light and matter waves
//
// Exit codes: 0 ok, 1 validation failure, 2 config error, 3 numerical
// error.

#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mwindex/mwindex.hpp"
#include "run_config.hpp"

namespace {

using namespace mwindex;
using cli::RunConfig;

std::string fmt(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& t, const std::string& path,
                 const std::string& format) {
  std::ostringstream out;
  if (format == "csv") {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << "\n";
    }
  } else {
    out << "[\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      out << "  {";
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? ", " : "") << "\"" << t.columns[i] << "\": ";
        const std::string& v = t.rows[r][i];
        const bool numeric = !v.empty() && v != "nan" &&
                             (std::isdigit(static_cast<unsigned char>(v[0])) ||
                              v[0] == '-' || v[0] == '+');
        if (numeric)
          out << v;
        else
          out << "\"" << v << "\"";
      }
      out << "}" << (r + 1 < t.rows.size() ? "," : "") << "\n";
    }
    out << "]\n";
  }
  if (path == "-") {
    std::cout << out.str();
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f)
      throw ConfigError("cannot open output file: " + path);
    f << out.str();
  }
}

IndexResult run_formula(const RunConfig& rc, IndexFormula f,
                        const AmplitudeFn& amp, double v_p,
                        const IndexOptions& opt) {
  switch (f) {
  case IndexFormula::fixed_centers: {
    const double k_p = wavevector(rc.system.projectile.mass, v_p);
    auto res = index_fixed_centers(amp(k_p), rc.sample.density, k_p);
    validity_check(rc.sample, rc.system, v_p, res);
    return res;
  }
  case IndexFormula::forrey:
    return index_forrey(rc.system, rc.sample, v_p, amp, opt);
  case IndexFormula::fizeau_legacy:
    return index_fizeau_legacy(rc.system, rc.sample, v_p, amp, opt);
  case IndexFormula::corrected:
    return index_corrected(rc.system, rc.sample, v_p, amp, opt);
  case IndexFormula::neutron_swave: {
    const double a = std::get<ScatteringLength>(rc.sample.potential).a;
    const double k_p = wavevector(rc.system.projectile.mass, v_p);
    IndexResult res =
        rc.neutron_imag
            ? index_neutron(a, rc.system, rc.sample.density, k_p,
                            rc.sample.distribution, v_p, opt)
            : index_neutron(a, rc.system, rc.sample.density, k_p);
    validity_check(rc.sample, rc.system, v_p, res);
    return res;
  }
  }
  throw ConfigError("unreachable formula");
}

/// Run `work(i)` for i in [0, n) on `jobs` threads; any exception is
/// rethrown on the caller thread.
template <class Work>
void parallel_for(long n, int jobs, Work&& work) {
  if (jobs <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i)
      work(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const int nt = std::min<long>(jobs, n);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= n)
          return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
            error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);
}

int cmd_index_or_scan(const RunConfig& rc, bool scan, int jobs) {
  IndexOptions opt;
  opt.phase = rc.phase;
  const AmplitudeFn amp =
      make_amplitude_source(rc.sample.potential, rc.system, rc.phase);
  const CrossSectionFn sigma =
      make_cross_section(rc.sample.potential, rc.system, rc.phase);

  Table t;
  t.columns = {"v_p", "formula", "re_n_minus_1", "im_n_minus_1"};
  if (scan) {
    t.columns.push_back("sigma_eff");
  } else {
    t.columns.insert(t.columns.end(),
                     {"rho", "quad_error", "lambda_over_spacing",
                      "range_over_spacing", "mean_field", "validity_pass"});
  }
  if (rc.slab_length) {
    t.columns.push_back("transmission");
    t.columns.push_back("phase_shift");
  }
  if (rc.mc) {
    t.columns.push_back("mc_sigma_eff");
    t.columns.push_back("mc_sigma_eff_se");
  }

  const long n_v = static_cast<long>(rc.beam.velocities.size());
  const long n_f = static_cast<long>(rc.formulas.size());
  t.rows.assign(n_v * n_f, {});

  parallel_for(n_v, jobs, [&](long iv) {
    const double v_p = rc.beam.velocities[iv];
    const double k_p = wavevector(rc.system.projectile.mass, v_p);
    std::optional<Averaged<double>> se;
    if (scan)
      se = effective_cross_section(sigma, rc.sample.distribution, v_p,
                                   opt.average);
    std::optional<McEstimate> mc;
    if (rc.mc)
      mc = mc_effective_cross_section(sigma, *rc.mc, v_p);
    for (long jf = 0; jf < n_f; ++jf) {
      const IndexResult res =
          run_formula(rc, rc.formulas[jf], amp, v_p, opt);
      std::vector<std::string> row;
      row.push_back(fmt(v_p));
      row.push_back(to_string(rc.formulas[jf]));
      row.push_back(fmt(res.n_minus_1.real()));
      row.push_back(fmt(res.n_minus_1.imag()));
      if (scan) {
        row.push_back(fmt(se->value));
      } else {
        row.push_back(res.n_minus_1.imag() != 0.0
                          ? fmt(res.n_minus_1.real() / res.n_minus_1.imag())
                          : "nan");
        row.push_back(fmt(res.quad_error));
        row.push_back(fmt(res.diagnostics.lambda_over_spacing));
        row.push_back(fmt(res.diagnostics.range_over_spacing));
        row.push_back(fmt(res.diagnostics.mean_field));
        row.push_back(res.diagnostics.all_ok() ? "true" : "false");
      }
      if (rc.slab_length) {
        const auto tw = transmission_wave(res.n_minus_1, k_p, *rc.slab_length);
        row.push_back(fmt(tw.transmission));
        row.push_back(fmt(tw.phase));
      }
      if (rc.mc) {
        row.push_back(fmt(mc->mean));
        row.push_back(fmt(mc->std_error));
      }
      t.rows[iv * n_f + jf] = std::move(row);
    }
  });

  write_table(t, rc.output_path, rc.output_format);
  return 0;
}

struct CheckResult {
  std::string name;
  bool pass;
  double value;
  double tolerance;
};

int cmd_validate(const RunConfig& rc) {
  double tol_scale = 1.0;
  if (const char* env = std::getenv("MWINDEX_TOL_OVERRIDE"))
    tol_scale = std::atof(env);
  if (!(tol_scale > 0.0))
    tol_scale = 1.0;

  std::vector<CheckResult> checks;

  // Relative-speed law normalization over six decades of v_p/alpha.
  {
    const double alpha = 400.0;
    double worst = 0.0;
    for (double x : {1e-3, 1e-1, 1.0, 10.0, 1e3}) {
      const double v_p = x * alpha;
      QuadOptions q;
      q.rel_tol = 1e-12;
      q.abs_floor = 1e-16;
      q.split_points = {v_p - 9 * alpha, v_p - 3 * alpha, v_p + 3 * alpha};
      const auto r = integrate_adaptive(
          [&](double v) { return relative_speed_pdf(v, v_p, alpha); }, 0.0,
          v_p + 8 * alpha, q);
      worst = std::max(worst, std::abs(r.value - 1.0));
    }
    checks.push_back(
        {"appendix_a_normalization", worst < 1e-10 * tol_scale, worst,
         1e-10 * tol_scale});
  }

  // T -> 0 equivalence of the three thermal formulas (s-wave).
  {
    const double v_p = 1000.0;
    const double alpha = 1e-6 * v_p;
    const double mt = rc.system.target.mass;
    GasSample s = rc.sample;
    s.potential = ScatteringLength{4e-15};
    s.distribution = MaxwellBoltzmann(
        mt * alpha * alpha / (2.0 * constants::boltzmann), mt);
    IndexOptions opt;
    opt.average.quad.rel_tol = 1e-12;
    const auto rf = index_forrey(rc.system, s, v_p, opt);
    const auto rz = index_fizeau_legacy(rc.system, s, v_p, opt);
    const auto rcn = index_corrected(rc.system, s, v_p, opt);
    const double scale = std::abs(rcn.n_minus_1);
    const double worst =
        std::max(std::abs(rf.n_minus_1 - rcn.n_minus_1),
                 std::abs(rz.n_minus_1 - rcn.n_minus_1)) /
        scale;
    checks.push_back({"t0_equivalence", worst < 1e-9 * tol_scale, worst,
                      1e-9 * tol_scale});
  }

  // Im(n-1) vs the Beer-Lambert chain on this run's own potential.
  {
    const double v_p = rc.beam.velocities.front();
    IndexOptions opt;
    opt.phase = rc.phase;
    opt.average.quad.rel_tol = 3e-14;
    opt.average.quad.max_intervals = 40000;
    const auto res = index_corrected(rc.system, rc.sample, v_p, opt);
    const auto sigma =
        make_cross_section(rc.sample.potential, rc.system, rc.phase);
    const auto se = effective_cross_section(sigma, rc.sample.distribution,
                                            v_p, opt.average);
    const double k_p = wavevector(rc.system.projectile.mass, v_p);
    const double rhs = rc.sample.density * se.value / (2.0 * k_p);
    const double diff = std::abs(res.n_minus_1.imag() - rhs) / std::abs(rhs);
    checks.push_back({"cross_formalism_identity", diff < 1e-12 * tol_scale,
                      diff, 1e-12 * tol_scale});
  }

  // Quadrature vs direct 3-D Monte Carlo for sigma_eff.
  {
    const double v_p = rc.beam.velocities.front();
    McConfig mc = rc.mc ? *rc.mc : McConfig{};
    if (!rc.mc) {
      mc.seed = 7;
      mc.n_samples = 200000;
      mc.distribution = rc.sample.distribution;
    }
    const auto sigma =
        make_cross_section(rc.sample.potential, rc.system, rc.phase);
    const auto est = mc_effective_cross_section(sigma, mc, v_p);
    const auto quad =
        effective_cross_section(sigma, rc.sample.distribution, v_p);
    const double dev =
        est.std_error > 0.0
            ? std::abs(est.mean - quad.value) / est.std_error
            : std::abs(est.mean - quad.value) / std::abs(quad.value);
    checks.push_back(
        {"mc_vs_quadrature", dev < 3.0 * tol_scale, dev, 3.0 * tol_scale});
  }

  Table t;
  t.columns = {"check", "status", "value", "tolerance"};
  bool all = true;
  for (const auto& c : checks) {
    t.rows.push_back(
        {c.name, c.pass ? "pass" : "fail", fmt(c.value), fmt(c.tolerance)});
    all = all && c.pass;
  }
  write_table(t, rc.output_path, rc.output_format);
  return all ? 0 : 1;
}

int cmd_estimate(const RunConfig& rc) {
  if (!rc.estimate_alpha_au && !rc.estimate_c6_au) {
    std::cerr << "estimate: config needs [estimate] alpha_au and/or c6_au\n";
    return 2;
  }
  Table t;
  t.columns = {"wave", "quantity", "value_m3"};
  if (rc.estimate_alpha_au) {
    t.rows.push_back({"light", "(n-1)/n_t",
                      fmt(optics_index_ratio(*rc.estimate_alpha_au))});
  }
  if (rc.estimate_c6_au) {
    const double v_p = rc.beam.velocities.front();
    t.rows.push_back(
        {"matter", "Im(n-1)/n_t",
         fmt(magnitude_estimate_im(*rc.estimate_c6_au,
                                   rc.system.projectile.mass, v_p))});
  }
  write_table(t, rc.output_path, rc.output_format);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex index of refraction of dilute gases for matter "
               "waves"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  std::string config_path;
  std::string output_override;
  std::string format_override;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1)
    jobs = 1;
  std::optional<std::uint64_t> seed_override;
  std::optional<long> samples_override;

  app.add_option("--config", config_path, "run configuration file")
      ->required();
  app.add_option("--output", output_override,
                 "output path (overrides [output] path; '-' = stdout)");
  app.add_option("--format", format_override, "csv|json");
  app.add_option("--jobs", jobs, "worker threads for scans");
  app.add_option("--seed", seed_override, "Monte Carlo seed override");
  app.add_option("--samples", samples_override,
                 "Monte Carlo sample-count override");

  auto* c_index = app.add_subcommand(
      "index", "index of refraction at the configured velocities; columns: "
               "v_p,formula,re_n_minus_1,im_n_minus_1,rho,quad_error,"
               "lambda_over_spacing,range_over_spacing,mean_field,"
               "validity_pass[,transmission,phase_shift][,mc_sigma_eff,"
               "mc_sigma_eff_se]");
  auto* c_scan = app.add_subcommand(
      "scan", "velocity scan; columns: v_p,formula,re_n_minus_1,"
              "im_n_minus_1,sigma_eff[,transmission,phase_shift]"
              "[,mc_sigma_eff,mc_sigma_eff_se]");
  auto* c_validate = app.add_subcommand(
      "validate", "run the built-in consistency checks; columns: "
                  "check,status,value,tolerance");
  auto* c_estimate = app.add_subcommand(
      "estimate", "order-of-magnitude (n-1)/n_t comparison; columns: "
                  "wave,quantity,value_m3");

  CLI11_PARSE(app, argc, argv);

  RunConfig rc;
  try {
    rc = cli::build_run_config(cli::parse_config_file(config_path));
    if (!output_override.empty())
      rc.output_path = output_override;
    if (!format_override.empty()) {
      if (format_override != "csv" && format_override != "json")
        throw ConfigError("--format must be csv or json");
      rc.output_format = format_override;
    }
    if (seed_override || samples_override) {
      McConfig mc = rc.mc ? *rc.mc : McConfig{};
      if (!rc.mc) {
        mc.n_samples = 200000;
        mc.distribution = rc.sample.distribution;
      }
      if (seed_override)
        mc.seed = *seed_override;
      if (samples_override)
        mc.n_samples = *samples_override;
      rc.mc = mc;
    }
    if (c_scan->parsed() && !rc.beam.is_scan)
      throw ConfigError("scan needs a [beam] scan block");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_index->parsed())
      return cmd_index_or_scan(rc, false, jobs);
    if (c_scan->parsed())
      return cmd_index_or_scan(rc, true, jobs);
    if (c_validate->parsed())
      return cmd_validate(rc);
    if (c_estimate->parsed())
      return cmd_estimate(rc);
  } catch (const SolverError& e) {
    std::cerr << "numerical error (radial solver): " << e.what()
              << " [steps=" << e.steps << "]\n";
    return 3;
  } catch (const QuadratureError& e) {
    std::cerr << "numerical error (quadrature): " << e.what()
              << " [achieved=" << e.achieved << " requested=" << e.requested
              << "]\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
