// Acceptance suite: one line per criterion, [PASS]/[FAIL], exit code =
// number of failures. Tolerances are pinned in code next to each check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mwindex/mwindex.hpp"

using namespace mwindex;

namespace {

int g_failures = 0;

void report(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %02d %-28s %s\n", ok ? "PASS" : "FAIL", num, name,
              detail.c_str());
  if (!ok)
    ++g_failures;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

const CollisionSystem kNaNa(
    ParticleSpecies("Na", 22.98976928 * constants::amu),
    ParticleSpecies("Na", 22.98976928 * constants::amu));
const CollisionSystem kNaAr(
    ParticleSpecies("Na", 22.98976928 * constants::amu),
    ParticleSpecies("Ar", 39.948 * constants::amu));
const CollisionSystem kHeHe(
    ParticleSpecies("He", 4.002602 * constants::amu),
    ParticleSpecies("He", 4.002602 * constants::amu));

MaxwellBoltzmann mb_with_alpha(double alpha, double m_t) {
  return MaxwellBoltzmann(m_t * alpha * alpha / (2.0 * constants::boltzmann),
                          m_t);
}

// 1. Relative-speed law normalization: |Int P - 1| < 1e-10 on the
//    v_p/alpha grid {1e-3, 1e-1, 1, 10, 1e3}.
void criterion_01() {
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
  report(1, "appendix-a-normalization", worst < 1e-10,
         "worst |int P - 1| = " + fmt(worst) + ", tol 1e-10");
}

// 2. Reduced law vs direct 3-D Monte Carlo: first and second moments of
//    v_r within 3 standard errors at n = 1e6 (fixed seed); the second
//    moment also against the analytic v_p^2 + 1.5 alpha^2.
void criterion_02() {
  const MaxwellBoltzmann mb(300.0, 39.948 * constants::amu);
  const double v_p = 0.8 * mb.alpha;
  McConfig cfg;
  cfg.seed = 20260811;
  cfg.n_samples = 1000000;
  cfg.distribution = mb;

  const auto m1 = mc_relative_speed_moment(cfg, v_p, 1);
  const auto m2 = mc_relative_speed_moment(cfg, v_p, 2);
  const auto q1 = average_over_targets([](double v) { return v; },
                                       cfg.distribution, v_p);
  const auto q2 = average_over_targets([](double v) { return v * v; },
                                       cfg.distribution, v_p);
  const double analytic2 = v_p * v_p + 1.5 * mb.alpha * mb.alpha;
  const double d1 = std::abs(m1.mean - q1.value) / m1.std_error;
  const double d2 = std::abs(m2.mean - q2.value) / m2.std_error;
  const double d2a = std::abs(m2.mean - analytic2) / m2.std_error;
  const bool ok = d1 < 3.0 && d2 < 3.0 && d2a < 3.0 &&
                  std::abs(q2.value - analytic2) < 1e-6 * analytic2;
  report(2, "appendix-a-vs-3d-monte-carlo", ok,
         "deviations " + fmt(d1) + ", " + fmt(d2) + ", " + fmt(d2a) +
             " standard errors (3 allowed)");
}

// 3. Cross-formalism identity Im(n-1) = n_t <sigma_eff>/(2 k_p) to
//    relative 1e-12 for 10 randomized parameter sets.
void criterion_03() {
  SplitMix64 rng(424242);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double mp = (5.0 + 100.0 * rng.uniform()) * constants::amu;
    const double mt = (5.0 + 100.0 * rng.uniform()) * constants::amu;
    const CollisionSystem sys(ParticleSpecies("p", mp),
                              ParticleSpecies("t", mt));
    const MaxwellBoltzmann mb(30.0 + 500.0 * rng.uniform(), mt);
    const double v_p = (0.2 + 3.0 * rng.uniform()) * mb.alpha;
    GasSample s;
    s.species = sys.target;
    s.density = 1e18 * std::pow(10.0, 2.0 * rng.uniform());
    s.distribution = mb;
    s.potential =
        trial % 2 == 0
            ? PotentialModel{ScatteringLength{(rng.uniform() - 0.3) * 1e-14}}
            : PotentialModel{PureC6{c6_au_to_si(50.0 +
                                                2000.0 * rng.uniform())}};
    IndexOptions opt;
    opt.average.quad.rel_tol = 3e-14;
    opt.average.quad.max_intervals = 40000;
    const auto res = index_corrected(sys, s, v_p, opt);
    const auto sigma = make_cross_section(s.potential, sys);
    const auto se =
        effective_cross_section(sigma, s.distribution, v_p, opt.average);
    const double k_p = wavevector(mp, v_p);
    const double rhs = s.density * se.value / (2.0 * k_p);
    worst = std::max(worst,
                     std::abs(res.n_minus_1.imag() - rhs) / std::abs(rhs));
  }
  report(3, "cross-formalism-identity", worst < 1e-12,
         "worst relative deviation " + fmt(worst) + ", tol 1e-12");
}

// 4. T -> 0 equivalence of the three thermal formulas at
//    alpha/v_p = 1e-6, relative 1e-9, for Lennard-Jones and s-wave
//    amplitudes.
void criterion_04() {
  double worst = 0.0;
  for (int which = 0; which < 2; ++which) {
    const double v_p = 600.0;
    GasSample s;
    s.species = kHeHe.target;
    s.density = 3.2e19;
    s.distribution = mb_with_alpha(1e-6 * v_p, kHeHe.target.mass);
    s.potential =
        which == 0
            ? PotentialModel{ScatteringLength{4e-15}}
            : PotentialModel{lj_from_well(10.2 * constants::boltzmann,
                                          2.97e-10)};
    IndexOptions opt;
    opt.average.quad.rel_tol = 1e-11;
    const auto rf = index_forrey(kHeHe, s, v_p, opt);
    const auto rz = index_fizeau_legacy(kHeHe, s, v_p, opt);
    const auto rc = index_corrected(kHeHe, s, v_p, opt);
    const double scale = std::abs(rc.n_minus_1);
    worst = std::max({worst, std::abs(rf.n_minus_1 - rc.n_minus_1) / scale,
                      std::abs(rz.n_minus_1 - rc.n_minus_1) / scale});
  }
  report(4, "t0-equivalence", worst < 1e-9,
         "worst relative spread " + fmt(worst) + ", tol 1e-9");
}

// 5. Slow-projectile contrast over v_p/alpha in [1e-3, 1e-2]: log-log
//    slope of <sigma_eff> = -1 +- 0.01 for the Beer-Lambert weighting
//    and 0 +- 0.01 for the unweighted average.
void criterion_05() {
  const MaxwellBoltzmann mb(300.0, 39.948 * constants::amu);
  const double c6 = c6_au_to_si(190.0);
  auto sigma = [&](double v) { return msv_cross_section(c6, v); };
  std::vector<double> xs, y_bl, y_forrey;
  for (int i = 0; i < 5; ++i) {
    const double v_p =
        mb.alpha * 1e-3 * std::pow(10.0, i / 4.0);
    const auto bl =
        effective_cross_section(sigma, VelocityDistribution{mb}, v_p);
    const auto fo = forrey_effective_cross_section(
        sigma, VelocityDistribution{mb}, v_p);
    xs.push_back(std::log(v_p));
    y_bl.push_back(std::log(bl.value));
    y_forrey.push_back(std::log(fo.value));
  }
  auto slope = [&](const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  const double s_bl = slope(y_bl);
  const double s_fo = slope(y_forrey);
  const bool ok = std::abs(s_bl + 1.0) < 0.01 && std::abs(s_fo) < 0.01;
  report(5, "slow-projectile-contrast", ok,
         "slopes " + fmt(s_bl) + " (want -1 +- 0.01), " + fmt(s_fo) +
             " (want 0 +- 0.01)");
}

// 6. rho = Re(n-1)/Im(n-1) for semiclassical C6 amplitudes in a cold
//    gas: 0.7265 within 0.5%, varying by less than 1% over a decade.
void criterion_06() {
  const PotentialModel c6{PureC6{c6_au_to_si(1556.0)}};
  double lo = 1e300, hi = -1e300, worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double v_p = 1000.0 * std::pow(10.0, i / 20.0);
    const auto dist = mb_with_alpha(1.0, kNaNa.target.mass); // alpha = 1 m/s
    const double rho =
        rho_ratio(kNaNa, c6, v_p, VelocityDistribution{dist});
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
    worst = std::max(worst, std::abs(rho - 0.7265) / 0.7265);
  }
  const double drift = (hi - lo) / (0.5 * (hi + lo));
  const bool ok = worst < 5e-3 && drift < 1e-2;
  report(6, "rho-constant", ok,
         "max |rho-0.7265|/0.7265 = " + fmt(worst) +
             " (tol 5e-3), decade drift " + fmt(drift) + " (tol 1e-2)");
}

// 7. Partial-wave summation of the semiclassical C6 phases reproduces
//    sigma = 8.08 [C6/(hbar v)]^{2/5} within 1% at 5 velocities.
void criterion_07() {
  const double c6 = c6_au_to_si(1556.0);
  double worst = 0.0;
  for (double v_r : {600.0, 1000.0, 2000.0, 4000.0, 6000.0}) {
    const double k = relative_wavevector(kNaNa, v_r);
    const auto table = phase_shifts(PureC6{c6}, kNaNa, k);
    const double s_sum = partial_wave_cross_section(table);
    const double s_msv = msv_cross_section(c6, v_r);
    worst = std::max(worst, std::abs(s_sum / s_msv - 1.0));
  }
  report(7, "msv-coefficient", worst < 0.01,
         "worst relative deviation " + fmt(worst) + ", tol 1e-2");
}

// 8. Neutron limit: corrected formula with f = -a reproduces
//    n = 1 - 2 pi n_t (m_p+m_t)/m_t a/k_p^2 exactly; Re(n-1) invariant
//    under T in {4 K, 300 K} to 1e-12; Im part linear in <k_r>.
void criterion_08() {
  const CollisionSystem n_si(
      ParticleSpecies("n", 1.00866491588 * constants::amu),
      ParticleSpecies("Si", 28.0855 * constants::amu));
  const double a = 4.1491e-15;
  const double n_t = 5e28;
  const double v_p = 2200.0;
  const double k_p = wavevector(n_si.projectile.mass, v_p);
  AmplitudeFn leading = [a](double k_r) {
    return ComplexAmplitude{std::complex<double>(-a, 0.0), k_r};
  };

  GasSample s;
  s.species = n_si.target;
  s.density = n_t;
  s.distribution = DeltaRest{};
  s.potential = ScatteringLength{a};
  const auto exact = index_corrected(n_si, s, v_p, leading);
  const auto ref = index_neutron(a, n_si, n_t, k_p);
  const double d_exact =
      std::abs(exact.n_minus_1.real() - ref.n_minus_1.real()) /
      std::abs(ref.n_minus_1.real());

  IndexOptions tight;
  tight.average.quad.rel_tol = 1e-12;
  auto at_temp = [&](double t_kelvin) {
    GasSample st = s;
    st.distribution = MaxwellBoltzmann(t_kelvin, n_si.target.mass);
    return index_corrected(n_si, st, v_p, leading, tight);
  };
  const auto cold = at_temp(4.0);
  const auto warm = at_temp(300.0);
  const double d_doppler =
      std::abs(warm.n_minus_1.real() - cold.n_minus_1.real()) /
      std::abs(cold.n_minus_1.real());

  // Im part: alpha doubles between 75 K and 300 K, so <k_r> doubles at
  // v_p << alpha and Im(n-1) must double with it. v_p/alpha ~ 5e-5
  // keeps the quadratic projectile correction below the tolerance.
  const double v_slow = 0.01;
  const auto i1 = index_neutron(a, n_si, n_t, k_p,
                                MaxwellBoltzmann(75.0, n_si.target.mass),
                                v_slow, tight);
  const auto i4 = index_neutron(a, n_si, n_t, k_p,
                                MaxwellBoltzmann(300.0, n_si.target.mass),
                                v_slow, tight);
  const double d_lin =
      std::abs(i4.n_minus_1.imag() / i1.n_minus_1.imag() - 2.0);

  const bool ok = d_exact < 1e-14 && d_doppler < 1e-12 && d_lin < 1e-5;
  report(8, "neutron-limit", ok,
         "exactness " + fmt(d_exact) + ", Doppler " + fmt(d_doppler) +
             " (tol 1e-12), Im linearity " + fmt(d_lin));
}

// 9. Magnitude anchors: optics ratio 1.1e-29 m^3 +- 3% and
//    n-1 = 2.8e-4 +- 3% at the quoted density; the matter-wave estimate
//    lands in (0.4-8)e-30 m^3 for Na-scale inputs; the printed 4.12e-3
//    coefficient re-derived from the cross-section form within 1%.
void criterion_09() {
  const double m_na = 22.98976928 * constants::amu;
  const double opt_ratio = optics_index_ratio(11.9);
  const double opt_n = optics_index(2.55e25, 11.9);
  bool in_range = true;
  for (double c6au : {24.0, 190.0, 450.0}) {
    const double r = magnitude_estimate_im(c6au, m_na, 1000.0);
    in_range = in_range && r > 0.4e-30 && r < 8e-30;
  }
  double coeff_dev = 0.0;
  for (double c6au : {24.0, 190.0, 1556.0}) {
    const double m5 = magnitude_estimate_im(c6au, m_na, 1000.0);
    const double m4 = magnitude_estimate_im_si(c6_au_to_si(c6au), m_na,
                                               1000.0);
    coeff_dev = std::max(coeff_dev, std::abs(m5 / m4 - 1.0));
  }
  const bool ok = std::abs(opt_ratio / 1.1e-29 - 1.0) < 0.03 &&
                  std::abs(opt_n / 2.8e-4 - 1.0) < 0.03 && in_range &&
                  coeff_dev < 0.01;
  report(9, "magnitude-anchors", ok,
         "optics ratio " + fmt(opt_ratio) + ", n-1 " + fmt(opt_n) +
             ", coefficient deviation " + fmt(coeff_dev));
}

// 10. Transmission oracle: wave picture vs Beer-Lambert to relative
//     1e-8, Monte Carlo within 3 standard errors at n = 1e6.
void criterion_10() {
  GasSample s;
  s.species = kHeHe.target;
  s.density = 5e20;
  s.distribution = MaxwellBoltzmann(10.0, kHeHe.target.mass);
  s.potential = PureC6{c6_au_to_si(1.47)};
  const double v_p = 200.0;
  const double k_p = wavevector(kHeHe.projectile.mass, v_p);

  const auto sigma = make_cross_section(s.potential, kHeHe);
  const auto se = effective_cross_section(sigma, s.distribution, v_p);
  const double slab = 0.5 / (s.density * se.value); // optical depth 1/2

  const auto rc = index_corrected(kHeHe, s, v_p);
  const auto tw = transmission_wave(rc.n_minus_1, k_p, slab);
  const auto tb = transmission_beer_lambert(s, kHeHe, v_p, slab);
  const double d_pair = std::abs(tw.transmission / tb.value - 1.0);

  McConfig cfg;
  cfg.seed = 777;
  cfg.n_samples = 1000000;
  const auto mc = mc_transmission(s, kHeHe, v_p, slab, cfg);
  const double d_mc = std::abs(mc.mean - tb.value) / mc.std_error;

  const bool ok = d_pair < 1e-8 && d_mc < 3.0;
  report(10, "transmission-oracle", ok,
         "wave-vs-BL " + fmt(d_pair) + " (tol 1e-8), MC deviation " +
             fmt(d_mc) + " SE (3 allowed)");
}

// 11. Solver oracle: square-well s-wave phase matches the closed form
//     within 1e-8 rad over 3 decades of k_r; hard-sphere low-energy
//     cross section reaches 4 pi R^2 within 0.1% at k_r R = 1e-3.
void criterion_11() {
  const SquareWell well{5.0 * constants::boltzmann, 2.5e-10};
  double worst = 0.0;
  for (double k : {1e8, 3.16e8, 1e9, 3.16e9, 1e10, 3.16e10, 1e11}) {
    const auto table = phase_shifts(well, kHeHe, k);
    const double ref = analytic_swave_reference(well, kHeHe, k);
    double d = std::remainder(table.deltas[0] - ref, constants::pi);
    worst = std::max(worst, std::abs(d));
  }
  const double r = 2.0e-10;
  const double k_hs = 1e-3 / r;
  const double sigma_hs = total_cross_section_optical(
      forward_amplitude(phase_shifts(HardSphere{r}, kHeHe, k_hs)));
  const double d_hs =
      std::abs(sigma_hs / (4.0 * constants::pi * r * r) - 1.0);
  const bool ok = worst < 1e-8 && d_hs < 1e-3;
  report(11, "solver-oracle", ok,
         "square-well worst " + fmt(worst) + " rad (tol 1e-8), " +
             "hard-sphere deviation " + fmt(d_hs) + " (tol 1e-3)");
}

// 12. Glory property: a Lennard-Jones scan over one velocity decade
//     shows at least 2 local extrema about the v^{-2/5} trend; the pure
//     C6 scan is monotone.
void criterion_12() {
  PhaseShiftOptions fast;
  fast.phase_tol = 1e-5;
  const LennardJones lj = lj_from_well(72.9 * constants::boltzmann,
                                       4.99e-10);
  std::vector<double> detrended;
  const int n_lj = 40;
  for (int i = 0; i < n_lj; ++i) {
    const double v_r = 500.0 * std::pow(10.0, i / double(n_lj - 1));
    const double k = relative_wavevector(kNaAr, v_r);
    const double sigma = total_cross_section_optical(
        forward_amplitude(phase_shifts(lj, kNaAr, k, fast), fast));
    detrended.push_back(sigma * std::pow(v_r, 0.4));
  }
  int extrema = 0;
  for (std::size_t i = 1; i + 1 < detrended.size(); ++i) {
    const double dl = detrended[i] - detrended[i - 1];
    const double dr = detrended[i + 1] - detrended[i];
    if (dl * dr < 0.0)
      ++extrema;
  }

  const auto amp = make_amplitude_source(PureC6{c6_au_to_si(1556.0)}, kNaNa);
  bool monotone = true;
  double prev = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double v_r = 1000.0 * std::pow(10.0, i / 20.0);
    const double k = relative_wavevector(kNaNa, v_r);
    const double sigma = total_cross_section_optical(amp(k));
    if (i > 0 && sigma >= prev)
      monotone = false;
    prev = sigma;
  }
  const bool ok = extrema >= 2 && monotone;
  report(12, "glory-property", ok,
         std::to_string(extrema) + " LJ extrema (need >= 2), C6 scan " +
             (monotone ? "monotone" : "NOT monotone"));
}

// 13. CLI determinism: index and scan outputs byte-identical across two
//     runs with the same config and seed.
void criterion_13() {
  const std::string dir = "/tmp/mwindex_acceptance";
  std::system(("mkdir -p " + dir).c_str());
  const std::string cfg_path = dir + "/det.ini";
  {
    std::ofstream f(cfg_path);
    f << "[projectile]\nmass = 22.98976928 amu\n[target]\nmass = 39.948 "
         "amu\n[potential]\nmodel = pure_c6\nc6 = 190 au\n[gas]\npressure "
         "= 1 mTorr\ntemperature = 300 K\n[beam]\nscan_min = "
         "500\nscan_max = 2000\nscan_points = 4\nscan_spacing = "
         "log\n[formulas]\nlist = corrected, forrey\n[mc]\nseed = "
         "9\nsamples = 20000\n";
  }
  auto run = [&](const std::string& sub, const std::string& out) {
    const std::string cmd = std::string(MWINDEX_CLI_PATH) + " --config " +
                            cfg_path + " " + sub + " --output " + out +
                            " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  bool ok = true;
  for (const std::string sub : {std::string("index"), std::string("scan")}) {
    const std::string o1 = dir + "/" + sub + "1.csv";
    const std::string o2 = dir + "/" + sub + "2.csv";
    ok = ok && run(sub, o1) == 0 && run(sub, o2) == 0;
    const std::string b1 = slurp(o1);
    ok = ok && !b1.empty() && b1 == slurp(o2);
  }
  report(13, "cli-determinism", ok,
         ok ? "index and scan byte-identical" : "outputs differ");
}

} // namespace

int main() {
  criterion_01();
  criterion_02();
  criterion_03();
  criterion_04();
  criterion_05();
  criterion_06();
  criterion_07();
  criterion_08();
  criterion_09();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  if (g_failures == 0)
    std::printf("all 13 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
