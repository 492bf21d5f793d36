#ifndef MWINDEX_NUMEROV_HPP
#define MWINDEX_NUMEROV_HPP

// Fixed-step Numerov integration of the radial equation
//   u'' + [k^2 - 2 mu V(r)/hbar^2 - l(l+1)/r^2] u = 0
// with WKB-decaying initialization inside the classically forbidden
// region and phase-shift extraction by matching u/r against spherical
// Bessel/Neumann functions at two radii in the force-free zone.
//
// The step is the smaller of (local wavelength)/40 and the step that
// keeps the accumulated Numerov dispersion error below `phase_tol`:
// the scheme's phase error per step is (kh)^5/480, so the grid solves
// (h^4/480) * Int k_local^5 dr <= phase_tol.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "mwindex/constants.hpp"
#include "mwindex/errors.hpp"
#include "mwindex/potentials.hpp"
#include "mwindex/special.hpp"
#include "mwindex/system.hpp"

namespace mwindex {

struct PhaseShiftOptions {
  double phase_tol = 1e-9;       // rad, absolute accuracy target per shift
  double forbidden_factor = 1e3; // V(r_start) >= factor * E
  double tail_factor = 1e-9;     // |V(r_match)| <= factor * E
  double min_points_per_wavelength = 40.0;
  double barrier_suppression = 14.0; // WKB integral at the start point
  double handoff_delta = 1e-3;   // switch to the Born tail below this
  double lmax_delta = 1e-6;      // truncation threshold on |delta_l|
  int lmax_consecutive = 5;
  long lmax_cap = 100000;
  double random_phase_threshold = 30.0; // rad, semiclassical C6 sums
  long max_grid_points = 40000000;
  double step_scale = 1.0; // multiplies the chosen step (convergence tests)
};

namespace radial {

inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi) {
  // f(lo) and f(hi) must straddle a sign change.
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Workspace {
  std::vector<double> r;
  std::vector<double> k2base; // (2mu/hbar^2)(E - V(r))
  std::vector<double> inv_r2;
  std::vector<double> u; // scratch wavefunction
  double h = 0.0;
  double k = 0.0; // asymptotic wavevector
  double gap_r = 0.0;
  long i_match1 = 0;
  long i_match2 = 0;
  double c6_tail = 0.0; // C6 of the long-range tail, 0 if none
  double mu = 0.0;
  std::vector<double> j1, y1, j2, y2; // free solutions at the match radii

  void ensure_basis(int l) {
    if (static_cast<int>(j1.size()) > l)
      return;
    const int lmax = std::max(l + 8, 2 * static_cast<int>(j1.size()) + 8);
    sph_bessel_jy(lmax, k * r[static_cast<std::size_t>(i_match1)], j1, y1);
    sph_bessel_jy(lmax, k * r[static_cast<std::size_t>(i_match2)], j2, y2);
  }
};

/// Build the integration grid shared by all partial waves at one
/// collision energy. `pot` must be LennardJones or SquareWell.
inline Workspace build_workspace(const PotentialModel& pot,
                                 const CollisionSystem& sys, double k_r,
                                 const PhaseShiftOptions& opt) {
  if (!(k_r > 0.0))
    throw DomainError("build_workspace: k_r must be positive");
  Workspace ws;
  ws.k = k_r;
  ws.mu = sys.reduced_mass;
  const double hbar = constants::hbar;
  const double two_mu_over_hbar2 = 2.0 * ws.mu / (hbar * hbar);
  const double e_coll = hbar * hbar * k_r * k_r / (2.0 * ws.mu);
  const double lambda_free = 2.0 * constants::pi / k_r;

  double r_start = 0.0, r_match = 0.0;
  std::function<double(double)> vfun;
  bool origin_grid = false;

  if (const auto* lj = std::get_if<LennardJones>(&pot)) {
    const double c12 = lj->c12, c6 = lj->c6;
    vfun = [c12, c6](double r) {
      const double r3 = r * r * r;
      const double r6 = r3 * r3;
      return c12 / (r6 * r6) - c6 / r6;
    };
    ws.c6_tail = c6;
    const double r_m = lj_minimum_radius(*lj);
    const double eps = lj_well_depth(*lj);

    // Repulsive-wall start: V(r_start) = forbidden_factor * E.
    double lo = r_m;
    while (vfun(lo) < opt.forbidden_factor * e_coll)
      lo *= 0.8;
    r_start = bisect(
        [&](double r) { return vfun(r) - opt.forbidden_factor * e_coll; }, lo,
        r_m);

    // Push the start inward until the WKB barrier integral up to the
    // classical turning point reaches the suppression target.
    const double r_turn =
        bisect([&](double r) { return vfun(r) - e_coll; }, r_start, r_m);
    auto barrier = [&](double r0) {
      const int n = 256;
      const double dr = (r_turn - r0) / n;
      if (dr <= 0.0)
        return 0.0;
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double rr = r0 + dr * i;
        const double q = two_mu_over_hbar2 * (vfun(rr) - e_coll);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        if (q > 0.0)
          sum += w * std::sqrt(q) * dr;
      }
      return sum;
    };
    while (barrier(r_start) < opt.barrier_suppression && r_start > 1e-3 * r_m)
      r_start *= 0.97;

    // Matching radius: |V| below tail_factor * E. The residual
    // attractive tail is restored by a Born correction in solve().
    double hi = std::pow(c6 / (opt.tail_factor * e_coll), 1.0 / 6.0) * 2.0;
    while (std::abs(vfun(hi)) > opt.tail_factor * e_coll)
      hi *= 2.0;
    r_match = bisect(
        [&](double r) {
          return std::abs(vfun(r)) - opt.tail_factor * e_coll;
        },
        r_m, hi);

    const double gap_r = std::min(0.25 * lambda_free, 0.6 * r_match);
    const double r_end = r_match + 3.0 * gap_r;
    const double k_max = std::sqrt(two_mu_over_hbar2 * (e_coll + eps));
    const double h_wl =
        2.0 * constants::pi / (k_max * opt.min_points_per_wavelength);
    double p5 = 0.0; // integral of k_local^5 over the classical region
    {
      const int n = 512;
      const double dr = (r_end - r_start) / n;
      for (int i = 0; i <= n; ++i) {
        const double rr = r_start + dr * i;
        const double q = two_mu_over_hbar2 * (e_coll - vfun(rr));
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        if (q > 0.0)
          p5 += w * std::pow(q, 2.5) * dr;
      }
    }
    const double h_phase = std::pow(480.0 * opt.phase_tol / p5, 0.25);
    ws.h = std::min(h_wl, h_phase) * opt.step_scale;
    ws.gap_r = gap_r;

    const double span = r_end - r_start;
    const long n_steps = static_cast<long>(std::ceil(span / ws.h));
    if (n_steps > opt.max_grid_points)
      throw SolverError("radial grid exceeds the point budget", n_steps, 0.0);
    ws.h = span / static_cast<double>(n_steps);
    ws.r.resize(static_cast<std::size_t>(n_steps) + 1);
    for (long i = 0; i <= n_steps; ++i)
      ws.r[static_cast<std::size_t>(i)] =
          r_start + ws.h * static_cast<double>(i);
  } else if (const auto* sw = std::get_if<SquareWell>(&pot)) {
    const double v0 = sw->depth, rr = sw->radius;
    vfun = [v0, rr](double r) { return r < rr ? -v0 : 0.0; };
    origin_grid = true;
    r_match = rr;

    const double k_in = std::sqrt(two_mu_over_hbar2 * (e_coll + v0));
    const double k_big = std::max(k_in, k_r);
    const double gap_r = std::min(0.25 * lambda_free, 0.6 * rr);
    ws.gap_r = gap_r;
    const double h_wl =
        2.0 * constants::pi / (k_big * opt.min_points_per_wavelength);
    const double p5 = std::pow(k_in, 5.0) * rr +
                      std::pow(k_r, 5.0) * 3.2 * gap_r;
    const double h_phase = std::pow(480.0 * opt.phase_tol / p5, 0.25);
    // The step straddling the potential jump is low order; with the
    // jump placed mid-step its phase error is ~ (kh)^3 (V0/E)/24.
    const double h_disc =
        std::cbrt(2.4 * opt.phase_tol * e_coll / v0) / k_big;
    // Biased rounding in the constant-coefficient recurrence grows the
    // phase error like eps * Phi/(kh)^2; do not step finer than that
    // floor buys anything.
    const double phi_total = k_in * rr + k_r * 3.2 * gap_r;
    const double h_floor =
        std::sqrt(3.0 * 2.2e-16 * phi_total / opt.phase_tol) / k_big;
    double h = std::min(h_wl, std::max(h_floor, std::min(h_phase, h_disc))) *
               opt.step_scale;
    // Jump sits halfway between nodes m and m+1, so every node takes a
    // clean one-sided potential value.
    long m = std::max<long>(
        1, static_cast<long>(std::lround(rr / h - 0.5)));
    h = rr / (static_cast<double>(m) + 0.5);
    const long n_out = static_cast<long>(std::ceil(3.0 * gap_r / h)) + 8;
    const long n_steps = m + n_out;
    if (n_steps > opt.max_grid_points)
      throw SolverError("radial grid exceeds the point budget", n_steps, 0.0);
    ws.h = h;
    ws.r.resize(static_cast<std::size_t>(n_steps) + 1);
    for (long i = 0; i <= n_steps; ++i)
      ws.r[static_cast<std::size_t>(i)] = ws.h * static_cast<double>(i);
  } else {
    throw UnsupportedPotentialError(
        "build_workspace: radial integration supports LennardJones and "
        "SquareWell only");
  }

  const std::size_t n = ws.r.size();
  ws.k2base.resize(n);
  ws.inv_r2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ws.r[i];
    const double v = (origin_grid && i == 0) ? vfun(0.5 * ws.h) : vfun(r);
    ws.k2base[i] = two_mu_over_hbar2 * (e_coll - v);
    ws.inv_r2[i] = r > 0.0 ? 1.0 / (r * r) : 0.0;
  }

  long i1 = static_cast<long>(std::ceil((r_match - ws.r[0]) / ws.h)) + 1;
  const long gap = std::max<long>(3, std::lround(ws.gap_r / ws.h));
  const long i2 = i1 + gap;
  if (i2 + 2 >= static_cast<long>(n))
    throw SolverError("matching window does not fit on the grid",
                      static_cast<long>(n), 0.0);
  ws.i_match1 = i1;
  ws.i_match2 = i2;
  return ws;
}

struct SolveResult {
  double delta = 0.0;
  long steps = 0;
  bool negligible = false; // turning point beyond the matching window
};

/// Integrate one partial wave and extract its phase shift (mod pi,
/// reduced to (-pi/2, pi/2]).
inline SolveResult solve(Workspace& ws, int l, const PhaseShiftOptions& opt) {
  const std::size_t n = ws.r.size();
  const double h = ws.h;
  const double h2 = h * h;
  const double ll1 = static_cast<double>(l) * (l + 1.0);
  const long i1 = ws.i_match1;
  const long i2 = ws.i_match2;

  auto k2 = [&](long i) {
    const auto s = static_cast<std::size_t>(i);
    return l == 0 ? ws.k2base[s] : ws.k2base[s] - ll1 * ws.inv_r2[s];
  };

  // Innermost classically allowed node. Everything below it is
  // forbidden; the propagation starts deep enough under that turning
  // point for the WKB-decaying init to wash out.
  long i_first_allowed = -1;
  for (long i = 0; i <= i2; ++i) {
    if (k2(i) > 0.0) {
      i_first_allowed = i;
      break;
    }
  }
  if (i_first_allowed < 0)
    return {0.0, 0, true}; // fully forbidden up to the window

  long i_start;
  bool origin_init = false;
  if (i_first_allowed == 0) {
    i_start = 0;
    origin_init = true; // regular solution from the origin
  } else {
    double b = 0.0;
    long i = i_first_allowed - 1;
    while (i > 0 && b < opt.barrier_suppression) {
      const double q = k2(i);
      if (q < 0.0)
        b += h * std::sqrt(-q);
      --i;
    }
    i_start = i;
  }

  ws.u.assign(n, 0.0);
  std::vector<double>& u = ws.u;

  if (origin_init) {
    u[0] = 0.0;
    u[1] = 1e-20;
    i_start = 0;
  } else {
    const double q0 = std::max(0.0, -k2(i_start));
    const double q1 = std::max(0.0, -k2(i_start + 1));
    u[static_cast<std::size_t>(i_start)] = 1e-40;
    u[static_cast<std::size_t>(i_start + 1)] =
        1e-40 *
        std::exp(std::min(40.0, 0.5 * h * (std::sqrt(q0) + std::sqrt(q1))));
  }

  long steps = 0;
  double km = k2(i_start), kc = k2(i_start + 1);
  for (long i = i_start + 1; i <= i2 + 1; ++i) {
    const double kp = k2(i + 1);
    const double unext = ((2.0 - h2 * kc * (5.0 / 6.0)) * u[i] -
                          (1.0 + h2 * km / 12.0) * u[i - 1]) /
                         (1.0 + h2 * kp / 12.0);
    u[static_cast<std::size_t>(i) + 1] = unext;
    km = kc;
    kc = kp;
    ++steps;
    if (std::abs(unext) > 1e200) {
      // Rescale the whole history so both matching points share one scale.
      for (long m = i_start; m <= i + 1; ++m)
        u[static_cast<std::size_t>(m)] *= 1e-200;
    }
    if (!std::isfinite(unext))
      throw SolverError("Numerov propagation produced a non-finite value",
                        steps, std::numeric_limits<double>::quiet_NaN());
  }

  ws.ensure_basis(l);
  const double w1 = u[static_cast<std::size_t>(i1)] / ws.r[static_cast<std::size_t>(i1)];
  const double w2 = u[static_cast<std::size_t>(i2)] / ws.r[static_cast<std::size_t>(i2)];
  if (w1 == 0.0 && w2 == 0.0)
    throw SolverError("matching failed: wavefunction vanished", steps,
                      std::numeric_limits<double>::quiet_NaN());
  const double g = w1 / w2;
  const double num = ws.j1[static_cast<std::size_t>(l)] -
                     g * ws.j2[static_cast<std::size_t>(l)];
  const double den = ws.y1[static_cast<std::size_t>(l)] -
                     g * ws.y2[static_cast<std::size_t>(l)];
  double delta = std::atan2(num, den);
  if (delta > 0.5 * constants::pi)
    delta -= constants::pi;
  if (delta <= -0.5 * constants::pi)
    delta += constants::pi;

  // Born phase of the attractive C6 tail beyond the matching radius.
  if (ws.c6_tail > 0.0) {
    const double r1 = ws.r[static_cast<std::size_t>(i1)];
    const double r15 = r1 * r1 * r1 * r1 * r1;
    delta += ws.mu * ws.c6_tail /
             (5.0 * constants::hbar * constants::hbar * ws.k * r15);
  }

  return {delta, steps, false};
}

} // namespace radial

} // namespace mwindex

#endif
