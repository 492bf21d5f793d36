#ifndef MWINDEX_SCATTERING_HPP
#define MWINDEX_SCATTERING_HPP

// Partial-wave phase shifts, the complex forward scattering amplitude
// f(k_r) = (1/2ik) Sum (2l+1)(e^{2i delta_l} - 1), and total cross
// sections.
//
// Route per potential branch:
//   LennardJones  - Numerov radial integration, handed off to the
//                   Jeffreys-Born C6 tail phase once |delta| is small;
//   SquareWell    - Numerov radial integration;
//   HardSphere    - closed form tan(delta_l) = j_l(kR)/y_l(kR);
//   ScatteringLength - s-wave contact form, delta_0 = -atan(k a);
//   PureC6        - Jeffreys-Born semiclassical phases for every l,
//                   with phase-averaged handling of the strongly
//                   oscillating low-l terms in the amplitude sums.

#include <cmath>
#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "mwindex/constants.hpp"
#include "mwindex/errors.hpp"
#include "mwindex/numerov.hpp"
#include "mwindex/potentials.hpp"
#include "mwindex/special.hpp"
#include "mwindex/system.hpp"

namespace mwindex {

enum class PhaseShiftMethod { numerov, semiclassical_c6, analytic };

struct PhaseShiftTable {
  double k_r = 0.0;
  std::vector<double> deltas; // rad, l = 0..l_max contiguously
  int l_max = -1;
  PhaseShiftMethod method = PhaseShiftMethod::analytic;
  // Jeffreys-Born tail amplitude: delta_l ~ A/(l+1/2)^5 beyond the
  // table (0 when the potential has no C6 tail).
  double jb_tail_coefficient = 0.0;
};

struct ComplexAmplitude {
  std::complex<double> f{}; // m
  double k_r = 0.0;         // 1/m

  double re() const { return f.real(); }
  double im() const { return f.imag(); }
};

/// Jeffreys-Born phase for V = -C6/r^6:
/// delta_l = (3 pi/16) mu C6 k^4 / (hbar^2 (l+1/2)^5).
inline double semiclassical_phase_shift_c6(double c6,
                                           const CollisionSystem& sys,
                                           double k_r, int l) {
  if (c6 < 0.0)
    throw DomainError("semiclassical_phase_shift_c6: negative C6");
  if (!(k_r > 0.0))
    throw DomainError("semiclassical_phase_shift_c6: k_r must be positive");
  if (l < 0)
    throw DomainError("semiclassical_phase_shift_c6: negative l");
  const double lam = static_cast<double>(l) + 0.5;
  const double lam5 = lam * lam * lam * lam * lam;
  const double k4 = k_r * k_r * k_r * k_r;
  return (3.0 * constants::pi / 16.0) * sys.reduced_mass * c6 * k4 /
         (constants::hbar * constants::hbar * lam5);
}

namespace detail {

inline double jb_tail_amplitude(double c6, double mu, double k_r) {
  const double k4 = k_r * k_r * k_r * k_r;
  return (3.0 * constants::pi / 16.0) * mu * c6 * k4 /
         (constants::hbar * constants::hbar);
}

inline double wrap_phase(double d) {
  d = std::remainder(d, constants::pi);
  if (d <= -0.5 * constants::pi)
    d += constants::pi;
  return d;
}

} // namespace detail

inline PhaseShiftTable phase_shifts(const PotentialModel& pot,
                                    const CollisionSystem& sys, double k_r,
                                    const PhaseShiftOptions& opt = {}) {
  if (!(k_r > 0.0))
    throw DomainError("phase_shifts: k_r must be positive");
  validate(pot);

  PhaseShiftTable table;
  table.k_r = k_r;

  const double edge = k_r * characteristic_range(pot, sys.reduced_mass);

  if (const auto* sl = std::get_if<ScatteringLength>(&pot)) {
    table.method = PhaseShiftMethod::analytic;
    table.deltas.push_back(-std::atan(k_r * sl->a));
    table.l_max = 0;
    return table;
  }

  if (const auto* hs = std::get_if<HardSphere>(&pot)) {
    table.method = PhaseShiftMethod::analytic;
    const double x = k_r * hs->radius;
    std::vector<double> j, y;
    int consec = 0;
    for (int l = 0;; ++l) {
      if (l >= static_cast<int>(j.size()))
        sph_bessel_jy(l + 32, x, j, y);
      const double d = detail::wrap_phase(std::atan2(j[l], y[l]));
      table.deltas.push_back(d);
      if (l > edge) {
        if (std::abs(d) < opt.lmax_delta) {
          if (++consec >= opt.lmax_consecutive)
            break;
        } else {
          consec = 0;
        }
      }
      if (l >= opt.lmax_cap)
        throw SolverError("phase_shifts: partial-wave cap reached", l, 0.0);
    }
    table.l_max = static_cast<int>(table.deltas.size()) - 1;
    return table;
  }

  if (const auto* c6p = std::get_if<PureC6>(&pot)) {
    table.method = PhaseShiftMethod::semiclassical_c6;
    const double a =
        detail::jb_tail_amplitude(c6p->c6, sys.reduced_mass, k_r);
    table.jb_tail_coefficient = a;
    int consec = 0;
    for (int l = 0;; ++l) {
      const double lam = l + 0.5;
      const double d = a / (lam * lam * lam * lam * lam);
      table.deltas.push_back(d);
      if (d < opt.lmax_delta) {
        if (++consec >= opt.lmax_consecutive)
          break;
      } else {
        consec = 0;
      }
      if (l >= opt.lmax_cap)
        throw SolverError("phase_shifts: partial-wave cap reached", l, 0.0);
    }
    table.l_max = static_cast<int>(table.deltas.size()) - 1;
    return table;
  }

  // Radial-integration branches.
  table.method = PhaseShiftMethod::numerov;
  radial::Workspace ws = radial::build_workspace(pot, sys, k_r, opt);
  // The jump of the square well leaves a small regular h^2 error in the
  // straddling step; one Richardson pass over (h, h/2) removes it.
  const bool richardson = std::holds_alternative<SquareWell>(pot);
  radial::Workspace ws_half;
  if (richardson) {
    PhaseShiftOptions oh = opt;
    oh.step_scale = 0.5 * opt.step_scale;
    ws_half = radial::build_workspace(pot, sys, k_r, oh);
  }
  auto numerov_delta = [&](int l) -> double {
    const radial::SolveResult r1 = radial::solve(ws, l, opt);
    if (!richardson)
      return r1.negligible ? 0.0 : r1.delta;
    const radial::SolveResult r2 = radial::solve(ws_half, l, opt);
    if (r1.negligible || r2.negligible)
      return 0.0;
    const double diff = std::remainder(r2.delta - r1.delta, constants::pi);
    return detail::wrap_phase(r2.delta + diff / 3.0);
  };
  const double jb_a =
      ws.c6_tail > 0.0
          ? detail::jb_tail_amplitude(ws.c6_tail, sys.reduced_mass, k_r)
          : 0.0;
  table.jb_tail_coefficient = jb_a;

  int consec = 0;
  bool handoff = false;
  for (int l = 0;; ++l) {
    const double d = numerov_delta(l);
    table.deltas.push_back(d);
    if (l > edge) {
      if (jb_a > 0.0 && std::abs(d) < opt.handoff_delta) {
        handoff = true;
        break;
      }
      if (std::abs(d) < opt.lmax_delta) {
        if (++consec >= opt.lmax_consecutive)
          break;
      } else {
        consec = 0;
      }
    }
    if (l >= opt.lmax_cap)
      throw SolverError("phase_shifts: partial-wave cap reached", l, 0.0);
  }

  if (handoff) {
    // Born regime: continue with the analytic C6 tail phase.
    consec = 0;
    for (int l = static_cast<int>(table.deltas.size());; ++l) {
      const double lam = l + 0.5;
      const double d = jb_a / (lam * lam * lam * lam * lam);
      table.deltas.push_back(d);
      if (d < opt.lmax_delta) {
        if (++consec >= opt.lmax_consecutive)
          break;
      } else {
        consec = 0;
      }
      if (l >= opt.lmax_cap)
        throw SolverError("phase_shifts: partial-wave cap reached", l, 0.0);
    }
  }

  table.l_max = static_cast<int>(table.deltas.size()) - 1;
  return table;
}

/// f(k_r) = (1/2ik) Sum (2l+1)(e^{2i delta_l} - 1). For semiclassical
/// C6 tables the rapidly spinning low-l phases are replaced by their
/// phase average (e^{2i delta} -> 0), and the analytic Born tail beyond
/// the table is appended.
inline ComplexAmplitude forward_amplitude(const PhaseShiftTable& table,
                                          const PhaseShiftOptions& opt = {}) {
  if (table.deltas.empty())
    throw DomainError("forward_amplitude: empty phase-shift table");
  if (!(table.k_r > 0.0))
    throw DomainError("forward_amplitude: k_r must be positive");
  const double k = table.k_r;
  const bool phase_average =
      table.method == PhaseShiftMethod::semiclassical_c6;

  double re = 0.0, im = 0.0;
  for (std::size_t l = 0; l < table.deltas.size(); ++l) {
    const double w = 2.0 * static_cast<double>(l) + 1.0;
    const double d = table.deltas[l];
    if (phase_average && std::abs(d) > opt.random_phase_threshold) {
      im += 0.5 * w; // <sin^2> = 1/2, <sin 2 delta> = 0
    } else {
      const double s = std::sin(d);
      re += w * s * std::cos(d);
      im += w * s * s;
    }
  }

  if (table.jb_tail_coefficient > 0.0) {
    const double a = table.jb_tail_coefficient;
    const double lb = static_cast<double>(table.deltas.size()); // l_max + 1
    const double lb3 = lb * lb * lb;
    const double lb8 = lb3 * lb3 * lb * lb;
    re += 2.0 * a / (3.0 * lb3);
    im += a * a / (4.0 * lb8);
  }

  return {std::complex<double>(re / k, im / k), k};
}

/// Optical theorem, sigma = 4 pi Im f / k.
inline double total_cross_section_optical(const ComplexAmplitude& f) {
  if (!(f.k_r > 0.0))
    throw DomainError(
        "total_cross_section_optical: k_r must be positive (use the "
        "s-wave limit 4 pi a^2 at k_r = 0)");
  return 4.0 * constants::pi * f.im() / f.k_r;
}

/// Direct partial-wave sum (4 pi/k^2) Sum (2l+1) sin^2 delta_l, with the
/// same phase-average and tail handling as forward_amplitude.
inline double partial_wave_cross_section(const PhaseShiftTable& table,
                                         const PhaseShiftOptions& opt = {}) {
  if (table.deltas.empty())
    throw DomainError("partial_wave_cross_section: empty table");
  const double k = table.k_r;
  const bool phase_average =
      table.method == PhaseShiftMethod::semiclassical_c6;
  double sum = 0.0;
  for (std::size_t l = 0; l < table.deltas.size(); ++l) {
    const double w = 2.0 * static_cast<double>(l) + 1.0;
    const double d = table.deltas[l];
    if (phase_average && std::abs(d) > opt.random_phase_threshold) {
      sum += 0.5 * w;
    } else {
      const double s = std::sin(d);
      sum += w * s * s;
    }
  }
  if (table.jb_tail_coefficient > 0.0) {
    const double a = table.jb_tail_coefficient;
    const double lb = static_cast<double>(table.deltas.size());
    const double lb3 = lb * lb * lb;
    sum += a * a / (4.0 * lb3 * lb3 * lb * lb);
  }
  return 4.0 * constants::pi * sum / (k * k);
}

/// Closed-form total cross section for a pure -C6/r^6 interaction,
/// sigma(v_r) = 8.08 [C6/(hbar v_r)]^{2/5}. The printed 8.08 constant
/// is used as-is.
inline double msv_cross_section(double c6, double v_r) {
  if (!(c6 > 0.0))
    throw DomainError("msv_cross_section: C6 must be positive");
  if (!(v_r > 0.0))
    throw DomainError("msv_cross_section: v_r must be positive (the "
                      "cross section diverges at zero velocity)");
  return 8.08 * std::pow(c6 / (constants::hbar * v_r), 0.4);
}

using AmplitudeFn = std::function<ComplexAmplitude(double)>;
using CrossSectionFn = std::function<double(double)>;

/// Forward amplitude as a function of k_r for the given pair.
inline AmplitudeFn make_amplitude_source(const PotentialModel& pot,
                                         const CollisionSystem& sys,
                                         const PhaseShiftOptions& opt = {}) {
  validate(pot);
  if (const auto* sl = std::get_if<ScatteringLength>(&pot)) {
    const double a = sl->a;
    return [a](double k_r) -> ComplexAmplitude {
      // f = (-a + i k a^2)/(1 + (k a)^2); finite at k_r = 0.
      const double ka = k_r * a;
      const std::complex<double> f(-a / (1.0 + ka * ka),
                                   k_r * a * a / (1.0 + ka * ka));
      return {f, k_r};
    };
  }
  if (const auto* c6p = std::get_if<PureC6>(&pot)) {
    // Streaming version of the semiclassical sum: phase-averaged head,
    // direct middle, analytic Born tail. The head boundary is blended
    // over one octave of phase and the tail carries Euler-Maclaurin and
    // sin-expansion corrections, so f(k_r) is smooth in k_r (no
    // integer-l staircase); thermal quadratures can then converge to
    // near machine accuracy.
    const double c6 = c6p->c6;
    const double mu = sys.reduced_mass;
    const PhaseShiftOptions o = opt;
    return [c6, mu, o](double k_r) -> ComplexAmplitude {
      if (!(k_r > 0.0))
        throw DomainError("amplitude source: k_r must be positive");
      const double a = detail::jb_tail_amplitude(c6, mu, k_r);
      const double d_avg = 2.0 * o.random_phase_threshold;
      double re = 0.0, im = 0.0;
      // Fully phase-averaged head: every l with delta >= 2*threshold.
      const double lam1 = std::pow(a / d_avg, 0.2);
      long l = std::max<long>(0, static_cast<long>(std::ceil(lam1 - 0.5)));
      im += 0.5 * static_cast<double>(l) * static_cast<double>(l);
      for (;; ++l) {
        const double lam = static_cast<double>(l) + 0.5;
        const double lam5 = lam * lam * lam * lam * lam;
        const double d = a / lam5;
        if (l >= 4 && d < o.handoff_delta)
          break;
        const double w2l = 2.0 * lam;
        const double s = std::sin(d);
        double term_re = w2l * s * std::cos(d);
        double term_im = w2l * s * s;
        if (d > o.random_phase_threshold) {
          // Crossover octave: fade towards the phase average.
          const double w = (d_avg - d) / o.random_phase_threshold;
          term_re *= w;
          term_im = w * term_im + (1.0 - w) * 0.5 * w2l;
        }
        re += term_re;
        im += term_im;
        if (l > o.lmax_cap)
          throw SolverError("amplitude source: partial-wave cap reached", l,
                            0.0);
      }
      const double lb = static_cast<double>(l);
      const double lb2 = lb * lb;
      const double lb3 = lb2 * lb;
      const double dl = a / (lb3 * lb2); // delta at the tail boundary
      // Midpoint Euler-Maclaurin tail of 2 lam sin(d) cos(d) and
      // 2 lam sin^2(d), expanded to the d^3 / d^4 terms.
      re += 2.0 * a / (3.0 * lb3) - (4.0 / 39.0) * dl * dl * dl * lb2 -
            dl / 3.0;
      im += a * a / (4.0 * lb3 * lb3 * lb2) -
            dl * dl * dl * dl * lb2 / 27.0 - 0.75 * dl * dl;
      return {std::complex<double>(re / k_r, im / k_r), k_r};
    };
  }
  return [pot, sys, opt](double k_r) -> ComplexAmplitude {
    return forward_amplitude(phase_shifts(pot, sys, k_r, opt), opt);
  };
}

/// sigma(v_r) through the optical theorem on the same amplitude source.
inline CrossSectionFn make_cross_section(const PotentialModel& pot,
                                         const CollisionSystem& sys,
                                         const PhaseShiftOptions& opt = {}) {
  AmplitudeFn amp = make_amplitude_source(pot, sys, opt);
  const double mu = sys.reduced_mass;
  return [amp, mu](double v_r) -> double {
    const double k_r = mu * v_r / constants::hbar;
    return total_cross_section_optical(amp(k_r));
  };
}

} // namespace mwindex

#endif
