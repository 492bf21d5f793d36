#ifndef MWINDEX_REFINDEX_HPP
#define MWINDEX_REFINDEX_HPP

// The catalogue of index-of-refraction formulas for matter waves in a
// dilute gas, n = 1 + ..., all first order in the gas density n_t:
//
//   fixed_centers : n - 1 = 2 pi n_t f(k_p)/k_p^2          (targets at rest)
//   forrey        : n - 1 = 2 pi (n_t/k_p) <f(k_r)/k_r>    (historical)
//   fizeau_legacy : k_pm  = k_p + <(n_CM - 1) k_r>,
//                   n_CM  = 1 + 2 pi n_t f(k_r)/k_r^2      (historical)
//   corrected     : n - 1 = 2 pi n_t (m_p+m_t)/m_t <f(k_r)>/k_p^2
//   neutron_swave : n - 1 = -2 pi n_t (m_p+m_t)/m_t a/k_p^2
//
// The corrected formula is the one consistent with the Beer-Lambert
// law: Im(n-1) = n_t <sigma_eff>/(2 k_p) with
// sigma_eff = sigma(v_r) v_r/v_p.

#include <cmath>
#include <complex>
#include <variant>

#include "mwindex/constants.hpp"
#include "mwindex/errors.hpp"
#include "mwindex/mc.hpp"
#include "mwindex/potentials.hpp"
#include "mwindex/scattering.hpp"
#include "mwindex/system.hpp"
#include "mwindex/thermal.hpp"

namespace mwindex {

struct GasSample {
  ParticleSpecies species; // target species
  double density = 0.0;    // n_t, 1/m^3
  VelocityDistribution distribution = DeltaRest{};
  PotentialModel potential = ScatteringLength{0.0};
};

inline void validate(const GasSample& sample) {
  if (!(sample.density > 0.0))
    throw DomainError("GasSample: density must be positive");
  validate(sample.potential);
}

enum class IndexFormula {
  fixed_centers,
  forrey,
  fizeau_legacy,
  corrected,
  neutron_swave
};

inline const char* to_string(IndexFormula f) {
  switch (f) {
  case IndexFormula::fixed_centers:
    return "fixed_centers";
  case IndexFormula::forrey:
    return "forrey";
  case IndexFormula::fizeau_legacy:
    return "fizeau_legacy";
  case IndexFormula::corrected:
    return "corrected";
  case IndexFormula::neutron_swave:
    return "neutron_swave";
  }
  return "?";
}

/// Dilute-medium validity ratios (all must be small for the first-order
/// index to hold). "Considerably larger/smaller" is pinned at 1e-2.
struct ValidityReport {
  static constexpr double threshold = 1e-2;
  double lambda_over_spacing = 0.0; // n_t^{1/3} lambda_p
  double range_over_spacing = 0.0;  // n_t^{1/3} r_range
  double mean_field = 0.0;          // |n-1|
  bool wavelength_ok = false;
  bool range_ok = false;
  bool mean_field_ok = false;

  bool all_ok() const { return wavelength_ok && range_ok && mean_field_ok; }
};

struct IndexResult {
  std::complex<double> n_minus_1{};
  IndexFormula formula = IndexFormula::corrected;
  double quad_error = 0.0; // relative
  ValidityReport diagnostics{};
};

struct IndexOptions {
  PhaseShiftOptions phase{};
  AverageOptions average{};
};

/// Fixed scattering centers: n - 1 = 2 pi n_t f(k_p)/k_p^2.
inline IndexResult index_fixed_centers(const ComplexAmplitude& f_at_kp,
                                       double n_t, double k_p) {
  if (!(k_p > 0.0))
    throw DomainError("index_fixed_centers: k_p must be positive");
  if (!(n_t > 0.0))
    throw DomainError("index_fixed_centers: density must be positive");
  IndexResult res;
  res.formula = IndexFormula::fixed_centers;
  res.n_minus_1 = 2.0 * constants::pi * n_t * f_at_kp.f / (k_p * k_p);
  return res;
}

namespace detail {

inline double rel_error(const std::complex<double>& v, double abs_err) {
  const double n = std::abs(v);
  return n > 0.0 ? abs_err / n : abs_err;
}

} // namespace detail

inline ValidityReport validity_check(const GasSample& sample,
                                     const CollisionSystem& sys, double v_p,
                                     IndexResult& result) {
  ValidityReport rep;
  const double k_p = wavevector(sys.projectile.mass, v_p);
  const double lambda_p = 2.0 * constants::pi / k_p;
  const double nt13 = std::cbrt(sample.density);
  rep.lambda_over_spacing = lambda_p * nt13;
  rep.range_over_spacing =
      characteristic_range(sample.potential, sys.reduced_mass) * nt13;
  rep.mean_field = std::abs(result.n_minus_1);
  rep.wavelength_ok = rep.lambda_over_spacing < ValidityReport::threshold;
  rep.range_ok = rep.range_over_spacing < ValidityReport::threshold;
  rep.mean_field_ok = rep.mean_field < ValidityReport::threshold;
  result.diagnostics = rep;
  return rep;
}

/// n - 1 = 2 pi (n_t/k_p) <f(k_r)/k_r>. Historical (Forrey et al.);
/// equivalent to the corrected formula only as alpha/v_p -> 0.
inline IndexResult index_forrey(const CollisionSystem& sys,
                                const GasSample& sample, double v_p,
                                const AmplitudeFn& amplitude,
                                const IndexOptions& opt = {}) {
  if (!(v_p > 0.0))
    throw DomainError("index_forrey: v_p must be positive");
  validate(sample);
  const double k_p = wavevector(sys.projectile.mass, v_p);
  const double mu = sys.reduced_mass;
  auto g = [&](double v_r) -> std::complex<double> {
    const double k_r = mu * v_r / constants::hbar;
    return amplitude(k_r).f / k_r;
  };
  const auto avg = average_over_targets(g, sample.distribution, v_p,
                                        opt.average);
  IndexResult res;
  res.formula = IndexFormula::forrey;
  res.n_minus_1 = 2.0 * constants::pi * sample.density / k_p * avg.value;
  res.quad_error = detail::rel_error(avg.value, avg.abs_error);
  validity_check(sample, sys, v_p, res);
  return res;
}

inline IndexResult index_forrey(const CollisionSystem& sys,
                                const GasSample& sample, double v_p,
                                const IndexOptions& opt = {}) {
  return index_forrey(sys, sample, v_p,
                      make_amplitude_source(sample.potential, sys, opt.phase),
                      opt);
}

/// Frame-dragging (Fizeau) construction: k_pm = k_p + <(n_CM-1) k_r>,
/// linearized to first order in n_t. Only the component along the beam
/// axis survives the average for an isotropic target. Historical; not
/// consistent with the Beer-Lambert law at finite temperature.
inline IndexResult index_fizeau_legacy(const CollisionSystem& sys,
                                       const GasSample& sample, double v_p,
                                       const AmplitudeFn& amplitude,
                                       const IndexOptions& opt = {}) {
  if (!(v_p > 0.0))
    throw DomainError("index_fizeau_legacy: v_p must be positive");
  validate(sample);
  const double k_p = wavevector(sys.projectile.mass, v_p);
  const double mu = sys.reduced_mass;
  // (n_CM - 1) k_r . z = 2 pi n_t (f/k_r^2) k_r cos(theta)
  auto g = [&](double v_r) -> std::complex<double> {
    const double k_r = mu * v_r / constants::hbar;
    return amplitude(k_r).f / k_r;
  };
  const auto avg = average_over_targets_axial(g, sample.distribution, v_p,
                                              opt.average);
  IndexResult res;
  res.formula = IndexFormula::fizeau_legacy;
  res.n_minus_1 = 2.0 * constants::pi * sample.density / k_p * avg.value;
  res.quad_error = detail::rel_error(avg.value, avg.abs_error);
  validity_check(sample, sys, v_p, res);
  return res;
}

inline IndexResult index_fizeau_legacy(const CollisionSystem& sys,
                                       const GasSample& sample, double v_p,
                                       const IndexOptions& opt = {}) {
  return index_fizeau_legacy(
      sys, sample, v_p, make_amplitude_source(sample.potential, sys, opt.phase),
      opt);
}

/// n - 1 = 2 pi n_t (m_p+m_t)/m_t <f(k_r)>/k_p^2, the formula consistent
/// with the Beer-Lambert law for any target velocity distribution.
inline IndexResult index_corrected(const CollisionSystem& sys,
                                   const GasSample& sample, double v_p,
                                   const AmplitudeFn& amplitude,
                                   const IndexOptions& opt = {}) {
  if (!(v_p > 0.0))
    throw DomainError("index_corrected: v_p must be positive");
  validate(sample);
  const double k_p = wavevector(sys.projectile.mass, v_p);
  const double mu = sys.reduced_mass;
  auto g = [&](double v_r) -> std::complex<double> {
    const double k_r = mu * v_r / constants::hbar;
    return amplitude(k_r).f;
  };
  const auto avg = average_over_targets(g, sample.distribution, v_p,
                                        opt.average);
  IndexResult res;
  res.formula = IndexFormula::corrected;
  res.n_minus_1 = 2.0 * constants::pi * sample.density * sys.mass_factor *
                  avg.value / (k_p * k_p);
  res.quad_error = detail::rel_error(avg.value, avg.abs_error);
  validity_check(sample, sys, v_p, res);
  return res;
}

inline IndexResult index_corrected(const CollisionSystem& sys,
                                   const GasSample& sample, double v_p,
                                   const IndexOptions& opt = {}) {
  return index_corrected(
      sys, sample, v_p, make_amplitude_source(sample.potential, sys, opt.phase),
      opt);
}

/// Neutron s-wave limit, n - 1 = -2 pi n_t (m_p+m_t)/m_t a/k_p^2.
/// Real by construction: with f = -a there is no Doppler effect. The
/// small imaginary part from Im f ~ k_r a^2 is off by default; the
/// overload taking a distribution restores it.
inline IndexResult index_neutron(double a, const CollisionSystem& sys,
                                 double n_t, double k_p) {
  if (!(k_p > 0.0))
    throw DomainError("index_neutron: k_p must be positive");
  if (!(n_t > 0.0))
    throw DomainError("index_neutron: density must be positive");
  IndexResult res;
  res.formula = IndexFormula::neutron_swave;
  res.n_minus_1 = std::complex<double>(
      -2.0 * constants::pi * n_t * sys.mass_factor * a / (k_p * k_p), 0.0);
  return res;
}

inline IndexResult index_neutron(double a, const CollisionSystem& sys,
                                 double n_t, double k_p,
                                 const VelocityDistribution& dist, double v_p,
                                 const IndexOptions& opt = {}) {
  IndexResult res = index_neutron(a, sys, n_t, k_p);
  // Im f ~ k_r a^2, thermally averaged: Im(n-1) is linear in <k_r>.
  const double mu = sys.reduced_mass;
  auto g = [&](double v_r) { return mu * v_r / constants::hbar; };
  const auto kr_avg = average_over_targets(g, dist, v_p, opt.average);
  const double im = 2.0 * constants::pi * n_t * sys.mass_factor * a * a *
                    kr_avg.value / (k_p * k_p);
  res.n_minus_1 += std::complex<double>(0.0, im);
  res.quad_error = kr_avg.value > 0.0 ? kr_avg.abs_error / kr_avg.value : 0.0;
  return res;
}

struct WaveTransmission {
  double transmission = 1.0;
  double phase = 0.0; // rad
};

/// T = exp[-2 Im(n-1) k_p L]; phase = Re(n-1) k_p L.
inline WaveTransmission transmission_wave(std::complex<double> n_minus_1,
                                          double k_p, double slab_length) {
  if (slab_length < 0.0)
    throw DomainError("transmission_wave: negative slab length");
  return {std::exp(-2.0 * n_minus_1.imag() * k_p * slab_length),
          n_minus_1.real() * k_p * slab_length};
}

/// T = exp[-n_t <sigma_eff(v_p)> L], the Beer-Lambert law.
inline Averaged<double> transmission_beer_lambert(const GasSample& sample,
                                                  const CollisionSystem& sys,
                                                  double v_p,
                                                  double slab_length,
                                                  const IndexOptions& opt = {}) {
  if (!(v_p > 0.0))
    throw DomainError("transmission_beer_lambert: v_p must be positive");
  if (slab_length < 0.0)
    throw DomainError("transmission_beer_lambert: negative slab length");
  validate(sample);
  const CrossSectionFn sigma =
      make_cross_section(sample.potential, sys, opt.phase);
  const auto se = effective_cross_section(sigma, sample.distribution, v_p,
                                          opt.average);
  const double t = std::exp(-sample.density * se.value * slab_length);
  return {t, t * sample.density * slab_length * se.abs_error};
}

/// Monte Carlo transmission for a gas sample (oracle companion to
/// transmission_beer_lambert; same sigma source, independent averaging).
inline McEstimate mc_transmission(const GasSample& sample,
                                  const CollisionSystem& sys, double v_p,
                                  double slab_length, const McConfig& cfg,
                                  const PhaseShiftOptions& phase_opt = {},
                                  int encounters_per_projectile = 64) {
  validate(sample);
  McConfig c = cfg;
  c.distribution = sample.distribution;
  return mc_transmission(make_cross_section(sample.potential, sys, phase_opt),
                         c, v_p, sample.density, slab_length,
                         encounters_per_projectile);
}

/// rho = Re(n-1)/Im(n-1) for a pure C6 interaction with semiclassical
/// amplitudes; constant (= 0.7265) in the cold-gas regime.
inline double rho_ratio(const CollisionSystem& sys,
                        const PotentialModel& potential, double v_p,
                        const VelocityDistribution& dist,
                        const IndexOptions& opt = {}) {
  if (!std::holds_alternative<PureC6>(potential))
    throw UnsupportedPotentialError("rho_ratio: requires a PureC6 potential");
  GasSample sample;
  sample.species = sys.target;
  sample.density = 1.0; // rho is density-independent
  sample.distribution = dist;
  sample.potential = potential;
  const IndexResult res = index_corrected(sys, sample, v_p, opt);
  if (res.n_minus_1.imag() == 0.0)
    throw DomainError("rho_ratio: Im(n-1) vanished");
  return res.n_minus_1.real() / res.n_minus_1.imag();
}

/// Optical (light-wave) static-limit index, n - 1 = 2 pi n_t a_0^3 alpha_au.
inline double optics_index(double n_t, double alpha_au) {
  if (n_t < 0.0 || alpha_au < 0.0)
    throw DomainError("optics_index: inputs must be non-negative");
  const double a0 = constants::bohr_radius;
  return 2.0 * constants::pi * n_t * a0 * a0 * a0 * alpha_au;
}

/// (n-1)/n_t for light, m^3.
inline double optics_index_ratio(double alpha_au) {
  if (alpha_au < 0.0)
    throw DomainError("optics_index_ratio: negative polarizability");
  const double a0 = constants::bohr_radius;
  return 2.0 * constants::pi * a0 * a0 * a0 * alpha_au;
}

/// Matter-wave magnitude estimate, printed coefficient form:
/// Im(n-1)/n_t = 4.12e-3 a_0^3 (m_e/m_p)(c/v_p)^{7/5} C6_au^{2/5}  [m^3].
inline double magnitude_estimate_im(double c6_au, double m_p, double v_p) {
  if (!(c6_au > 0.0) || !(m_p > 0.0) || !(v_p > 0.0))
    throw DomainError("magnitude_estimate_im: inputs must be positive");
  const double a0 = constants::bohr_radius;
  return 4.12e-3 * a0 * a0 * a0 * (constants::electron_mass / m_p) *
         std::pow(constants::speed_of_light / v_p, 1.4) *
         std::pow(c6_au, 0.4);
}

/// Same estimate straight from the cross-section form,
/// Im(n-1)/n_t = (4.04/k_p) [C6/(hbar v_p)]^{2/5} with C6 in SI.
inline double magnitude_estimate_im_si(double c6_si, double m_p, double v_p) {
  if (!(c6_si > 0.0) || !(m_p > 0.0) || !(v_p > 0.0))
    throw DomainError("magnitude_estimate_im_si: inputs must be positive");
  const double k_p = wavevector(m_p, v_p);
  return 4.04 / k_p * std::pow(c6_si / (constants::hbar * v_p), 0.4);
}

} // namespace mwindex

#endif
