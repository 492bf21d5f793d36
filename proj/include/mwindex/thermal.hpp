#ifndef MWINDEX_THERMAL_HPP
#define MWINDEX_THERMAL_HPP

// Target velocity distributions and the averaging operator <.> over
// them. For a Maxwell-Boltzmann target the 3-D average collapses to a
// 1-D integral against the relative-speed law
//   P(v_r) dv_r = (2 v_r/(sqrt(pi) alpha v_p))
//                 exp[-(v_p^2+v_r^2)/alpha^2] sinh[2 v_p v_r/alpha^2] dv_r,
// evaluated here in the factored exp form so it never overflows: the
// sinh*exp product equals exp[-(v_p-v_r)^2/a^2] - exp[-(v_p+v_r)^2/a^2].

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <type_traits>
#include <variant>

#include "mwindex/constants.hpp"
#include "mwindex/errors.hpp"
#include "mwindex/quadrature.hpp"
#include "mwindex/rng.hpp"

namespace mwindex {

struct MaxwellBoltzmann {
  double temperature = 0.0; // K
  double target_mass = 0.0; // kg
  double alpha = 0.0;       // sqrt(2 k_B T/m_t), m/s

  MaxwellBoltzmann() = default;
  MaxwellBoltzmann(double temperature_k, double target_mass_kg)
      : temperature(temperature_k), target_mass(target_mass_kg) {
    if (!(temperature > 0.0))
      throw DomainError("MaxwellBoltzmann: temperature must be positive");
    if (!(target_mass > 0.0))
      throw DomainError("MaxwellBoltzmann: target mass must be positive");
    alpha = std::sqrt(2.0 * constants::boltzmann * temperature / target_mass);
  }
};

/// All targets at rest (T = 0 limit).
struct DeltaRest {};

struct DriftingMB {
  MaxwellBoltzmann base;
  std::array<double, 3> drift = {0.0, 0.0, 0.0}; // m/s, lab frame

  DriftingMB() = default;
  DriftingMB(double temperature_k, double target_mass_kg,
             std::array<double, 3> drift_velocity)
      : base(temperature_k, target_mass_kg), drift(drift_velocity) {}
};

/// User-supplied law: a sampler plus (optionally) a density, averaged
/// by direct Monte Carlo over the sampler.
struct CustomDistribution {
  std::function<std::array<double, 3>(SplitMix64&)> sampler;
  std::function<double(const std::array<double, 3>&)> density;
  std::uint64_t mc_seed = 1;
  long mc_samples = 200000;
};

using VelocityDistribution =
    std::variant<MaxwellBoltzmann, DeltaRest, DriftingMB, CustomDistribution>;

/// Reduced relative-speed law for a Maxwell-Boltzmann target. Finite
/// and stable for all v_p >= 0 (the v_p = 0 limit is the MB speed law).
inline double relative_speed_pdf(double v_r, double v_p, double alpha) {
  if (v_r < 0.0)
    throw DomainError("relative_speed_pdf: negative v_r");
  if (v_p < 0.0)
    throw DomainError("relative_speed_pdf: negative v_p");
  if (!(alpha > 0.0))
    throw DomainError("relative_speed_pdf: alpha must be positive");
  const double sqrt_pi = std::sqrt(constants::pi);
  if (v_p == 0.0) {
    const double x = v_r / alpha;
    return 4.0 * v_r * v_r / (sqrt_pi * alpha * alpha * alpha) *
           std::exp(-x * x);
  }
  const double dm = (v_p - v_r) / alpha;
  const double c = 4.0 * v_p * v_r / (alpha * alpha);
  // exp[-(vp-vr)^2/a^2] * (1 - exp(-4 vp vr/a^2)), exact and stable in
  // every regime.
  return v_r / (sqrt_pi * alpha * v_p) * std::exp(-dm * dm) *
         (-std::expm1(-c));
}

namespace detail {

/// (b cosh b - sinh b) exp[-(v_p^2+v_r^2)/alpha^2] with b = 2 v_p v_r/a^2,
/// the kernel of the cos(theta)-weighted averages.
inline double axial_kernel_q(double v_r, double v_p, double alpha) {
  const double b = 2.0 * v_p * v_r / (alpha * alpha);
  if (b < 0.5) {
    const double b2 = b * b;
    const double series =
        b * b2 * (1.0 / 3.0 + b2 * (1.0 / 30.0 + b2 * (1.0 / 840.0 +
                                                       b2 / 45360.0)));
    const double s = (v_p * v_p + v_r * v_r) / (alpha * alpha);
    return series * std::exp(-s);
  }
  const double dm = (v_p - v_r) / alpha;
  const double dp = (v_p + v_r) / alpha;
  return 0.5 * ((b - 1.0) * std::exp(-dm * dm) +
                (b + 1.0) * std::exp(-dp * dp));
}

inline QuadOptions mb_quad_options(double v_p, double alpha,
                                   const QuadOptions& base) {
  QuadOptions q = base;
  // Seed the subdivision so a narrow peak near v_r = v_p is never
  // stepped over by the first coarse pass.
  q.split_points.push_back(v_p - 9.0 * alpha);
  q.split_points.push_back(v_p - 3.0 * alpha);
  q.split_points.push_back(v_p + 3.0 * alpha);
  return q;
}

} // namespace detail

template <class T> struct Averaged {
  T value{};
  double abs_error = 0.0;
};

struct AverageOptions {
  QuadOptions quad{};
};

/// <g(v_r)> over the target velocity distribution, for a projectile of
/// speed v_p along z. g may return double or complex<double>.
template <class G,
          class T = std::decay_t<std::invoke_result_t<G&, double>>>
Averaged<T> average_over_targets(G&& g, const VelocityDistribution& dist,
                                 double v_p,
                                 const AverageOptions& opt = {}) {
  if (v_p < 0.0)
    throw DomainError("average_over_targets: negative v_p");

  if (std::holds_alternative<DeltaRest>(dist))
    return {g(v_p), 0.0};

  if (const auto* cd = std::get_if<CustomDistribution>(&dist)) {
    if (!cd->sampler)
      throw DomainError("average_over_targets: custom sampler missing");
    SplitMix64 rng(cd->mc_seed);
    const long n = std::max<long>(cd->mc_samples, 1);
    T mean{};
    double m2 = 0.0;
    for (long i = 0; i < n; ++i) {
      const auto vt = cd->sampler(rng);
      const double vx = -vt[0];
      const double vy = -vt[1];
      const double vz = v_p - vt[2];
      const double v_r = std::sqrt(vx * vx + vy * vy + vz * vz);
      const T x = g(v_r);
      const T dv = x - mean;
      mean += dv / static_cast<double>(i + 1);
      m2 += std::abs(dv) * std::abs(x - mean);
    }
    const double se =
        n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) /
                          static_cast<double>(n))
              : 0.0;
    return {mean, se};
  }

  double alpha = 0.0;
  double v_eff = v_p;
  if (const auto* mb = std::get_if<MaxwellBoltzmann>(&dist)) {
    alpha = mb->alpha;
  } else {
    const auto& dm = std::get<DriftingMB>(dist);
    alpha = dm.base.alpha;
    // Work in the frame where the drift vanishes: only the relative
    // velocity v_p z - v_drift enters the reduction.
    const double dx = dm.drift[0];
    const double dy = dm.drift[1];
    const double dz = v_p - dm.drift[2];
    v_eff = std::sqrt(dx * dx + dy * dy + dz * dz);
  }

  const double hi = v_eff + 8.0 * alpha;
  auto integrand = [&](double v_r) -> T {
    return g(v_r) * relative_speed_pdf(v_r, v_eff, alpha);
  };
  const auto res = integrate_adaptive(
      integrand, 0.0, hi, detail::mb_quad_options(v_eff, alpha, opt.quad));
  return {res.value, res.error};
}

/// <g(v_r) cos(theta_r)> where theta_r is the angle between the
/// relative velocity and the beam axis. Needed by the frame-dragging
/// (Fizeau) index formula, whose average is over a vector.
template <class G,
          class T = std::decay_t<std::invoke_result_t<G&, double>>>
Averaged<T> average_over_targets_axial(G&& g,
                                       const VelocityDistribution& dist,
                                       double v_p,
                                       const AverageOptions& opt = {}) {
  if (!(v_p > 0.0))
    throw DomainError("average_over_targets_axial: v_p must be positive");

  if (std::holds_alternative<DeltaRest>(dist))
    return {g(v_p), 0.0};

  if (const auto* cd = std::get_if<CustomDistribution>(&dist)) {
    if (!cd->sampler)
      throw DomainError("average_over_targets_axial: custom sampler missing");
    SplitMix64 rng(cd->mc_seed);
    const long n = std::max<long>(cd->mc_samples, 1);
    T mean{};
    double m2 = 0.0;
    for (long i = 0; i < n; ++i) {
      const auto vt = cd->sampler(rng);
      const double vx = -vt[0];
      const double vy = -vt[1];
      const double vz = v_p - vt[2];
      const double v_r = std::sqrt(vx * vx + vy * vy + vz * vz);
      const double cth = v_r > 0.0 ? vz / v_r : 1.0;
      const T x = g(v_r) * cth;
      const T dv = x - mean;
      mean += dv / static_cast<double>(i + 1);
      m2 += std::abs(dv) * std::abs(x - mean);
    }
    const double se =
        n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) /
                          static_cast<double>(n))
              : 0.0;
    return {mean, se};
  }

  if (std::holds_alternative<DriftingMB>(dist))
    throw DomainError("average_over_targets_axial: drifting distributions "
                      "break the axial symmetry of the reduction");

  const auto& mb = std::get<MaxwellBoltzmann>(dist);
  const double alpha = mb.alpha;
  const double sqrt_pi = std::sqrt(constants::pi);
  const double hi = v_p + 8.0 * alpha;
  auto integrand = [&](double v_r) -> T {
    const double kern = alpha / (sqrt_pi * v_p * v_p) *
                        detail::axial_kernel_q(v_r, v_p, alpha);
    return g(v_r) * kern;
  };
  const auto res = integrate_adaptive(
      integrand, 0.0, hi, detail::mb_quad_options(v_p, alpha, opt.quad));
  return {res.value, res.error};
}

/// <sigma_eff(v_p)> = <sigma(v_r) v_r>/v_p (Beer-Lambert weighting).
template <class S>
Averaged<double> effective_cross_section(S&& sigma,
                                         const VelocityDistribution& dist,
                                         double v_p,
                                         const AverageOptions& opt = {}) {
  if (!(v_p > 0.0))
    throw DomainError("effective_cross_section: v_p must be positive");
  auto g = [&](double v_r) { return sigma(v_r) * v_r; };
  const auto a = average_over_targets(g, dist, v_p, opt);
  return {a.value / v_p, a.abs_error / v_p};
}

/// <sigma(v_r)> without the v_r/v_p weight: the effective cross section
/// implied by the historical formula, kept for the comparison runs.
template <class S>
Averaged<double>
forrey_effective_cross_section(S&& sigma, const VelocityDistribution& dist,
                               double v_p, const AverageOptions& opt = {}) {
  if (!(v_p > 0.0))
    throw DomainError("forrey_effective_cross_section: v_p must be positive");
  return average_over_targets(sigma, dist, v_p, opt);
}

} // namespace mwindex

#endif
