#ifndef MWINDEX_MC_HPP
#define MWINDEX_MC_HPP

// Independent Monte Carlo validation of the thermal averages and the
// Beer-Lambert transmission by direct 3-D sampling of target
// velocities. Deliberately does NOT use the 1-D relative-speed
// reduction, so it cross-checks that reduction.
//
// Sampling is organized in fixed blocks; each block owns a
// deterministically derived sub-stream and block accumulators merge
// associatively, so a given (seed, n_samples) pair produces the same
// estimate bit-for-bit however the blocks are scheduled.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>

#include "mwindex/errors.hpp"
#include "mwindex/rng.hpp"
#include "mwindex/thermal.hpp"

namespace mwindex {

struct McConfig {
  std::uint64_t seed = 1;
  long n_samples = 1000000;
  VelocityDistribution distribution = DeltaRest{};
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0; // sample std dev / sqrt(n)
  long n_samples = 0;
};

namespace detail {

inline constexpr long kMcBlock = 4096;

struct Welford {
  double mean = 0.0;
  double m2 = 0.0;
  long n = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  /// Chan's parallel combination; associative up to rounding.
  void merge(const Welford& o) {
    if (o.n == 0)
      return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const long nt = n + o.n;
    mean += d * static_cast<double>(o.n) / static_cast<double>(nt);
    m2 += o.m2 + d * d * static_cast<double>(n) *
                     static_cast<double>(o.n) / static_cast<double>(nt);
    n = nt;
  }

  McEstimate estimate() const {
    if (n < 2)
      return {mean, 0.0, n};
    const double var = m2 / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
  }
};

} // namespace detail

/// One target velocity draw. Maxwell-Boltzmann components are Gaussian
/// with standard deviation alpha/sqrt(2).
inline std::array<double, 3>
sample_target_velocity(const VelocityDistribution& dist, SplitMix64& rng) {
  if (std::holds_alternative<DeltaRest>(dist))
    return {0.0, 0.0, 0.0};
  if (const auto* mb = std::get_if<MaxwellBoltzmann>(&dist)) {
    const double s = mb->alpha / std::sqrt(2.0);
    return {s * gaussian(rng), s * gaussian(rng), s * gaussian(rng)};
  }
  if (const auto* dm = std::get_if<DriftingMB>(&dist)) {
    const double s = dm->base.alpha / std::sqrt(2.0);
    return {dm->drift[0] + s * gaussian(rng),
            dm->drift[1] + s * gaussian(rng),
            dm->drift[2] + s * gaussian(rng)};
  }
  const auto& cd = std::get<CustomDistribution>(dist);
  if (!cd.sampler)
    throw DomainError("sample_target_velocity: custom sampler missing");
  return cd.sampler(rng);
}

namespace detail {

inline double relative_speed(double v_p, const std::array<double, 3>& vt) {
  const double vx = -vt[0];
  const double vy = -vt[1];
  const double vz = v_p - vt[2];
  return std::sqrt(vx * vx + vy * vy + vz * vz);
}

template <class PerSample>
McEstimate mc_run(const McConfig& cfg, PerSample&& value_of) {
  if (cfg.n_samples <= 0)
    throw DomainError("mc_run: n_samples must be positive");
  Welford total;
  long done = 0;
  std::uint64_t block = 0;
  while (done < cfg.n_samples) {
    const long todo = std::min(kMcBlock, cfg.n_samples - done);
    SplitMix64 rng = SplitMix64::substream(cfg.seed, block);
    Welford w;
    for (long i = 0; i < todo; ++i)
      w.add(value_of(rng));
    total.merge(w);
    done += todo;
    ++block;
  }
  return total.estimate();
}

} // namespace detail

/// Monte Carlo estimate of <sigma_eff(v_p)> = <sigma(v_r) v_r/v_p>,
/// sampling v_t in 3-D.
inline McEstimate
mc_effective_cross_section(const std::function<double(double)>& sigma,
                           const McConfig& cfg, double v_p) {
  if (!(v_p > 0.0))
    throw DomainError("mc_effective_cross_section: v_p must be positive");
  return detail::mc_run(cfg, [&](SplitMix64& rng) {
    const auto vt = sample_target_velocity(cfg.distribution, rng);
    const double v_r = detail::relative_speed(v_p, vt);
    return sigma(v_r) * v_r / v_p;
  });
}

/// Slab transmission: each projectile accumulates an expected collision
/// count Lambda = n_t L <sigma(v_r) v_r/v_p> over its own sampled
/// encounters, and survival is averaged as <exp(-Lambda_i)> (the two
/// averaging orders coincide only when Lambda is deterministic).
/// n_samples counts encounter draws; encounters_per_projectile sets how
/// many of them each projectile consumes.
inline McEstimate mc_transmission(const std::function<double(double)>& sigma,
                                  const McConfig& cfg, double v_p, double n_t,
                                  double slab_length,
                                  int encounters_per_projectile = 64) {
  if (!(v_p > 0.0))
    throw DomainError("mc_transmission: v_p must be positive");
  if (slab_length < 0.0)
    throw DomainError("mc_transmission: negative slab length");
  if (!(n_t > 0.0))
    throw DomainError("mc_transmission: density must be positive");
  if (encounters_per_projectile < 1)
    throw DomainError("mc_transmission: need at least one encounter");
  if (slab_length == 0.0)
    return {1.0, 0.0, cfg.n_samples};

  McConfig proj_cfg = cfg;
  proj_cfg.n_samples =
      std::max<long>(1, cfg.n_samples / encounters_per_projectile);
  const int m = encounters_per_projectile;
  return detail::mc_run(proj_cfg, [&](SplitMix64& rng) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto vt = sample_target_velocity(cfg.distribution, rng);
      const double v_r = detail::relative_speed(v_p, vt);
      acc += sigma(v_r) * v_r / v_p;
    }
    const double lambda = n_t * slab_length * acc / m;
    return std::exp(-lambda);
  });
}

/// Moments <v_r^order> by direct 3-D sampling, order in {1,2,3,4}.
inline McEstimate mc_relative_speed_moment(const McConfig& cfg, double v_p,
                                           int order) {
  if (order < 1 || order > 4)
    throw DomainError("mc_relative_speed_moment: order must be 1..4");
  if (v_p < 0.0)
    throw DomainError("mc_relative_speed_moment: negative v_p");
  return detail::mc_run(cfg, [&](SplitMix64& rng) {
    const auto vt = sample_target_velocity(cfg.distribution, rng);
    const double v_r = detail::relative_speed(v_p, vt);
    double x = v_r;
    for (int i = 1; i < order; ++i)
      x *= v_r;
    return x;
  });
}

} // namespace mwindex

#endif
