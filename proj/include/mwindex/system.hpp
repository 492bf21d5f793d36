#ifndef MWINDEX_SYSTEM_HPP
#define MWINDEX_SYSTEM_HPP

#include <string>
#include <utility>

#include "mwindex/constants.hpp"
#include "mwindex/errors.hpp"

namespace mwindex {

struct ParticleSpecies {
  std::string label;
  double mass = 0.0; // kg

  ParticleSpecies() = default;
  ParticleSpecies(std::string label_, double mass_kg)
      : label(std::move(label_)), mass(mass_kg) {
    if (!(mass > 0.0))
      throw DomainError("ParticleSpecies: mass must be positive");
  }
};

/// Projectile/target pair with the derived collision kinematics.
/// mass_factor = (m_p + m_t)/m_t = m_p/mu is the factor that
/// distinguishes the corrected index formula from its predecessors.
struct CollisionSystem {
  ParticleSpecies projectile;
  ParticleSpecies target;
  double reduced_mass = 0.0; // mu = m_p m_t/(m_p+m_t), kg
  double mass_factor = 0.0;  // (m_p+m_t)/m_t

  CollisionSystem() = default;
  CollisionSystem(ParticleSpecies projectile_, ParticleSpecies target_)
      : projectile(std::move(projectile_)), target(std::move(target_)) {
    const double mp = projectile.mass;
    const double mt = target.mass;
    reduced_mass = mp * mt / (mp + mt);
    mass_factor = (mp + mt) / mt;
  }
};

/// hbar k = m v.
inline double wavevector(double mass, double speed) {
  if (!(mass > 0.0))
    throw DomainError("wavevector: mass must be positive");
  if (speed < 0.0)
    throw DomainError("wavevector: negative speed");
  return mass * speed / constants::hbar;
}

/// Relative wavevector k_r = mu v_r / hbar for the pair.
inline double relative_wavevector(const CollisionSystem& sys, double v_r) {
  return wavevector(sys.reduced_mass, v_r);
}

} // namespace mwindex

#endif
