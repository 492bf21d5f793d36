#ifndef MWINDEX_CONSTANTS_HPP
#define MWINDEX_CONSTANTS_HPP

// Physical constants (CODATA 2018, SI) and the atomic-unit boundary
// conversions. Everything downstream works in SI; atomic units appear
// only here.

#include "mwindex/errors.hpp"

namespace mwindex {

namespace constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double electron_mass = 9.1093837015e-31; // kg
inline constexpr double speed_of_light = 299792458.0;     // m/s
inline constexpr double bohr_radius = 5.29177210903e-11;  // m
inline constexpr double fine_structure = 7.2973525693e-3;
inline constexpr double amu = 1.66053906660e-27;          // kg

// Hartree energy, E_h = m_e c^2 alpha^2.
inline constexpr double hartree =
    electron_mass * speed_of_light * speed_of_light * fine_structure *
    fine_structure; // J

inline constexpr double pascal_per_mtorr = 101325.0 / 760.0 * 1e-3;

} // namespace constants

/// Constant bundle shared by all modules. Kept as a value type so a
/// caller can, in principle, run with perturbed constants.
struct PhysicalConstants {
  double hbar = constants::hbar;         // J s
  double k_B = constants::boltzmann;     // J/K
  double m_e = constants::electron_mass; // kg
  double c = constants::speed_of_light;  // m/s
  double a_0 = constants::bohr_radius;   // m
  double alpha_fs = constants::fine_structure;
  double amu = constants::amu; // kg
};

/// C6 dispersion coefficient, atomic units -> J m^6.
/// C6 = C6_au * m_e c^2 alpha_fs^2 a_0^6.
inline double c6_au_to_si(double c6_au) {
  if (c6_au < 0.0)
    throw DomainError("c6_au_to_si: negative C6");
  const double a03 = constants::bohr_radius * constants::bohr_radius *
                     constants::bohr_radius;
  return c6_au * constants::hartree * a03 * a03;
}

inline double c6_si_to_au(double c6_si) {
  if (c6_si < 0.0)
    throw DomainError("c6_si_to_au: negative C6");
  const double a03 = constants::bohr_radius * constants::bohr_radius *
                     constants::bohr_radius;
  return c6_si / (constants::hartree * a03 * a03);
}

/// C12 repulsion coefficient, atomic units (E_h a_0^12) -> J m^12.
inline double c12_au_to_si(double c12_au) {
  if (c12_au < 0.0)
    throw DomainError("c12_au_to_si: negative C12");
  const double a03 = constants::bohr_radius * constants::bohr_radius *
                     constants::bohr_radius;
  const double a06 = a03 * a03;
  return c12_au * constants::hartree * a06 * a06;
}

/// Static electric polarizability, atomic units -> m^3 (alpha = a_0^3 alpha_au).
inline double polarizability_au_to_si(double alpha_au) {
  if (alpha_au < 0.0)
    throw DomainError("polarizability_au_to_si: negative polarizability");
  return alpha_au * constants::bohr_radius * constants::bohr_radius *
         constants::bohr_radius;
}

inline double polarizability_si_to_au(double alpha_si) {
  if (alpha_si < 0.0)
    throw DomainError("polarizability_si_to_au: negative polarizability");
  return alpha_si / (constants::bohr_radius * constants::bohr_radius *
                     constants::bohr_radius);
}

inline double energy_au_to_si(double e_au) { return e_au * constants::hartree; }

inline double length_au_to_si(double r_au) {
  return r_au * constants::bohr_radius;
}

/// Ideal-gas number density from pressure and temperature, n = P/(k_B T).
inline double density_from_pressure(double pressure_pa, double temperature_k) {
  if (pressure_pa < 0.0)
    throw DomainError("density_from_pressure: negative pressure");
  if (temperature_k <= 0.0)
    throw DomainError("density_from_pressure: non-positive temperature");
  return pressure_pa / (constants::boltzmann * temperature_k);
}

inline double mtorr_to_pascal(double p_mtorr) {
  return p_mtorr * constants::pascal_per_mtorr;
}

} // namespace mwindex

#endif
