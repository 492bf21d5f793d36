#ifndef MWINDEX_POTENTIALS_HPP
#define MWINDEX_POTENTIALS_HPP

// Model interaction potentials. All parameters are SI. The pure -C6/r^6
// branch is deliberately kept away from the radial ODE solver (its
// attractive singularity makes the radial problem ill-posed without a
// core); it is handled by the semiclassical path in the scattering
// module.

#include <cmath>
#include <limits>
#include <variant>

#include "mwindex/errors.hpp"
#include "mwindex/system.hpp"

namespace mwindex {

struct PureC6 {
  double c6 = 0.0; // J m^6, V(r) = -C6/r^6
};

struct LennardJones {
  double c12 = 0.0; // J m^12
  double c6 = 0.0;  // J m^6, V(r) = C12/r^12 - C6/r^6
};

struct HardSphere {
  double radius = 0.0; // m
};

struct SquareWell {
  double depth = 0.0;  // J, V = -depth for r < radius
  double radius = 0.0; // m
};

/// s-wave contact model, f(k) = exp(i d0) sin(d0)/k with
/// d0 = -atan(k a). The length a may be negative.
struct ScatteringLength {
  double a = 0.0; // m
};

using PotentialModel =
    std::variant<PureC6, LennardJones, HardSphere, SquareWell, ScatteringLength>;

namespace detail {
inline void require_positive(double x, const char* what) {
  if (!(x > 0.0))
    throw DomainError(std::string(what) + " must be positive");
}
} // namespace detail

inline void validate(const PotentialModel& pot) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PureC6>) {
          detail::require_positive(p.c6, "PureC6: C6");
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          detail::require_positive(p.c12, "LennardJones: C12");
          detail::require_positive(p.c6, "LennardJones: C6");
        } else if constexpr (std::is_same_v<T, HardSphere>) {
          detail::require_positive(p.radius, "HardSphere: radius");
        } else if constexpr (std::is_same_v<T, SquareWell>) {
          detail::require_positive(p.depth, "SquareWell: depth");
          detail::require_positive(p.radius, "SquareWell: radius");
        }
        // ScatteringLength: any real a is allowed.
      },
      pot);
}

/// Well depth of the 12-6 form, eps = C6^2/(4 C12).
inline double lj_well_depth(const LennardJones& lj) {
  return lj.c6 * lj.c6 / (4.0 * lj.c12);
}

/// Position of the 12-6 minimum, r_m = (2 C12/C6)^(1/6).
inline double lj_minimum_radius(const LennardJones& lj) {
  return std::pow(2.0 * lj.c12 / lj.c6, 1.0 / 6.0);
}

/// Build a 12-6 potential from its well depth and minimum position.
inline LennardJones lj_from_well(double epsilon, double r_m) {
  detail::require_positive(epsilon, "lj_from_well: epsilon");
  detail::require_positive(r_m, "lj_from_well: r_m");
  const double rm6 = std::pow(r_m, 6.0);
  return LennardJones{epsilon * rm6 * rm6, 2.0 * epsilon * rm6};
}

/// V(r). HardSphere returns +inf inside the core.
inline double evaluate(const PotentialModel& pot, double r) {
  if (!(r > 0.0))
    throw DomainError("evaluate: r must be positive");
  return std::visit(
      [r](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PureC6>) {
          const double r3 = r * r * r;
          return -p.c6 / (r3 * r3);
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          const double r3 = r * r * r;
          const double r6 = r3 * r3;
          return p.c12 / (r6 * r6) - p.c6 / r6;
        } else if constexpr (std::is_same_v<T, HardSphere>) {
          return r <= p.radius ? std::numeric_limits<double>::infinity() : 0.0;
        } else if constexpr (std::is_same_v<T, SquareWell>) {
          return r < p.radius ? -p.depth : 0.0;
        } else {
          // Contact interaction: no pointwise potential.
          return 0.0;
        }
      },
      pot);
}

/// Characteristic range used by the diluteness diagnostic: r_m for the
/// 12-6 branch, the van der Waals length for a bare C6 tail, the radius
/// for the finite-range branches and |a| for the contact model.
inline double characteristic_range(const PotentialModel& pot,
                                   double reduced_mass) {
  return std::visit(
      [reduced_mass](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PureC6>) {
          return std::pow(2.0 * reduced_mass * p.c6 /
                              (constants::hbar * constants::hbar),
                          0.25);
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          return lj_minimum_radius(p);
        } else if constexpr (std::is_same_v<T, HardSphere>) {
          return p.radius;
        } else if constexpr (std::is_same_v<T, SquareWell>) {
          return p.radius;
        } else {
          return std::abs(p.a);
        }
      },
      pot);
}

/// Closed-form s-wave phase shift for the two branches that have one.
/// HardSphere: d0 = -k R (exact, not reduced mod pi).
/// SquareWell: d0 = atan((k/K) tan(K R)) - k R with
/// K = sqrt(2 mu (E+V0))/hbar, reduced to (-pi/2, pi/2].
inline double analytic_swave_reference(const PotentialModel& pot,
                                       const CollisionSystem& sys,
                                       double k_r) {
  if (!(k_r > 0.0))
    throw DomainError("analytic_swave_reference: k_r must be positive");
  if (const auto* hs = std::get_if<HardSphere>(&pot)) {
    return -k_r * hs->radius;
  }
  if (const auto* sw = std::get_if<SquareWell>(&pot)) {
    const double hbar2 = constants::hbar * constants::hbar;
    const double e = hbar2 * k_r * k_r / (2.0 * sys.reduced_mass);
    const double k_in =
        std::sqrt(2.0 * sys.reduced_mass * (e + sw->depth)) / constants::hbar;
    // tan(kR + d0) = (k/K) tan(KR)
    const double t = std::atan2(k_r * std::sin(k_in * sw->radius),
                                k_in * std::cos(k_in * sw->radius));
    double d0 = t - k_r * sw->radius;
    d0 = std::remainder(d0, constants::pi);
    if (d0 <= -0.5 * constants::pi)
      d0 += constants::pi;
    return d0;
  }
  throw UnsupportedPotentialError(
      "analytic_swave_reference: only HardSphere and SquareWell have a "
      "closed-form s-wave phase shift");
}

} // namespace mwindex

#endif
