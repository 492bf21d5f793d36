#ifndef MWINDEX_SPECIAL_HPP
#define MWINDEX_SPECIAL_HPP

// Spherical Bessel functions j_l, y_l for the orders the partial-wave
// machinery needs. y_l by upward recurrence (stable for all l); j_l by
// upward recurrence while l stays well below x, otherwise by downward
// (Miller) recurrence normalized against j_0.

#include <cmath>
#include <vector>

#include "mwindex/errors.hpp"

namespace mwindex {

namespace detail {
inline constexpr double kBesselClamp = 1e280;
}

/// Fill j[0..lmax] and y[0..lmax] at argument x > 0.
/// y_l values that would overflow are clamped to +-1e280; they only
/// occur where the corresponding phase shift is already negligible.
inline void sph_bessel_jy(int lmax, double x, std::vector<double>& j,
                          std::vector<double>& y) {
  if (!(x > 0.0))
    throw DomainError("sph_bessel_jy: x must be positive");
  if (lmax < 0)
    throw DomainError("sph_bessel_jy: lmax must be >= 0");
  j.assign(lmax + 1, 0.0);
  y.assign(lmax + 1, 0.0);

  const double sx = std::sin(x), cx = std::cos(x);
  const double inv = 1.0 / x;

  y[0] = -cx * inv;
  if (lmax >= 1)
    y[1] = (-cx * inv - sx) * inv;
  for (int l = 2; l <= lmax; ++l) {
    const double next = (2.0 * l - 1.0) * inv * y[l - 1] - y[l - 2];
    if (std::abs(next) > detail::kBesselClamp) {
      for (int m = l; m <= lmax; ++m)
        y[m] = (m - l) % 2 == 0 ? std::copysign(detail::kBesselClamp, next)
                                : -std::copysign(detail::kBesselClamp, next);
      break;
    }
    y[l] = next;
  }

  j[0] = sx * inv;
  if (lmax == 0)
    return;

  if (static_cast<double>(lmax) < 0.8 * x - 10.0) {
    // Oscillatory regime, upward is safe.
    j[1] = (sx * inv - cx) * inv;
    for (int l = 2; l <= lmax; ++l)
      j[l] = (2.0 * l - 1.0) * inv * j[l - 1] - j[l - 2];
    return;
  }

  // Miller's downward recurrence, normalized against whichever of
  // j_0, j_1 is farther from a zero.
  const int start = lmax + 16 +
                    static_cast<int>(std::ceil(std::sqrt(40.0 * lmax)));
  double fp = 0.0;   // f_{l+1}
  double fc = 1e-30; // f_l
  for (int l = start; l >= 1; --l) {
    const double fm = (2.0 * l + 1.0) * inv * fc - fp;
    fp = fc;
    fc = fm;
    if (std::abs(fc) > 1e250) {
      fc *= 1e-250;
      fp *= 1e-250;
      for (int m = l; m <= lmax; ++m)
        j[m] *= 1e-250;
    }
    if (l - 1 <= lmax)
      j[l - 1] = fc;
  }
  // fc, fp now hold the unnormalized f_0, f_1.
  const double j0t = sx * inv;
  const double j1t = (sx * inv - cx) * inv;
  const double ratio =
      std::abs(j0t) >= std::abs(j1t) ? j0t / fc : j1t / fp;
  for (int l = 0; l <= lmax; ++l)
    j[l] *= ratio;
}

/// Single-order convenience wrapper.
inline void sph_bessel_jy_single(int l, double x, double& jl, double& yl) {
  thread_local std::vector<double> jbuf, ybuf;
  sph_bessel_jy(l, x, jbuf, ybuf);
  jl = jbuf[l];
  yl = ybuf[l];
}

} // namespace mwindex

#endif
