#ifndef MWINDEX_QUADRATURE_HPP
#define MWINDEX_QUADRATURE_HPP

// Adaptive Gauss-Kronrod (G7,K15) quadrature over a finite interval,
// templated on the integrand value type (double or complex<double>).
// Refinement bisects the segment with the largest error estimate;
// termination and segment selection are scale-invariant, so integrands
// that differ by a constant factor follow identical refinement paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "mwindex/errors.hpp"

namespace mwindex {

struct QuadOptions {
  double rel_tol = 1e-8;
  double abs_floor = 1e-30; // in result units
  int max_intervals = 4000;
  std::vector<double> split_points = {}; // seed subdivision, clamped to (a,b)
};

template <class T> struct QuadResult {
  T value{};
  double error = 0.0; // absolute estimate
  int intervals = 0;
};

namespace detail {

// QUADPACK dqk15 abscissae/weights on [-1,1].
inline constexpr double kGk15X[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kGk15Wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kG7W[4] = {0.129484966168870, 0.279705391489277,
                                   0.381830050505119, 0.417959183673469};

template <class T> inline double quad_norm(const T& v) {
  if constexpr (std::is_floating_point_v<T>)
    return std::abs(v);
  else
    return std::abs(v); // complex
}

template <class F, class T>
inline void gk15(F& f, double a, double b, T& integral, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kGk15X[i]);
    fv[14 - i] = f(c + h * kGk15X[i]);
  }
  fv[7] = f(c);
  T resk{};
  for (int i = 0; i < 7; ++i)
    resk += kGk15Wk[i] * (fv[i] + fv[14 - i]);
  resk += kGk15Wk[7] * fv[7];
  T resg{};
  for (int i = 0; i < 3; ++i)
    resg += kG7W[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resg += kG7W[3] * fv[7];
  integral = resk * h;
  error = quad_norm<T>((resk - resg) * h);
}

template <class T> struct QuadSegment {
  double a, b;
  T value;
  double error;
};

} // namespace detail

template <class F,
          class T = std::decay_t<std::invoke_result_t<F&, double>>>
QuadResult<T> integrate_adaptive(F&& f, double a, double b,
                                 const QuadOptions& opt = {}) {
  if (!(b > a))
    throw DomainError("integrate_adaptive: empty or reversed interval");

  std::vector<double> bounds;
  bounds.push_back(a);
  for (double s : opt.split_points)
    if (s > a && s < b)
      bounds.push_back(s);
  bounds.push_back(b);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  std::vector<detail::QuadSegment<T>> segs;
  segs.reserve(static_cast<std::size_t>(opt.max_intervals) + 1);
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    detail::QuadSegment<T> s{bounds[i], bounds[i + 1], T{}, 0.0};
    detail::gk15(f, s.a, s.b, s.value, s.error);
    segs.push_back(s);
  }

  auto total = [&segs]() {
    T v{};
    double e = 0.0;
    for (const auto& s : segs) {
      v += s.value;
      e += s.error;
    }
    return std::pair<T, double>(v, e);
  };

  while (true) {
    auto [value, error] = total();
    const double goal =
        std::max(opt.rel_tol * detail::quad_norm<T>(value), opt.abs_floor);
    if (error <= goal)
      return {value, error, static_cast<int>(segs.size())};
    if (static_cast<int>(segs.size()) >= opt.max_intervals)
      throw QuadratureError("integrate_adaptive: interval budget exhausted",
                            error, goal);
    // Bisect the worst segment (ties broken by the left endpoint so the
    // refinement path is deterministic).
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].error > segs[worst].error ||
          (segs[i].error == segs[worst].error && segs[i].a < segs[worst].a))
        worst = i;
    }
    const double mid = 0.5 * (segs[worst].a + segs[worst].b);
    if (!(mid > segs[worst].a && mid < segs[worst].b))
      throw QuadratureError(
          "integrate_adaptive: interval too small to bisect", error, goal);
    detail::QuadSegment<T> left{segs[worst].a, mid, T{}, 0.0};
    detail::QuadSegment<T> right{mid, segs[worst].b, T{}, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    segs[worst] = left;
    segs.push_back(right);
  }
}

} // namespace mwindex

#endif
