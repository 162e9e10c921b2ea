#pragma once

#include <algorithm>
#include <cmath>

namespace hamest {

/// h = 1e-5 · max(1, |ξ|).
inline double default_step(double xi) { return 1e-5 * std::max(1.0, std::abs(xi)); }

/// Sample points of a central-difference stencil with one Richardson level.
struct Stencil {
  double xi;
  double h;

  double minus() const { return xi - h; }
  double plus() const { return xi + h; }
  double half_minus() const { return xi - 0.5 * h; }
  double half_plus() const { return xi + 0.5 * h; }

  /// Richardson-extrapolated first derivative from values at the four offsets.
  template <class T>
  T first(const T& f_minus, const T& f_plus, const T& f_half_minus, const T& f_half_plus) const {
    const T coarse = (f_plus - f_minus) / (2.0 * h);
    const T fine = (f_half_plus - f_half_minus) / h;
    return (4.0 * fine - coarse) / 3.0;
  }

  /// Richardson-extrapolated second derivative; needs the centre value too.
  template <class T>
  T second(const T& f_centre, const T& f_minus, const T& f_plus, const T& f_half_minus,
           const T& f_half_plus) const {
    const T coarse = (f_plus - 2.0 * f_centre + f_minus) / (h * h);
    const T fine = (f_half_plus - 2.0 * f_centre + f_half_minus) / (0.25 * h * h);
    return (4.0 * fine - coarse) / 3.0;
  }
};

inline Stencil make_stencil(double xi, double step) {
  return Stencil{xi, step > 0.0 ? step : default_step(xi)};
}

}  // namespace hamest
