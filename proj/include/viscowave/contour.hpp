#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "viscowave/errors.hpp"

namespace viscowave {

using Complex = std::complex<double>;

// Axis-aligned rectangle in the complex plane.
struct Window {
  double re_lo, re_hi, im_lo, im_hi;

  Window(double rl, double rh, double il, double ih)
      : re_lo(rl), re_hi(rh), im_lo(il), im_hi(ih) {
    if (!(rl < rh) || !(il < ih))
      throw std::invalid_argument("Window: degenerate rectangle");
  }

  Complex corner(int j) const {
    switch (j & 3) {  // counterclockwise from bottom-left
      case 0: return {re_lo, im_lo};
      case 1: return {re_hi, im_lo};
      case 2: return {re_hi, im_hi};
      default: return {re_lo, im_hi};
    }
  }
};

namespace detail {

template <class F>
double phase_walk(F& f, Complex za, Complex zb, Complex fa, Complex fb,
                  double floor_abs, int depth) {
  const double d = std::arg(fb / fa);
  // A step of more than pi/2 cannot be trusted to have tracked the branch.
  if (std::abs(d) <= 1.5707963267948966) return d;
  if (depth <= 0)
    throw BoundaryTooClose("winding_number: phase step failed to resolve");
  const Complex zm = 0.5 * (za + zb);
  const Complex fm = f(zm);
  if (std::abs(fm) < floor_abs)
    throw BoundaryTooClose("winding_number: |f| below floor on contour");
  return phase_walk(f, za, zm, fa, fm, floor_abs, depth - 1) +
         phase_walk(f, zm, zb, fm, fb, floor_abs, depth - 1);
}

}  // namespace detail

// Number of zeros of an analytic f inside the rectangle, by the argument
// principle with adaptive phase continuation along the boundary.
template <class F>
int winding_number(F&& f, const Window& w, int per_edge = 16,
                   double floor_abs = 1e-9) {
  per_edge = std::max(2, per_edge);
  std::vector<Complex> pts;
  pts.reserve(4 * per_edge);
  for (int e = 0; e < 4; ++e) {
    const Complex a = w.corner(e);
    const Complex b = w.corner(e + 1);
    for (int j = 0; j < per_edge; ++j)
      pts.push_back(a + (b - a) * (double(j) / per_edge));
  }
  std::vector<Complex> vals(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    vals[i] = f(pts[i]);
    if (std::abs(vals[i]) < floor_abs)
      throw BoundaryTooClose("winding_number: |f| below floor on contour");
  }
  double total = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const size_t j = (i + 1) % pts.size();
    total += detail::phase_walk(f, pts[i], pts[j], vals[i], vals[j], floor_abs, 40);
  }
  const double wind = total / (2.0 * 3.141592653589793238462643383279502884);
  const double rounded = std::round(wind);
  if (std::abs(wind - rounded) >= 0.1)
    throw ConvergenceFailure("winding_number: accumulated phase is not near an integer");
  return static_cast<int>(rounded);
}

}  // namespace viscowave
