#include "viscowave/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace viscowave {

namespace {

using CLong = std::complex<long double>;

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Ascending series sum(_m) (-1)^m (w/2)^(2m+l) / (m! (m+l)!). Only used for
// small |w| where the terms never grow, so no cancellation is lost.
CLong series_order(int nu, CLong w) {
  CLong term = 1.0L;
  for (int m = 1; m <= nu; ++m) term *= w / (2.0L * m);
  const CLong q = 0.25L * w * w;
  CLong sum = term;
  for (int m = 1; m < 400; ++m) {
    term *= -q / (static_cast<long double>(m) * (m + nu));
    sum += term;
    if (m > 4 && std::abs(term) < 1e-21L * std::abs(sum)) break;
  }
  return sum;
}

// Backward recurrence f_{n-1} = (2n/w) f_n - f_{n+1} seeded above the turning
// point, normalized through f_0 + 2 f_2 + 2 f_4 + ... = 1. J_n is the minimal
// solution of the recurrence, so the arbitrary seed washes out on the way
// down; this keeps near machine accuracy where the direct series would cancel
// catastrophically. Returns (J_nu, J_{nu+1}).
std::pair<CLong, CLong> backward_pair(int nu, CLong w) {
  const double aw = std::abs(w);
  int top = nu + 2 + static_cast<int>(std::ceil(aw + 12.0 * std::cbrt(aw + 1.0) + 16.0));
  if (top % 2) ++top;
  CLong above = 0.0L;
  CLong cur = 1e-40L;
  CLong norm = (top % 2 == 0) ? 2.0L * cur : CLong(0.0L);
  CLong jl = 0.0L;
  CLong jl1 = 0.0L;
  for (int n = top; n >= 1; --n) {
    const CLong below = (2.0L * n / w) * cur - above;
    above = cur;
    cur = below;
    const int idx = n - 1;
    if (idx == nu) jl = cur;
    if (idx == nu + 1) jl1 = cur;
    if (idx % 2 == 0) norm += (idx == 0) ? cur : 2.0L * cur;
    if (std::abs(cur) > 1e300L) {
      const long double scale = 1e-300L;
      above *= scale;
      cur *= scale;
      norm *= scale;
      jl *= scale;
      jl1 *= scale;
    }
  }
  return {jl / norm, jl1 / norm};
}

// Large-argument expansion sqrt(2/(pi w)) sum(_k) t_k cos(chi + k pi/2) with
// chi = w - (2 nu + 1) pi/4, truncated at its smallest term. The optimal
// truncation error scales like e^{-2 Re w}.
CLong asym_order(int nu, CLong w) {
  const long double mu = 4.0L * nu * nu;
  const CLong chi = w - (2 * nu + 1) * (kPiL / 4.0L);
  CLong t = 1.0L;
  CLong sum = std::cos(chi);
  long double prev = 1.0L;
  for (int k = 1; k < 64; ++k) {
    t *= (mu - (2.0L * k - 1.0L) * (2.0L * k - 1.0L)) / (8.0L * k * w);
    const long double mag = std::abs(t);
    if (mag >= prev) break;
    sum += t * std::cos(chi + k * (kPiL / 2.0L));
    if (mag < 1e-21L) break;
    prev = mag;
  }
  return std::sqrt(2.0L / (kPiL * w)) * sum;
}

BesselEval eval_with(int l, Complex z, bool asymptotic) {
  BesselEval out;
  out.l = l;
  out.z = z;
  out.method = asymptotic ? BesselMethod::Asymptotic : BesselMethod::PowerSeries;
  if (z == Complex(0.0, 0.0)) {
    out.J = (l == 0) ? 1.0 : 0.0;
    out.Jprime = (l == 1) ? 0.5 : 0.0;
    return out;
  }
  const CLong w(z.real(), z.imag());
  CLong jl, jl1;
  if (asymptotic) {
    jl = asym_order(l, w);
    jl1 = asym_order(l + 1, w);
  } else if (std::abs(z) <= 8.0) {
    jl = series_order(l, w);
    jl1 = series_order(l + 1, w);
  } else {
    std::tie(jl, jl1) = backward_pair(l, w);
  }
  const CLong jp = -jl1 + (static_cast<long double>(l) / w) * jl;
  out.J = Complex(static_cast<double>(jl.real()), static_cast<double>(jl.imag()));
  out.Jprime = Complex(static_cast<double>(jp.real()), static_cast<double>(jp.imag()));
  return out;
}

void require_order(int l) {
  if (l < 0) throw std::invalid_argument("bessel_j: order must be nonnegative");
}

}  // namespace

BesselEval bessel_j_series(int l, Complex z) {
  require_order(l);
  return eval_with(l, z, false);
}

BesselEval bessel_j_asymptotic(int l, Complex z) {
  require_order(l);
  if (z == Complex(0.0, 0.0))
    throw std::invalid_argument("bessel_j_asymptotic: argument must be nonzero");
  return eval_with(l, z, true);
}

BesselEval bessel_j(int l, Complex z) {
  require_order(l);
  if (z.real() < 0.0) {
    BesselEval e = bessel_j(l, -z);
    const double parity = (l % 2 == 0) ? 1.0 : -1.0;
    e.z = z;
    e.J *= parity;
    e.Jprime *= -parity;
    return e;
  }
  const double crossover = 30.0 + 2.0 * l;
  return eval_with(l, z, std::abs(z) > crossover);
}

Complex bessel_second_derivative(const BesselEval& e) {
  if (e.z == Complex(0.0, 0.0))
    throw std::domain_error("bessel_second_derivative: argument must be nonzero");
  const Complex lw = static_cast<double>(e.l) / e.z;
  return -e.Jprime / e.z - (1.0 - lw * lw) * e.J;
}

}  // namespace viscowave
