#pragma once

#include <complex>

namespace viscowave {

using Complex = std::complex<double>;

enum class BesselMethod { PowerSeries, Asymptotic };

// First-kind Bessel value and derivative at a complex argument.
struct BesselEval {
  int l = 0;
  Complex z;
  Complex J;
  Complex Jprime;
  BesselMethod method = BesselMethod::PowerSeries;
};

// Small-argument evaluator: plain ascending series near the origin, switching
// to backward-recurrence summation (normalized by the even-order sum rule)
// once the direct series would cancel, which keeps near machine accuracy up
// to the dispatch crossover.
BesselEval bessel_j_series(int l, Complex z);

// Large-argument expansion around cos(z - (2l+1)pi/4), summed adaptively to
// its smallest term. Requires z != 0; intended for Re z >= 0 away from the
// origin, where the truncation error is ~e^{-2 Re z}.
BesselEval bessel_j_asymptotic(int l, Complex z);

// Dispatches on |z| against the crossover 30 + 2l. Arguments with Re z < 0
// are folded to Re z > 0 through the parity relation J_l(-z) = (-1)^l J_l(z),
// keeping the expansion off the square-root branch cut.
BesselEval bessel_j(int l, Complex z);

// J_l'' recovered from the defining equation
//   J'' = -J'/z - (1 - l^2/z^2) J.
// Requires z != 0.
Complex bessel_second_derivative(const BesselEval& e);

}  // namespace viscowave
