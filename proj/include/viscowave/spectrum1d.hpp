#pragma once

#include <vector>

#include "viscowave/contour.hpp"
#include "viscowave/kernel.hpp"

namespace viscowave {

struct Eigenvalue {
  Complex z;
  int n;            // branch index: Im z is near pi*n (interval) / s_n (disk)
  double residual;  // |G(z)| at the accepted root
  Complex seed;     // asymptotic starting point
  int newton_iters;
};

// Pole-free characteristic function of the interval problem,
// G(z) = (k^2+1) sin(iz) + 2ik cos(iz) with k = k-hat(z); its zeros off
// (-inf,0] are exactly the eigenvalues.
Complex characteristic_g(const Kernel& k, Complex z);
Complex characteristic_g_prime(const Kernel& k, Complex z);

// Argument-principle count of zeros of G inside w. The window must stay in
// the open left half-plane and off the real axis, where G is analytic.
int count_zeros(const Kernel& k, const Window& w, int quad_points = 16);

// Leading-order root: i pi n - 2 k-hat(i pi n).
Complex asymptotic_eigenvalue(const Kernel& k, int n);

// One certified root per branch index in [n_min, n_max] (0 excluded,
// negative indices allowed). Newton from the asymptotic seed with a
// fixed-point fallback; every accepted root is certified by a window count
// of one. Throws ConvergenceFailure / CertificationMismatch with the branch
// index in the message.
std::vector<Eigenvalue> find_eigenvalues(const Kernel& k, int n_min, int n_max,
                                         double tol = 1e-10);

// r_n = (-Re z)/(Re k-hat(i Im z)); approaches 2 along the root chain.
double damping_ratio(const Kernel& k, const Eigenvalue& ev);

}  // namespace viscowave
