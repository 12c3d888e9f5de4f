#pragma once

#include <vector>

#include "viscowave/bessel.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/spectrum1d.hpp"

namespace viscowave {

// Characteristic function of the disk problem at angular order l,
//   D(z) = J_l'(iz) - i k(z) J_l(iz),
// written in product form so the quotient J'/J contributes no poles. Zeros
// with Re z < 0 are the disk eigenvalues.
Complex disk_characteristic(const Kernel& k, int l, Complex z);

// d/dz of the characteristic, with J_l'' supplied by the Bessel equation.
Complex disk_characteristic_prime(const Kernel& k, int l, Complex z);

// Reference frequency of the n-th branch, s_n = n pi + (2l+1) pi/4 (n >= 1).
double disk_seed_frequency(int l, int n);

// First-order eigenvalue prediction i s_n - k(i s_n); used as the Newton
// seed. Negative n mirrors the conjugate branch.
Complex asymptotic_disk_eigenvalue(const Kernel& k, int l, int n);

// Newton refinement from the asymptotic seeds plus argument-principle
// certification that each window holds exactly one zero of D. Branch indices
// run over [n_min, n_max] excluding 0; throws ConvergenceFailure or
// CertificationMismatch on the offending index.
std::vector<Eigenvalue> find_disk_eigenvalues(const Kernel& k, int l, int n_min,
                                              int n_max, double tol = 1e-8);

// Approach-rate diagnostics for one accepted eigenvalue.
struct DiskRate {
  // (i s_n - z_n) / k(i s_n); tends to 1 along each branch.
  Complex xi_ratio;
  // (-Re z_n) |Im z_n|^q with q the kernel's impedance decay exponent
  // (q = beta for the power-tail kernels, 2 otherwise); bounded in n.
  double rate_product = 0.0;
};

DiskRate disk_rate(const Kernel& k, int l, const Eigenvalue& ev);

}  // namespace viscowave
