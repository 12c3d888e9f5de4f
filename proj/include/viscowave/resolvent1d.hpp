#pragma once

#include <Eigen/Dense>
#include <vector>

#include "viscowave/kernel.hpp"

namespace viscowave {

using Eigen::VectorXcd;

// Solution operator for the stationary problem on (0,1),
//   -s^2 p - p'' = f,   -p'(0) + is k(is) p(0) = 0,   p'(1) + is k(is) p(1) = 0,
// in the explicit form p = p_f + a p0 with
//   p_f(x) = -(1/s) int_0^x sin(s(x-y)) f(y) dy,
//   p0(x)  = cos(sx) + i k(is) sin(sx),
// and the coupling coefficient read off from the right boundary condition
// with the sine poles cancelled symbolically. One apply costs O(N) through
// prefix sums of e^{+-isy} f; the phase tables are cached so repeated applies
// at the same frequency (norm estimation) stay cheap.
class StationarySolver1D {
 public:
  // grid_n intervals, grid_n+1 nodes. Requires |s| >= 1e-3 (the operator is
  // evaluated at nonzero real frequencies only) and |s|/grid_n <= 0.5 so the
  // trapezoid rule resolves the oscillation.
  StationarySolver1D(const Kernel& k, double s, int grid_n);

  // Throws DegenerateDenominator when the pole-cancelled denominator
  // underflows; impossible for real s in exact arithmetic, but guarded.
  VectorXcd operator()(const VectorXcd& f) const;

  double s() const { return s_; }
  int grid_n() const { return n_; }
  Complex kappa() const { return kappa_; }

 private:
  double s_ = 0.0;
  int n_ = 0;
  double h_ = 0.0;
  Complex kappa_;
  Complex denominator_;
  VectorXcd phase_;  // e^{i s x_j}
  VectorXcd p0_;     // cos(s x_j) + i kappa sin(s x_j)
};

// One-shot convenience wrapper; f holds grid_n+1 nodes on [0,1].
VectorXcd solve_stationary(const Kernel& k, double s, const VectorXcd& f);

// Independent second-order reference: ghost-node discretization of the same
// boundary value problem, solved with the complex tridiagonal (Thomas)
// algorithm. Exists so the formula path can be validated against a scheme
// that shares none of its structure.
VectorXcd fd_stationary_reference(const Kernel& k, double s, const VectorXcd& f);

struct ResolventProbe {
  double s = 0.0;
  double norm_R = 0.0;  // largest singular value in the trapezoid L2 pairing
  int grid_n = 0;
  double refinement_ratio = 1.0;  // norm at 2 grid_n over norm at grid_n
};

// Largest singular value of the discrete solution operator, matrix-free:
// T(-s)T(s) is self-adjoint in the trapezoid inner product (the discrete
// kernel inherits the symmetry of the continuous Green function), so a
// Lanczos iteration with full reorthogonalization converges on its top
// eigenvalue without ever assembling a matrix. The estimate is recomputed on
// the doubled grid; a refinement ratio outside [0.9, 1.1] throws
// ConvergenceFailure. grid_n >= 64; the grid is widened to keep s h <= 0.25.
ResolventProbe resolvent_norm(const Kernel& k, double s, int grid_n);

// Dense reference path: assembles the operator column by column and takes an
// SVD. Cubic in the grid size, intended for cross-validation at small grids.
double resolvent_norm_dense(const Kernel& k, double s, int grid_n);

// Single-grid Lanczos estimate without the refinement pass, for scans.
double resolvent_norm_single(const Kernel& k, double s, int grid_n);

struct TwoSidedReport {
  std::vector<double> s;  // report frequencies (>= 10)
  std::vector<double> b;  // B(s) = Re k(is) * sup_{sigma <= s} sigma norm_R(sigma)
  double b_min = 0.0;
  double b_max = 0.0;
  double ratio = 0.0;  // b_max / b_min
};

// Probes sigma on a log grid of [1, s_max] joined with the resonant points
// pi n, forms the running supremum of the full-operator proxy sigma*norm_R,
// and reports how far B(s) is from constant over s in [10, s_max].
TwoSidedReport two_sided_check(const Kernel& k, double s_max, int n_log = 120,
                               int grid_n = 256);

struct LowFrequencyReport {
  std::vector<double> s;
  std::vector<double> damped_product;  // s * norm_R
  std::vector<double> strict_product;  // s^2 * norm_R
  double damped_ratio = 0.0;           // max/min of damped_product
  double strict_ratio = 0.0;           // max/min of strict_product
};

// Low-frequency boundedness probe for kernels that are invertible at zero.
// Both products are reported: s*norm_R is the quantity that stays flat as
// s drops (the resolvent grows like 1/s through the constant mode), while
// s^2*norm_R applies the large-frequency proxy factor a second time and
// decays linearly; see the strict_ratio field for how far from constant it
// is across the samples.
LowFrequencyReport low_frequency_check(const Kernel& k,
                                       const std::vector<double>& s_samples = {
                                           0.3, 0.1, 0.03});

}  // namespace viscowave
