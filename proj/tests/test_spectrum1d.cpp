#include "viscowave/spectrum1d.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "viscowave/errors.hpp"

using namespace viscowave;

namespace {
const double kPi = 3.141592653589793238462643383279502884;
const Complex kI{0.0, 1.0};

Complex undamped_g(Complex z) { return std::sin(kI * z); }
}  // namespace

TEST_CASE("winding number of the undamped characteristic") {
  // sin(iz) vanishes exactly at z = i pi n.
  CHECK(winding_number(undamped_g, Window(-1.0, 1.0, 0.5 * kPi, 1.5 * kPi)) == 1);
  CHECK(winding_number(undamped_g, Window(-1.0, 1.0, 1.5 * kPi, 2.5 * kPi)) == 1);
  CHECK(winding_number(undamped_g, Window(-1.0, 1.0, 0.1 * kPi, 0.9 * kPi)) == 0);
  CHECK(winding_number(undamped_g, Window(-1.0, 1.0, 0.5 * kPi, 3.5 * kPi)) == 3);
  // A zero sitting on the contour must be reported, not mis-counted.
  CHECK_THROWS_AS(winding_number(undamped_g, Window(-1.0, 1.0, kPi, 2.5 * kPi)),
                  BoundaryTooClose);
}

TEST_CASE("count_zeros window validation and branch windows") {
  const Kernel k = Kernel::standard(0.7, 1.0);
  CHECK_THROWS_AS(count_zeros(k, Window(-1.0, 1.0, 1.0, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(count_zeros(k, Window(-2.0, -1.0, -1.0, 2.0)), std::invalid_argument);

  // One zero per branch window, none between consecutive branches.
  const int n = 50;
  CHECK(count_zeros(k, Window(-6.0, -0.005, kPi * (n - 0.5), kPi * (n + 0.5))) == 1);
  CHECK(count_zeros(k, Window(-6.0, -0.005, kPi * (n - 1.5), kPi * (n - 0.5))) == 1);
  CHECK(count_zeros(k, Window(-6.0, -0.005, kPi * (n + 0.1), kPi * (n + 0.9))) == 0);
}

TEST_CASE("asymptotic seeds") {
  const Complex s10 = asymptotic_eigenvalue(Kernel::exponential(1.0), 10);
  const Complex want = Complex(0.0, 10.0 * kPi) - 2.0 / Complex(1.0, 10.0 * kPi);
  CHECK(std::abs(s10 - want) < 1e-14);

  CHECK(std::abs(asymptotic_eigenvalue(Kernel::exponential(1.0), -5) -
                 std::conj(asymptotic_eigenvalue(Kernel::exponential(1.0), 5))) < 1e-15);

  for (double beta : {0.4, 0.8}) {
    const Kernel k = Kernel::standard(beta, 1.0);
    const double lim = 2.0 * std::tgamma(beta) * std::cos(0.5 * kPi * beta);
    const int n = 10000;
    const double got = -asymptotic_eigenvalue(k, n).real() * std::pow(kPi * n, beta);
    CHECK(std::abs(got - lim) < 0.01 * lim);
  }

  CHECK_THROWS_AS(asymptotic_eigenvalue(Kernel::exponential(1.0), 0), std::invalid_argument);
}

TEST_CASE("characteristic at a sine zero does not vanish") {
  // At z = i pi the sine factor drops out and G = -2i k-hat(i pi).
  const Kernel k = Kernel::exponential(1.0);
  const Complex g = characteristic_g(k, Complex(0.0, kPi));
  CHECK(std::abs(g) == doctest::Approx(2.0 / std::sqrt(1.0 + kPi * kPi)).epsilon(1e-10));
  CHECK(std::abs(g) > 0.1);
}

TEST_CASE("characteristic derivative matches difference quotient") {
  const Kernel k = Kernel::standard(0.6, 1.0);
  const double h = 1e-6;
  for (Complex z : {Complex(-0.8, 10.0), Complex(-0.3, 40.0)}) {
    const Complex want = (characteristic_g(k, z + h) - characteristic_g(k, z - h)) / (2.0 * h);
    CHECK(std::abs(characteristic_g_prime(k, z) - want) < 1e-6 * std::abs(want));
  }
}

TEST_CASE("eigenvalues of the standard kernel") {
  const Kernel k = Kernel::standard(0.7, 1.0);
  const auto roots = find_eigenvalues(k, 5, 60);
  REQUIRE(roots.size() == 56);
  for (const Eigenvalue& ev : roots) {
    CHECK(ev.residual <= 1e-10);
    CHECK(ev.z.real() < 0.0);
    CHECK(std::abs(ev.z.imag() - kPi * ev.n) < 0.5 * kPi);
    // Exact branch relation: tan(iz)(1+k^2) = -2ik, an algebraic form the
    // Newton objective never evaluates.
    const Complex kap = laplace_transform(k, ev.z);
    const Complex rel = std::tan(kI * ev.z) * (1.0 + kap * kap) + 2.0 * kI * kap;
    CHECK(std::abs(rel) < 1e-9);
  }
  // Approach to the asymptotic damping ratio.
  const Eigenvalue& last = roots.back();
  CHECK(std::abs(damping_ratio(k, last) - 2.0) < 0.1);
}

TEST_CASE("conjugate symmetry of the root list") {
  const Kernel k = Kernel::standard(0.5, 1.0);
  const auto pos = find_eigenvalues(k, 3, 7);
  const auto neg = find_eigenvalues(k, -7, -3);
  REQUIRE(pos.size() == neg.size());
  for (size_t i = 0; i < pos.size(); ++i) {
    const Eigenvalue& p = pos[i];
    const Eigenvalue& m = neg[neg.size() - 1 - i];
    CHECK(p.n == -m.n);
    CHECK(std::abs(p.z - std::conj(m.z)) < 1e-12 * std::abs(p.z));
  }
}

TEST_CASE("exponential kernel damping ratio") {
  const Kernel k = Kernel::exponential(1.0);
  const auto roots = find_eigenvalues(k, 20, 60);
  for (const Eigenvalue& ev : roots) CHECK(ev.z.real() < 0.0);
  const Eigenvalue& last = roots.back();
  const double ratio = -last.z.real() / impedance_parts(k, kPi * last.n).re;
  CHECK(std::abs(ratio - 2.0) < 0.05);
}

TEST_CASE("index range validation") {
  const Kernel k = Kernel::exponential(1.0);
  CHECK_THROWS_AS(find_eigenvalues(k, -2, 2), std::invalid_argument);
  CHECK_THROWS_AS(find_eigenvalues(k, 5, 4), std::invalid_argument);
}
