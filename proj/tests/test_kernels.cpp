#include "viscowave/kernel.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "viscowave/errors.hpp"

using namespace viscowave;
using oracle::Complex;

namespace {
const double kPi = 3.141592653589793238462643383279502884;
const double kSqrtPi = 1.772453850905516027298167483341;

Complex numeric_prime_transform(double alpha, double beta, Complex z) {
  // Independent split: plain Simpson on the bounded piece, exact closed
  // form pi/sin(pi beta) (1+z)^{-beta} for the tail piece.
  auto piece1 = oracle::simpson(
      [&](double tau) { return std::pow(tau, alpha) / (z + tau); }, 0.0, 1.0, 1e-13);
  return piece1 + kPi / std::sin(kPi * beta) * std::pow(1.0 + z, -beta);
}

std::vector<Kernel> sample_kernels() {
  Eigen::VectorXd nodes(3), weights(3);
  nodes << 0.5, 2.0, 10.0;
  weights << 1.0, 0.3, 0.2;
  std::vector<Kernel> ks;
  ks.push_back(Kernel::standard(0.3, 1.0));
  ks.push_back(Kernel::standard(0.7, 2.0));
  ks.push_back(Kernel::prime(2.0, 0.5));
  ks.push_back(Kernel::exponential(1.0));
  ks.push_back(Kernel::measure(nodes, weights));
  return ks;
}
}  // namespace

TEST_CASE("construction rejects out-of-range parameters") {
  CHECK_THROWS_AS(Kernel::standard(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::standard(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::standard(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::prime(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::prime(2.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::exponential(-1.0), std::invalid_argument);
  Eigen::VectorXd n(2), w(2);
  n << 2.0, 1.0;
  w << 1.0, 1.0;
  CHECK_THROWS_AS(Kernel::measure(n, w), std::invalid_argument);
  n << 0.0, 1.0;
  CHECK_THROWS_AS(Kernel::measure(n, w), std::invalid_argument);
}

TEST_CASE("transform closed-form values") {
  CHECK(std::abs(laplace_transform(Kernel::standard(0.5, 1.0), 0.0) - kSqrtPi) < 1e-14);
  CHECK(std::abs(laplace_transform(Kernel::exponential(1.0), 1.0) - 0.5) < 1e-15);
}

TEST_CASE("standard transform matches time-domain integral at z = 10i") {
  const Complex z{0.0, 10.0};
  const Complex got = laplace_transform(Kernel::standard(0.5, 1.0), z);
  // t = u^2 removes the endpoint singularity of e^{-(1+10i)t} t^{-1/2}.
  const Complex want = oracle::simpson(
      [&](double u) { return 2.0 * std::exp(-(1.0 + z) * (u * u)); }, 0.0, 6.5, 1e-14);
  CHECK(std::abs(got - want) < 1e-10 * std::abs(want));
  CHECK(std::abs(std::abs(got) - kSqrtPi * std::pow(101.0, -0.25)) < 1e-13);
  CHECK(std::abs(std::arg(got) - 0.5 * std::atan2(-10.0, 1.0)) < 1e-13);
}

TEST_CASE("evaluation on the cut or at poles is a domain error") {
  CHECK_THROWS_AS(laplace_transform(Kernel::standard(0.5, 1.0), -2.0), DomainError);
  CHECK_THROWS_AS(laplace_transform(Kernel::standard(0.5, 1.0), -1.0), DomainError);
  CHECK_THROWS_AS(laplace_transform(Kernel::prime(2.0, 0.5), -0.5), DomainError);
  CHECK_THROWS_AS(laplace_transform(Kernel::prime(2.0, 0.5), 0.0), DomainError);
  CHECK_THROWS_AS(laplace_transform(Kernel::exponential(1.0), -1.0), DomainError);
  CHECK_NOTHROW(laplace_transform(Kernel::standard(0.5, 1.0), Complex(-2.0, 0.5)));
}

TEST_CASE("conjugate symmetry and positive real part on the imaginary axis") {
  for (const Kernel& k : sample_kernels()) {
    for (double s : oracle::logspace(0.1, 1000.0, 9)) {
      const Complex up = laplace_transform(k, Complex(0.0, s));
      const Complex dn = laplace_transform(k, Complex(0.0, -s));
      CHECK(std::abs(std::conj(up) - dn) < 1e-9 * std::abs(up));
      CHECK(up.real() > 0.0);
    }
  }
}

TEST_CASE("impedance polar form agrees with the transform") {
  const Kernel k = Kernel::standard(0.7, 1.0);
  for (double s : {0.5, 3.0, 100.0, -40.0}) {
    const ImpedanceParts ip = impedance_parts(k, s);
    const Complex v = laplace_transform(k, Complex(0.0, s));
    CHECK(std::abs(ip.re - v.real()) < 1e-13 * std::abs(v));
    CHECK(std::abs(ip.im - v.imag()) < 1e-13 * std::abs(v));
    CHECK(std::abs(ip.abs - std::abs(v)) < 1e-13 * std::abs(v));
  }
  const ImpedanceParts at0 = impedance_parts(Kernel::exponential(1.0), 0.0);
  CHECK(at0.re == doctest::Approx(1.0));
  CHECK(at0.im == doctest::Approx(0.0));
  CHECK(at0.abs == doctest::Approx(1.0));
}

TEST_CASE("standard impedance asymptotics") {
  for (double beta : {0.3, 0.5, 0.9}) {
    const Kernel k = Kernel::standard(beta, 1.0);
    const double g = std::tgamma(beta);
    // |k-hat(is)| s^beta -> Gamma(beta): already within 5% at s = 1e3.
    const ImpedanceParts far = impedance_parts(k, 1000.0);
    CHECK(std::abs(far.abs * std::pow(1000.0, beta) - g) < 0.05 * g);
    // s^beta Re k-hat(is) -> Gamma(beta) cos(beta pi/2).
    const double lim = g * std::cos(0.5 * kPi * beta);
    const ImpedanceParts vf = impedance_parts(k, 1e6);
    CHECK(std::abs(vf.re * std::pow(1e6, beta) - lim) < 1e-3 * lim);
  }
}

TEST_CASE("transform derivative matches difference quotient") {
  const double h = 1e-5;
  for (const Kernel& k : sample_kernels()) {
    for (Complex z : {Complex(0.3, 2.0), Complex(-0.4, 1.5), Complex(0.0, 40.0)}) {
      const Complex want =
          (laplace_transform(k, z + h) - laplace_transform(k, z - h)) / (2.0 * h);
      const Complex got = laplace_derivative(k, z);
      CHECK(std::abs(got - want) < 1e-6 * std::abs(want));
    }
  }
}

TEST_CASE("prime transform agrees with independent split oracle") {
  for (auto [alpha, beta] : {std::pair{2.0, 0.5}, std::pair{1.5, 0.8}}) {
    const Kernel k = Kernel::prime(alpha, beta);
    for (Complex z : {Complex(1.0, 0.0), Complex(0.0, 10.0), Complex(0.5, 5.0),
                      Complex(-0.5, 2.0), Complex(0.0, 100.0)}) {
      const Complex want = numeric_prime_transform(alpha, beta, z);
      const Complex got = laplace_transform(k, z);
      CHECK(std::abs(got - want) < 1e-9 * std::abs(want));
    }
  }
}

TEST_CASE("integrability values") {
  CHECK(check_integrability(Kernel::exponential(2.0)).value == doctest::Approx(0.5));
  CHECK(check_integrability(Kernel::exponential(2.0)).integrable);

  // Standard: integral of tau^{-1} (tau-eps)^{-beta}/Gamma(1-beta) over
  // [eps,inf) equals k-hat(0). Checked against direct quadrature with the
  // substitution u = sqrt(tau-1).
  const double direct =
      oracle::simpson([&](double u) { return Complex(2.0 / (1.0 + u * u), 0.0); }, 0.0,
                      1e6, 1e-10)
          .real() /
      std::tgamma(0.5);
  const double reported = check_integrability(Kernel::standard(0.5, 1.0)).value;
  CHECK(std::abs(reported - kSqrtPi) < 1e-14);
  CHECK(std::abs(direct - reported) < 1e-5);

  const double prime_val = check_integrability(Kernel::prime(2.0, 0.5)).value;
  CHECK(prime_val == doctest::Approx(0.5 + kPi));

  Eigen::VectorXd n(2), w(2);
  n << 0.5, 4.0;
  w << 1.0, 2.0;
  CHECK(check_integrability(Kernel::measure(n, w)).value == doctest::Approx(2.5));
}

TEST_CASE("zero-spectrum classification") {
  CHECK(classify_zero_spectrum(Kernel::standard(0.5, 1.0)) == ZeroSpectrumClass::Invertible);
  CHECK(classify_zero_spectrum(Kernel::standard(0.9, 0.1)) == ZeroSpectrumClass::Invertible);
  CHECK(classify_zero_spectrum(Kernel::exponential(3.0)) == ZeroSpectrumClass::Invertible);
  CHECK(classify_zero_spectrum(Kernel::prime(2.0, 0.5)) ==
        ZeroSpectrumClass::SquareIntegrableSingularity);
}

TEST_CASE("growth condition report") {
  Eigen::VectorXd s(8);
  for (int i = 0; i < 8; ++i) s[i] = 1e3 * std::pow(1e4, i / 7.0);

  const ConditionReport holds = condition_additional(Kernel::standard(0.8, 1.0), 2.0 / 3.0, s);
  REQUIRE(holds.exact_verdict.has_value());
  CHECK(*holds.exact_verdict);
  CHECK(holds.decreasing);

  const ConditionReport fails = condition_additional(Kernel::standard(0.5, 1.0), 2.0 / 3.0, s);
  REQUIRE(fails.exact_verdict.has_value());
  CHECK_FALSE(*fails.exact_verdict);

  // Exponential: |k-hat|^3/(Re k-hat)^2 = |1+is|, so Q grows ~ s log s;
  // raw samples only, no verdict.
  const ConditionReport expk = condition_additional(Kernel::exponential(1.0), 0.0, s);
  CHECK_FALSE(expk.exact_verdict.has_value());
  CHECK_FALSE(expk.decreasing);
  const double ratio = expk.q_values[1] / expk.q_values[0];
  const double expect = std::abs(Complex(1.0, s[1])) * (1.0 + std::log(s[1])) /
                        (std::abs(Complex(1.0, s[0])) * (1.0 + std::log(s[0])));
  CHECK(ratio == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("measure discretization: exact cases") {
  const MeasureQuadrature mq = discretize_measure(Kernel::exponential(3.0), 17, 100.0);
  REQUIRE(mq.nodes.size() == 1);
  CHECK(mq.nodes[0] == doctest::Approx(3.0));
  CHECK(mq.weights[0] == doctest::Approx(1.0));
  CHECK(mq.max_rel_error == 0.0);

  Eigen::VectorXd n(2), w(2);
  n << 0.5, 4.0;
  w << 1.0, 2.0;
  const MeasureQuadrature id = discretize_measure(Kernel::measure(n, w), 10, 100.0);
  CHECK(id.nodes == n);
  CHECK(id.weights == w);
}

TEST_CASE("measure discretization: standard kernel") {
  const Kernel k = Kernel::standard(0.5, 1.0);
  const MeasureQuadrature mq = discretize_measure(k, 40, 1e4);
  CHECK(mq.max_rel_error < 1e-3);
  for (int j = 0; j < mq.nodes.size(); ++j) {
    CHECK(mq.weights[j] > 0.0);
    if (j > 0) CHECK(mq.nodes[j] > mq.nodes[j - 1]);
  }
  // Independent spot check against the closed form.
  for (double s : {0.1, 1.0, 10.0, 100.0}) {
    const Complex z{0.0, s};
    Complex disc{0.0, 0.0};
    for (int j = 0; j < mq.nodes.size(); ++j) disc += mq.weights[j] / (z + mq.nodes[j]);
    const Complex exact = kSqrtPi * std::pow(1.0 + z, -0.5);
    CHECK(std::abs(disc - exact) < 1.5e-3 * std::abs(exact));
  }
  // Wider beta range at simulation-scale settings.
  CHECK(discretize_measure(Kernel::standard(0.8, 1.0), 48, 1e6).max_rel_error < 1.5e-3);
  CHECK(discretize_measure(Kernel::standard(0.3, 1.0), 48, 1e6).max_rel_error < 1.5e-3);
}

TEST_CASE("measure discretization: prime kernel vs independent oracle") {
  const Kernel k = Kernel::prime(2.0, 0.5);
  const MeasureQuadrature mq = discretize_measure(k, 60, 1e4);
  double worst = 0.0;
  for (double s : oracle::logspace(0.1, 100.0, 15)) {
    const Complex z{0.0, s};
    Complex disc{0.0, 0.0};
    for (int j = 0; j < mq.nodes.size(); ++j) disc += mq.weights[j] / (z + mq.nodes[j]);
    const Complex exact = numeric_prime_transform(2.0, 0.5, z);
    worst = std::max(worst, std::abs(disc - exact) / std::abs(exact));
  }
  CHECK(worst < 1e-3);
  CHECK(mq.tail_bound < 0.05);
}
