#include "viscowave/spectrum_disk.hpp"

#include <cmath>
#include <string>
#include <variant>

#include "viscowave/contour.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/parallel.hpp"

namespace viscowave {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const Complex kI{0.0, 1.0};

// Exponent q with (-Re z_n) ~ |Im z_n|^{-q} along the branches: the decay of
// Re k(is). Power-tail kernels give beta, the rational ones give 2.
double impedance_decay_exponent(const Kernel& k) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StandardKernel>) return f.beta;
        else if constexpr (std::is_same_v<T, PrimeKernel>) return f.beta;
        else return 2.0;
      },
      k.form());
}

bool newton(const Kernel& k, int l, Complex& z, double tol, int max_iters,
            int& iters, double& resid) {
  for (iters = 0; iters < max_iters; ++iters) {
    const Complex d = disk_characteristic(k, l, z);
    resid = std::abs(d);
    if (resid <= 1e-2 * tol) return true;
    const Complex dp = disk_characteristic_prime(k, l, z);
    if (std::abs(dp) == 0.0) break;
    const Complex step = d / dp;
    z -= step;
    if (std::abs(step) < 1e-16 * std::abs(z)) break;
  }
  resid = std::abs(disk_characteristic(k, l, z));
  return resid <= tol;
}

Eigenvalue locate_one(const Kernel& k, int l, int n, double tol) {
  const Complex seed = asymptotic_disk_eigenvalue(k, l, n);
  Complex z = seed;
  int iters = 0;
  double resid = 0.0;
  if (!newton(k, l, z, tol, 60, iters, resid))
    throw ConvergenceFailure("find_disk_eigenvalues: no root at branch index " +
                             std::to_string(n) + ", order " + std::to_string(l));
  if (z.real() >= 0.0)
    throw ConvergenceFailure(
        "find_disk_eigenvalues: root escaped the left half-plane at index " +
        std::to_string(n));
  if (std::abs(z.imag() - seed.imag()) > 0.5 * kPi)
    throw ConvergenceFailure("find_disk_eigenvalues: root left its branch at index " +
                             std::to_string(n));

  // One zero per branch window; the contour floor scales with the Newton
  // tolerance so nearly undamped roots (|Re z| ~ residual scale) still
  // certify.
  double eta = 0.5 * std::abs(z.real());
  double big = std::max(4.0, 4.0 * std::abs(z.real()));
  const double center = z.imag();
  int count = -1;
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      const Window w(-big, -eta, center - 0.5 * kPi, center + 0.5 * kPi);
      count = winding_number([&](Complex zz) { return disk_characteristic(k, l, zz); },
                             w, 16, 1e-3 * tol);
      break;
    } catch (const BoundaryTooClose&) {
      eta *= 0.7;
      big *= 1.13;
      if (attempt == 3) throw;
    }
  }
  if (count != 1)
    throw CertificationMismatch("find_disk_eigenvalues: window count " +
                                std::to_string(count) + " at branch index " +
                                std::to_string(n));
  return {z, n, resid, seed, iters};
}

}  // namespace

Complex disk_characteristic(const Kernel& k, int l, Complex z) {
  const BesselEval e = bessel_j(l, kI * z);
  return e.Jprime - kI * laplace_transform(k, z) * e.J;
}

Complex disk_characteristic_prime(const Kernel& k, int l, Complex z) {
  const BesselEval e = bessel_j(l, kI * z);
  const Complex kap = laplace_transform(k, z);
  const Complex kapp = laplace_derivative(k, z);
  return kI * bessel_second_derivative(e) - kI * kapp * e.J + kap * e.Jprime;
}

double disk_seed_frequency(int l, int n) {
  if (l < 0) throw std::invalid_argument("disk_seed_frequency: order must be nonnegative");
  if (n < 1) throw std::invalid_argument("disk_seed_frequency: branch index must be >= 1");
  return n * kPi + (2 * l + 1) * kPi / 4.0;
}

Complex asymptotic_disk_eigenvalue(const Kernel& k, int l, int n) {
  if (n == 0)
    throw std::invalid_argument("asymptotic_disk_eigenvalue: index 0 has no branch");
  const double sn = (n > 0 ? 1.0 : -1.0) * disk_seed_frequency(l, std::abs(n));
  const Complex is{0.0, sn};
  return is - laplace_transform(k, is);
}

std::vector<Eigenvalue> find_disk_eigenvalues(const Kernel& k, int l, int n_min,
                                              int n_max, double tol) {
  if (l < 0)
    throw std::invalid_argument("find_disk_eigenvalues: order must be nonnegative");
  if (n_min > n_max)
    throw std::invalid_argument("find_disk_eigenvalues: empty index range");
  if (n_min <= 0 && n_max >= 0)
    throw std::invalid_argument("find_disk_eigenvalues: index range must exclude 0");
  const int count = n_max - n_min + 1;
  std::vector<Eigenvalue> out(count);
  parallel_for(count, [&](int i) { out[i] = locate_one(k, l, n_min + i, tol); });
  return out;
}

DiskRate disk_rate(const Kernel& k, int l, const Eigenvalue& ev) {
  const double sn =
      (ev.n > 0 ? 1.0 : -1.0) * disk_seed_frequency(l, std::abs(ev.n));
  const Complex is{0.0, sn};
  DiskRate r;
  r.xi_ratio = (is - ev.z) / laplace_transform(k, is);
  r.rate_product =
      -ev.z.real() * std::pow(std::abs(ev.z.imag()), impedance_decay_exponent(k));
  return r;
}

}  // namespace viscowave
