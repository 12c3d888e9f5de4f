#include "viscowave/spectrum1d.hpp"

#include <cmath>
#include <string>

#include "viscowave/errors.hpp"
#include "viscowave/parallel.hpp"

namespace viscowave {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const Complex kI{0.0, 1.0};

bool off_branch(Complex z, int n) { return std::abs(z.imag() - kPi * n) > 0.5 * kPi; }

// Newton on G; returns true once |G| <= tol (polished further while it
// keeps improving, so accepted residuals sit well below tol).
bool newton(const Kernel& k, Complex& z, double tol, int max_iters, int& iters,
            double& resid) {
  double best = std::abs(characteristic_g(k, z));
  for (iters = 0; iters < max_iters; ++iters) {
    const Complex g = characteristic_g(k, z);
    resid = std::abs(g);
    if (resid <= 1e-2 * tol) return true;
    const Complex gp = characteristic_g_prime(k, z);
    if (std::abs(gp) == 0.0) break;
    const Complex step = g / gp;
    z -= step;
    if (std::abs(step) < 1e-16 * std::abs(z)) {
      resid = std::abs(characteristic_g(k, z));
      break;
    }
    best = std::min(best, resid);
  }
  resid = std::abs(characteristic_g(k, z));
  return resid <= tol;
}

Eigenvalue locate_one(const Kernel& k, int n, double tol) {
  const Complex seed = asymptotic_eigenvalue(k, n);
  Complex z = seed;
  int iters = 0;
  double resid = 0.0;
  bool ok = newton(k, z, tol, 60, iters, resid) && !off_branch(z, n);
  if (!ok) {
    // Fallback: iterate the exact branch relation z = i pi n - log((1+k)/(1-k)),
    // a contraction whenever |k-hat| stays below 1 along the chain.
    z = seed;
    for (int j = 0; j < 40; ++j) {
      const Complex kap = laplace_transform(k, z);
      z = Complex(0.0, kPi * n) - std::log((1.0 + kap) / (1.0 - kap));
    }
    int extra = 0;
    ok = newton(k, z, tol, 60, extra, resid) && !off_branch(z, n);
    iters += extra;
  }
  if (!ok)
    throw ConvergenceFailure("find_eigenvalues: no root at branch index " +
                             std::to_string(n));
  if (z.real() >= 0.0)
    throw ConvergenceFailure("find_eigenvalues: root escaped the left half-plane at index " +
                             std::to_string(n));

  // Certify: exactly one zero in the branch window, retrying with a
  // perturbed rectangle when the contour runs too close to a zero.
  const double center = kPi * n;
  double eta = 0.5 * std::abs(z.real());
  double big = std::max(4.0, 4.0 * std::abs(z.real()));
  int count = -1;
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      const Window w(-big, -eta, center - 0.5 * kPi, center + 0.5 * kPi);
      count = count_zeros(k, w);
      break;
    } catch (const BoundaryTooClose&) {
      eta *= 0.7;
      big *= 1.13;
      if (attempt == 3) throw;
    }
  }
  if (count != 1)
    throw CertificationMismatch("find_eigenvalues: window count " +
                                std::to_string(count) + " at branch index " +
                                std::to_string(n));
  return {z, n, resid, seed, iters};
}

}  // namespace

Complex characteristic_g(const Kernel& k, Complex z) {
  const Complex kap = laplace_transform(k, z);
  return (kap * kap + 1.0) * std::sin(kI * z) + 2.0 * kI * kap * std::cos(kI * z);
}

Complex characteristic_g_prime(const Kernel& k, Complex z) {
  const Complex kap = laplace_transform(k, z);
  const Complex kapp = laplace_derivative(k, z);
  const Complex s = std::sin(kI * z);
  const Complex c = std::cos(kI * z);
  return 2.0 * kap * kapp * s + kI * (kap * kap + 1.0) * c + 2.0 * kI * kapp * c +
         2.0 * kap * s;
}

int count_zeros(const Kernel& k, const Window& w, int quad_points) {
  if (w.re_hi >= 0.0)
    throw std::invalid_argument("count_zeros: window must avoid the imaginary axis");
  if (w.im_lo <= 0.0 && w.im_hi >= 0.0)
    throw std::invalid_argument("count_zeros: window must avoid the real axis");
  return winding_number([&](Complex z) { return characteristic_g(k, z); }, w,
                        quad_points);
}

Complex asymptotic_eigenvalue(const Kernel& k, int n) {
  if (n == 0) throw std::invalid_argument("asymptotic_eigenvalue: index 0 has no branch");
  const Complex at = laplace_transform(k, Complex(0.0, kPi * n));
  return Complex(0.0, kPi * n) - 2.0 * at;
}

std::vector<Eigenvalue> find_eigenvalues(const Kernel& k, int n_min, int n_max,
                                         double tol) {
  if (n_min > n_max) throw std::invalid_argument("find_eigenvalues: empty index range");
  if (n_min <= 0 && n_max >= 0)
    throw std::invalid_argument("find_eigenvalues: index range must exclude 0");
  const int count = n_max - n_min + 1;
  std::vector<Eigenvalue> out(count);
  parallel_for(count, [&](int i) { out[i] = locate_one(k, n_min + i, tol); });
  return out;
}

double damping_ratio(const Kernel& k, const Eigenvalue& ev) {
  return -ev.z.real() / impedance_parts(k, ev.z.imag()).re;
}

}  // namespace viscowave
