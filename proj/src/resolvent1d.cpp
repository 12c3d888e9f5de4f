#include "viscowave/resolvent1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "viscowave/errors.hpp"
#include "viscowave/parallel.hpp"

namespace viscowave {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const Complex kI{0.0, 1.0};
constexpr double kMinFrequency = 1e-3;

Eigen::VectorXd trapezoid_weights(int n) {
  const double h = 1.0 / n;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n + 1, h);
  w(0) = 0.5 * h;
  w(n) = 0.5 * h;
  return w;
}

// Largest eigenvalue of T(-s)T(s) in the trapezoid inner product by Lanczos
// with full reorthogonalization; returns its square root.
double lanczos_operator_norm(const StationarySolver1D& forward,
                             const StationarySolver1D& backward) {
  const int n = forward.grid_n();
  const Eigen::VectorXd w = trapezoid_weights(n);
  const auto wdot = [&](const VectorXcd& a, const VectorXcd& b) {
    return (a.conjugate().cwiseProduct(b).cwiseProduct(w.cast<Complex>())).sum();
  };

  VectorXcd v(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double x = static_cast<double>(j) / n;
    v(j) = Complex(1.0 + 0.5 * std::sin(7.3 * x), 0.25 * std::cos(2.1 * x));
  }
  v /= std::sqrt(std::abs(wdot(v, v)));

  const int max_iters = 80;
  std::vector<VectorXcd> basis;
  std::vector<double> alpha, beta;
  basis.push_back(v);
  double lambda_prev = 0.0;
  double lambda = 0.0;
  for (int m = 0; m < max_iters; ++m) {
    VectorXcd u = backward(forward(basis[m]));
    const double a = wdot(basis[m], u).real();
    alpha.push_back(a);
    u -= a * basis[m];
    if (m > 0) u -= beta[m - 1] * basis[m - 1];
    for (const VectorXcd& q : basis) u -= wdot(q, u) * q;
    const double b = std::sqrt(std::abs(wdot(u, u).real()));

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int i = 0; i <= m; ++i) {
      tri(i, i) = alpha[i];
      if (i > 0) tri(i, i - 1) = tri(i - 1, i) = beta[i - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    lambda = es.eigenvalues().maxCoeff();
    if (m > 3 && std::abs(lambda - lambda_prev) <= 1e-9 * std::abs(lambda)) break;
    lambda_prev = lambda;

    if (b <= 1e-14 * std::abs(alpha[0])) break;  // invariant subspace reached
    beta.push_back(b);
    basis.push_back(u / b);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace

StationarySolver1D::StationarySolver1D(const Kernel& k, double s, int grid_n) {
  if (std::abs(s) < kMinFrequency)
    throw std::invalid_argument("StationarySolver1D: |s| below the minimum frequency");
  if (grid_n < 2)
    throw std::invalid_argument("StationarySolver1D: grid too coarse");
  if (std::abs(s) / grid_n > 0.5)
    throw std::invalid_argument(
        "StationarySolver1D: grid does not resolve the oscillation (s h > 0.5)");
  s_ = s;
  n_ = grid_n;
  h_ = 1.0 / grid_n;
  kappa_ = laplace_transform(k, Complex(0.0, s));
  const double sn = std::sin(s);
  const double cs = std::cos(s);
  denominator_ = s * ((1.0 + kappa_ * kappa_) * sn - 2.0 * kI * kappa_ * cs);
  phase_.resize(n_ + 1);
  p0_.resize(n_ + 1);
  for (int j = 0; j <= n_; ++j) {
    const double x = j * h_;
    phase_(j) = std::exp(kI * (s * x));
    p0_(j) = std::cos(s * x) + kI * kappa_ * std::sin(s * x);
  }
}

VectorXcd StationarySolver1D::operator()(const VectorXcd& f) const {
  if (f.size() != n_ + 1)
    throw std::invalid_argument("StationarySolver1D: forcing has the wrong grid size");
  if (std::abs(denominator_) < 1e-11)
    throw DegenerateDenominator(
        "StationarySolver1D: pole-cancelled denominator underflow at s = " +
        std::to_string(s_));

  // Prefix trapezoid sums of e^{-isy} f and e^{+isy} f.
  VectorXcd acc_minus(n_ + 1), acc_plus(n_ + 1);
  acc_minus(0) = acc_plus(0) = 0.0;
  for (int j = 1; j <= n_; ++j) {
    const Complex lo_m = std::conj(phase_(j - 1)) * f(j - 1);
    const Complex hi_m = std::conj(phase_(j)) * f(j);
    acc_minus(j) = acc_minus(j - 1) + 0.5 * h_ * (lo_m + hi_m);
    const Complex lo_p = phase_(j - 1) * f(j - 1);
    const Complex hi_p = phase_(j) * f(j);
    acc_plus(j) = acc_plus(j - 1) + 0.5 * h_ * (lo_p + hi_p);
  }

  VectorXcd pf(n_ + 1);
  for (int j = 0; j <= n_; ++j) {
    const Complex integral =
        (phase_(j) * acc_minus(j) - std::conj(phase_(j)) * acc_plus(j)) / (2.0 * kI);
    pf(j) = -integral / s_;
  }
  const Complex pf_prime_end =
      -0.5 * (phase_(n_) * acc_minus(n_) + std::conj(phase_(n_)) * acc_plus(n_));
  const Complex a = (pf_prime_end + kI * s_ * kappa_ * pf(n_)) / denominator_;
  return a * p0_ + pf;
}

VectorXcd solve_stationary(const Kernel& k, double s, const VectorXcd& f) {
  return StationarySolver1D(k, s, static_cast<int>(f.size()) - 1)(f);
}

VectorXcd fd_stationary_reference(const Kernel& k, double s, const VectorXcd& f) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 2) throw std::invalid_argument("fd_stationary_reference: grid too coarse");
  if (std::abs(s) < kMinFrequency)
    throw std::invalid_argument("fd_stationary_reference: |s| below the minimum frequency");
  const double h = 1.0 / n;
  const Complex kappa = laplace_transform(k, Complex(0.0, s));
  const Complex robin = 2.0 * kI * s * kappa / h;
  const double inv_h2 = 1.0 / (h * h);
  const Complex diag_interior = -s * s + 2.0 * inv_h2;

  // Ghost-node rows carry doubled off-diagonals; eliminate forward (Thomas).
  VectorXcd diag = VectorXcd::Constant(n + 1, diag_interior);
  diag(0) += robin;
  diag(n) += robin;
  VectorXcd upper = VectorXcd::Constant(n, -inv_h2);
  VectorXcd lower = VectorXcd::Constant(n, -inv_h2);
  upper(0) = -2.0 * inv_h2;
  lower(n - 1) = -2.0 * inv_h2;

  VectorXcd cp(n), dp(n + 1);
  cp(0) = upper(0) / diag(0);
  dp(0) = f(0) / diag(0);
  for (int i = 1; i <= n; ++i) {
    const Complex denom = diag(i) - lower(i - 1) * cp(i - 1);
    if (i < n) cp(i) = upper(i) / denom;
    dp(i) = (f(i) - lower(i - 1) * dp(i - 1)) / denom;
  }
  VectorXcd p(n + 1);
  p(n) = dp(n);
  for (int i = n - 1; i >= 0; --i) p(i) = dp(i) - cp(i) * p(i + 1);
  return p;
}

double resolvent_norm_single(const Kernel& k, double s, int grid_n) {
  const StationarySolver1D forward(k, s, grid_n);
  const StationarySolver1D backward(k, -s, grid_n);
  return lanczos_operator_norm(forward, backward);
}

ResolventProbe resolvent_norm(const Kernel& k, double s, int grid_n) {
  if (grid_n < 64) throw std::invalid_argument("resolvent_norm: grid_n must be >= 64");
  const int n_eff = std::max(grid_n, static_cast<int>(std::ceil(4.0 * std::abs(s))));
  const double coarse = resolvent_norm_single(k, s, n_eff);
  const double fine = resolvent_norm_single(k, s, 2 * n_eff);
  ResolventProbe probe;
  probe.s = s;
  probe.norm_R = fine;
  probe.grid_n = n_eff;
  probe.refinement_ratio = fine / coarse;
  if (probe.refinement_ratio < 0.9 || probe.refinement_ratio > 1.1)
    throw ConvergenceFailure("resolvent_norm: grid refinement moved the estimate by " +
                             std::to_string(probe.refinement_ratio) + " at s = " +
                             std::to_string(s));
  return probe;
}

double resolvent_norm_dense(const Kernel& k, double s, int grid_n) {
  const StationarySolver1D solver(k, s, grid_n);
  const int m = grid_n + 1;
  Eigen::MatrixXcd t(m, m);
  VectorXcd e = VectorXcd::Zero(m);
  for (int j = 0; j < m; ++j) {
    e(j) = 1.0;
    t.col(j) = solver(e);
    e(j) = 0.0;
  }
  const Eigen::VectorXd w = trapezoid_weights(grid_n);
  const Eigen::VectorXd half = w.cwiseSqrt();
  Eigen::MatrixXcd scaled = half.cast<Complex>().asDiagonal() * t *
                            half.cwiseInverse().cast<Complex>().asDiagonal();
  return scaled.jacobiSvd().singularValues()(0);
}

TwoSidedReport two_sided_check(const Kernel& k, double s_max, int n_log, int grid_n) {
  if (s_max < 10.0)
    throw std::invalid_argument("two_sided_check: s_max must be at least 10");
  std::vector<double> sigma;
  for (int i = 0; i < n_log; ++i)
    sigma.push_back(std::pow(s_max, static_cast<double>(i) / (n_log - 1)));
  for (int n = 1; n * kPi <= s_max; ++n) sigma.push_back(n * kPi);
  std::sort(sigma.begin(), sigma.end());

  std::vector<double> proxy(sigma.size());
  parallel_for(static_cast<int>(sigma.size()), [&](int i) {
    proxy[i] = sigma[i] * resolvent_norm(k, sigma[i], grid_n).norm_R;
  });

  TwoSidedReport report;
  double sup = 0.0;
  for (size_t i = 0; i < sigma.size(); ++i) {
    sup = std::max(sup, proxy[i]);
    if (sigma[i] < 10.0) continue;
    report.s.push_back(sigma[i]);
    report.b.push_back(impedance_parts(k, sigma[i]).re * sup);
  }
  report.b_min = *std::min_element(report.b.begin(), report.b.end());
  report.b_max = *std::max_element(report.b.begin(), report.b.end());
  report.ratio = report.b_max / report.b_min;
  return report;
}

LowFrequencyReport low_frequency_check(const Kernel& k,
                                       const std::vector<double>& s_samples) {
  if (classify_zero_spectrum(k) != ZeroSpectrumClass::Invertible)
    throw std::invalid_argument(
        "low_frequency_check: kernel must be invertible at zero frequency");
  if (s_samples.empty())
    throw std::invalid_argument("low_frequency_check: no samples given");
  LowFrequencyReport report;
  for (double s : s_samples) {
    const ResolventProbe probe = resolvent_norm(k, s, 256);
    report.s.push_back(s);
    report.damped_product.push_back(s * probe.norm_R);
    report.strict_product.push_back(s * s * probe.norm_R);
  }
  const auto ratio = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) /
           *std::min_element(v.begin(), v.end());
  };
  report.damped_ratio = ratio(report.damped_product);
  report.strict_ratio = ratio(report.strict_product);
  return report;
}

}  // namespace viscowave
