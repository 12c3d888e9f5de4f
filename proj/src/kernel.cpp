#include "viscowave/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "viscowave/errors.hpp"
#include "viscowave/quadrature.hpp"

namespace viscowave {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Piece integrals of the prime kernel: I_m(z) = integral over the density
// of (z+tau)^{-m}, m = 1 (transform) or 2 (derivative magnitude).
Complex prime_piece1(double alpha, Complex z, int m, double tol) {
  auto f = [&](double tau) -> Complex {
    const Complex d = z + tau;
    const Complex g = std::pow(tau, alpha) / d;
    return m == 1 ? g : g / d;
  };
  return integrate(f, 0.0, 1.0, tol).value;
}

// Substitution u = (tau-1)^{1-beta} removes the endpoint singularity; the
// remaining tail beyond tau = T is summed analytically as a geometric-type
// series in (1+z)/(T-1), ratio <= 1/4 by the choice of T.
Complex prime_piece2(double beta, Complex z, int m, double tol) {
  const Complex a = 1.0 + z;
  const double tm1 = std::max(8.0, 4.0 * std::abs(a));
  const double cap = std::pow(tm1, 1.0 - beta);
  const double q = 1.0 / (1.0 - beta);
  auto f = [&](double u) -> Complex {
    const Complex d = a + std::pow(u, q);
    return m == 1 ? q / d : q / (d * d);
  };
  Complex val = integrate(f, 0.0, cap, tol).value;
  Complex apow{1.0, 0.0};
  for (int j = 0; j < 200; ++j) {
    Complex term = apow * std::pow(tm1, -beta - m + 1 - j);
    term *= (m == 1 ? 1.0 : double(j + 1)) / (beta + m - 1 + j);
    val += term;
    if (std::abs(term) < 1e-18 * std::abs(val)) break;
    apow *= -a;
  }
  return val;
}

double prime_tol(double beta, Complex z) {
  const double scale = kPi / std::sin(kPi * beta) *
                       std::pow(std::abs(1.0 + z), -beta);
  return 3e-12 * scale;
}

void check_cut(const Kernel::Form& form, Complex z) {
  if (z.imag() != 0.0) return;
  const double x = z.real();
  if (const auto* st = std::get_if<StandardKernel>(&form)) {
    if (x <= -st->eps) throw DomainError("laplace_transform: z on cut (-inf,-eps]");
  } else if (std::holds_alternative<PrimeKernel>(form)) {
    if (x <= 0.0) throw DomainError("laplace_transform: z on cut (-inf,0]");
  } else if (const auto* ex = std::get_if<ExponentialKernel>(&form)) {
    if (x == -ex->tau0) throw DomainError("laplace_transform: z at pole -tau0");
  } else if (const auto* ms = std::get_if<MeasureKernel>(&form)) {
    for (int j = 0; j < ms->nodes.size(); ++j)
      if (x == -ms->nodes[j]) throw DomainError("laplace_transform: z at measure pole");
  }
}

// Integral over u >= u_max of u^{-beta} (ofs+u)^{-m} du, expanded in ofs/u.
double tail_moment(double beta, double ofs, double u_max, int m) {
  double sum = 0.0;
  double coef = 1.0;  // binom(m+j-1, j)
  double opow = 1.0;  // ofs^j
  for (int j = 0; j < 200; ++j) {
    const double term =
        coef * opow * std::pow(u_max, 1.0 - beta - m - j) / (beta + m + j - 1.0);
    sum += (j % 2 == 0 ? term : -term);
    if (term < 1e-18 * std::abs(sum)) break;
    coef *= double(m + j) / double(j + 1);
    opow *= ofs;
  }
  return sum;
}

// Two-point Gauss rule for integral over (a,b) of u^p f(u) du, from the
// power moments of the density taken about the cell midpoint.
void push_gauss2(double a, double b, double p, std::vector<double>& un,
                 std::vector<double>& uw) {
  auto mk = [&](int k) {
    return (std::pow(b, k + p + 1.0) - std::pow(a, k + p + 1.0)) / (k + p + 1.0);
  };
  const double c = 0.5 * (a + b);
  const double m0 = mk(0);
  const double m1 = mk(1) - c * m0;
  const double m2 = mk(2) - 2.0 * c * mk(1) + c * c * m0;
  const double m3 = mk(3) - 3.0 * c * mk(2) + 3.0 * c * c * mk(1) - c * c * c * m0;
  const double den = m0 * m2 - m1 * m1;
  const double sig = (m3 * m0 - m1 * m2) / den;
  const double prd = (m1 * m3 - m2 * m2) / den;
  const double disc = std::sqrt(std::max(0.0, sig * sig - 4.0 * prd));
  const double xm = 0.5 * (sig - disc);
  const double xp = 0.5 * (sig + disc);
  const double wp = (m1 - xm * m0) / (xp - xm);
  un.push_back(c + xm);
  uw.push_back(m0 - wp);
  un.push_back(c + xp);
  uw.push_back(wp);
}

// Head cell (0, b]: one node at the density centroid, exact for the mass
// and first moment of u^p du.
void push_head(double b, double p, std::vector<double>& un,
               std::vector<double>& uw) {
  un.push_back(b * (p + 1.0) / (p + 2.0));
  uw.push_back(std::pow(b, p + 1.0) / (p + 1.0));
}

// Cells of u^p du on [u0, u1], geometrically graded, two Gauss nodes each.
void push_graded(double u0, double u1, double p, int cells,
                 std::vector<double>& un, std::vector<double>& uw) {
  const double rho = std::pow(u1 / u0, 1.0 / cells);
  double a = u0;
  for (int j = 0; j < cells; ++j) {
    const double b = (j + 1 == cells) ? u1 : a * rho;
    push_gauss2(a, b, p, un, uw);
    a = b;
  }
}

}  // namespace

Kernel Kernel::standard(double beta, double eps) {
  require(beta > 0.0 && beta < 1.0, "standard kernel: beta must lie in (0,1)");
  require(eps > 0.0, "standard kernel: eps must be positive");
  return Kernel(StandardKernel{beta, eps});
}

Kernel Kernel::prime(double alpha, double beta) {
  require(alpha > 1.0, "prime kernel: alpha must exceed 1");
  require(beta > 0.0 && beta < 1.0, "prime kernel: beta must lie in (0,1)");
  return Kernel(PrimeKernel{alpha, beta});
}

Kernel Kernel::exponential(double tau0) {
  require(tau0 > 0.0, "exponential kernel: tau0 must be positive");
  return Kernel(ExponentialKernel{tau0});
}

Kernel Kernel::measure(Eigen::VectorXd nodes, Eigen::VectorXd weights) {
  require(nodes.size() >= 1 && nodes.size() == weights.size(),
          "measure kernel: nodes/weights must be nonempty and equal length");
  for (int j = 0; j < nodes.size(); ++j) {
    require(nodes[j] > 0.0, "measure kernel: nodes must be positive");
    require(weights[j] > 0.0, "measure kernel: weights must be positive");
    if (j > 0) require(nodes[j] > nodes[j - 1], "measure kernel: nodes must increase");
  }
  return Kernel(MeasureKernel{std::move(nodes), std::move(weights)});
}

Complex laplace_transform(const Kernel& k, Complex z) {
  check_cut(k.form(), z);
  return std::visit(
      [&](const auto& f) -> Complex {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StandardKernel>) {
          return std::tgamma(f.beta) * std::pow(f.eps + z, -f.beta);
        } else if constexpr (std::is_same_v<T, PrimeKernel>) {
          const double tol = prime_tol(f.beta, z);
          return prime_piece1(f.alpha, z, 1, tol) + prime_piece2(f.beta, z, 1, tol);
        } else if constexpr (std::is_same_v<T, ExponentialKernel>) {
          return 1.0 / (f.tau0 + z);
        } else {
          Complex sum{0.0, 0.0};
          for (int j = 0; j < f.nodes.size(); ++j) sum += f.weights[j] / (z + f.nodes[j]);
          return sum;
        }
      },
      k.form());
}

Complex laplace_derivative(const Kernel& k, Complex z) {
  check_cut(k.form(), z);
  return std::visit(
      [&](const auto& f) -> Complex {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StandardKernel>) {
          return -f.beta * std::tgamma(f.beta) * std::pow(f.eps + z, -f.beta - 1.0);
        } else if constexpr (std::is_same_v<T, PrimeKernel>) {
          const double tol = prime_tol(f.beta, z);
          return -(prime_piece1(f.alpha, z, 2, tol) + prime_piece2(f.beta, z, 2, tol));
        } else if constexpr (std::is_same_v<T, ExponentialKernel>) {
          const Complex d = f.tau0 + z;
          return -1.0 / (d * d);
        } else {
          Complex sum{0.0, 0.0};
          for (int j = 0; j < f.nodes.size(); ++j) {
            const Complex d = z + f.nodes[j];
            sum -= f.weights[j] / (d * d);
          }
          return sum;
        }
      },
      k.form());
}

ImpedanceParts impedance_parts(const Kernel& k, double s) {
  if (const auto* st = std::get_if<StandardKernel>(&k.form())) {
    // Exact polar form: radius Gamma(beta) (eps^2+s^2)^{-beta/2}, angle
    // beta*arg(eps - is).
    const double r = std::tgamma(st->beta) *
                     std::pow(st->eps * st->eps + s * s, -0.5 * st->beta);
    const double phi = std::atan2(-s, st->eps);
    return {r * std::cos(st->beta * phi), r * std::sin(st->beta * phi), r};
  }
  if (const auto* ex = std::get_if<ExponentialKernel>(&k.form())) {
    const double d = ex->tau0 * ex->tau0 + s * s;
    return {ex->tau0 / d, -s / d, 1.0 / std::sqrt(d)};
  }
  const Complex v = laplace_transform(k, Complex(0.0, s));
  return {v.real(), v.imag(), std::abs(v)};
}

IntegrabilityReport check_integrability(const Kernel& k) {
  // No constructible kernel violates the integrability assumption, so the
  // flag is always true; the value is k-hat(0) in closed form.
  return std::visit(
      [&](const auto& f) -> IntegrabilityReport {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StandardKernel>) {
          return {true, std::tgamma(f.beta) * std::pow(f.eps, -f.beta)};
        } else if constexpr (std::is_same_v<T, PrimeKernel>) {
          return {true, 1.0 / f.alpha + kPi / std::sin(kPi * f.beta)};
        } else if constexpr (std::is_same_v<T, ExponentialKernel>) {
          return {true, 1.0 / f.tau0};
        } else {
          double sum = 0.0;
          for (int j = 0; j < f.nodes.size(); ++j) sum += f.weights[j] / f.nodes[j];
          return {true, sum};
        }
      },
      k.form());
}

ZeroSpectrumClass classify_zero_spectrum(const Kernel& k) {
  // Support bounded away from 0 => invertible generator. The prime density
  // tau^alpha reaches 0, but alpha > 1 keeps tau^{-1} in L^2 of the measure.
  if (std::holds_alternative<PrimeKernel>(k.form()))
    return ZeroSpectrumClass::SquareIntegrableSingularity;
  return ZeroSpectrumClass::Invertible;
}

ConditionReport condition_additional(const Kernel& k, double alpha_dom,
                                     const Eigen::VectorXd& s_samples) {
  require(alpha_dom >= 0.0 && alpha_dom < 1.0,
          "condition_additional: alpha_dom must lie in [0,1)");
  for (int i = 1; i < s_samples.size(); ++i)
    require(s_samples[i] > s_samples[i - 1], "condition_additional: samples must increase");
  ConditionReport rep;
  rep.s_samples = s_samples;
  rep.q_values.resize(s_samples.size());
  for (int i = 0; i < s_samples.size(); ++i) {
    const double s = s_samples[i];
    const ImpedanceParts ip = impedance_parts(k, s);
    const double q = ip.abs * ip.abs * ip.abs / (ip.re * ip.re);
    rep.q_values[i] = q * std::pow(s, alpha_dom) * (1.0 + std::log(s));
  }
  rep.decreasing = true;
  for (int i = 1; i < rep.q_values.size(); ++i)
    if (rep.q_values[i] >= rep.q_values[i - 1]) rep.decreasing = false;
  if (const auto* st = std::get_if<StandardKernel>(&k.form()))
    rep.exact_verdict = st->beta > alpha_dom;
  return rep;
}

MeasureQuadrature discretize_measure(const Kernel& k, int n_nodes, double tau_max) {
  require(n_nodes >= 1, "discretize_measure: n_nodes must be >= 1");

  MeasureQuadrature out;
  if (const auto* ex = std::get_if<ExponentialKernel>(&k.form())) {
    out.nodes = Eigen::VectorXd::Constant(1, ex->tau0);
    out.weights = Eigen::VectorXd::Constant(1, 1.0);
    return out;
  }
  if (const auto* ms = std::get_if<MeasureKernel>(&k.form())) {
    out.nodes = ms->nodes;
    out.weights = ms->weights;
    return out;
  }

  std::vector<double> tn, tw;
  if (const auto* st = std::get_if<StandardKernel>(&k.form())) {
    // Density (tau-eps)^{-beta}/Gamma(1-beta) on [eps, inf); work in
    // u = tau - eps.
    require(tau_max > 2.0 * st->eps, "discretize_measure: tau_max too small");
    const double u_max = tau_max - st->eps;
    const double u0 = std::min(0.1 * st->eps, 0.01 * u_max);
    const int cells = std::max(3, (n_nodes - 2) / 2);
    std::vector<double> un, uw;
    push_head(u0, -st->beta, un, uw);
    push_graded(u0, u_max, -st->beta, cells, un, uw);
    const double norm = 1.0 / std::tgamma(1.0 - st->beta);
    for (size_t j = 0; j < un.size(); ++j) {
      tn.push_back(st->eps + un[j]);
      tw.push_back(norm * uw[j]);
    }
    const double t1 = tail_moment(st->beta, st->eps, u_max, 1);
    const double t2 = tail_moment(st->beta, st->eps, u_max, 2);
    tn.push_back(t1 / t2);
    tw.push_back(norm * t1 * t1 / t2);
    out.tail_bound = norm * t1;
  } else {
    const auto& pr = std::get<PrimeKernel>(k.form());
    require(tau_max > 2.0, "discretize_measure: tau_max too small");
    // Piece 1: tau^alpha on (0,1). The head reaches down to tau ~ 1e-4 so
    // slow memory states are represented in time-domain runs.
    const int n1 = std::max(7, n_nodes / 3);
    const int cells1 = std::max(3, (n1 - 1) / 2);
    std::vector<double> un, uw;
    push_head(1e-4, pr.alpha, un, uw);
    push_graded(1e-4, 1.0, pr.alpha, cells1, un, uw);
    // Piece 2: (tau-1)^{-beta} on (1, inf), u = tau - 1.
    const double u_max = tau_max - 1.0;
    const int cells2 = std::max(3, (n_nodes - int(un.size()) - 2) / 2);
    std::vector<double> vn, vw;
    push_head(0.1, -pr.beta, vn, vw);
    push_graded(0.1, u_max, -pr.beta, cells2, vn, vw);
    for (size_t j = 0; j < un.size(); ++j) {
      tn.push_back(un[j]);
      tw.push_back(uw[j]);
    }
    for (size_t j = 0; j < vn.size(); ++j) {
      tn.push_back(1.0 + vn[j]);
      tw.push_back(vw[j]);
    }
    const double t1 = tail_moment(pr.beta, 1.0, u_max, 1);
    const double t2 = tail_moment(pr.beta, 1.0, u_max, 2);
    tn.push_back(t1 / t2);
    tw.push_back(t1 * t1 / t2);
    out.tail_bound = t1;
  }

  out.nodes = Eigen::Map<Eigen::VectorXd>(tn.data(), tn.size());
  out.weights = Eigen::Map<Eigen::VectorXd>(tw.data(), tw.size());

  // Validate the discrete transform against the continuous one on the
  // imaginary axis; the achieved error is reported, never hidden.
  double worst = 0.0;
  for (int i = 0; i < 33; ++i) {
    const double s = 0.1 * std::pow(1000.0, i / 32.0);
    const Complex z{0.0, s};
    Complex disc{0.0, 0.0};
    for (int j = 0; j < out.nodes.size(); ++j)
      disc += out.weights[j] / (z + out.nodes[j]);
    const Complex exact = laplace_transform(k, z);
    worst = std::max(worst, std::abs(disc - exact) / std::abs(exact));
  }
  out.max_rel_error = worst;
  return out;
}

}  // namespace viscowave
