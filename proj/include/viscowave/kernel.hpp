#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <variant>

namespace viscowave {

using Complex = std::complex<double>;

// k(t) = e^{-eps t} t^{beta-1}; transform Gamma(beta) (eps+z)^{-beta},
// analytic off the cut (-inf, -eps].
struct StandardKernel {
  double beta;
  double eps;
};

// Two-piece Bernstein density: tau^alpha on (0,1), (tau-1)^{-beta} on
// (1,inf). alpha > 1 keeps tau^{-1} square integrable near 0.
struct PrimeKernel {
  double alpha;
  double beta;
};

// Point mass at tau0: k(t) = e^{-tau0 t}, transform 1/(tau0+z).
struct ExponentialKernel {
  double tau0;
};

// Finite atomic measure sum w_j delta_{tau_j}.
struct MeasureKernel {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

class Kernel {
 public:
  using Form =
      std::variant<StandardKernel, PrimeKernel, ExponentialKernel, MeasureKernel>;

  static Kernel standard(double beta, double eps);
  static Kernel prime(double alpha, double beta);
  static Kernel exponential(double tau0);
  static Kernel measure(Eigen::VectorXd nodes, Eigen::VectorXd weights);

  const Form& form() const { return form_; }

 private:
  explicit Kernel(Form f) : form_(std::move(f)) {}
  Form form_;
};

// Transform and its z-derivative, principal branch; throws DomainError on
// the branch cut / at poles.
Complex laplace_transform(const Kernel& k, Complex z);
Complex laplace_derivative(const Kernel& k, Complex z);

struct ImpedanceParts {
  double re;
  double im;
  double abs;
};

// k-hat on the imaginary axis, z = is. StandardKernel uses the exact polar
// form (radius/angle), a genuinely different code path from the complex pow
// in laplace_transform.
ImpedanceParts impedance_parts(const Kernel& k, double s);

struct IntegrabilityReport {
  bool integrable;
  double value;  // integral of tau^{-1} dnu = k-hat(0) when finite
};
IntegrabilityReport check_integrability(const Kernel& k);

enum class ZeroSpectrumClass {
  Invertible,
  SquareIntegrableSingularity,
  NonSquareIntegrableSingularity,
};
ZeroSpectrumClass classify_zero_spectrum(const Kernel& k);

// Sampled trend of Q(s) = |k-hat|^3/(Re k-hat)^2 (is) * s^alpha (1+log s).
// The exact verdict (beta > alpha_dom) exists only for StandardKernel.
struct ConditionReport {
  Eigen::VectorXd s_samples;
  Eigen::VectorXd q_values;
  bool decreasing;
  std::optional<bool> exact_verdict;
};
ConditionReport condition_additional(const Kernel& k, double alpha_dom,
                                     const Eigen::VectorXd& s_samples);

struct MeasureQuadrature {
  Eigen::VectorXd nodes;    // strictly increasing, > 0
  Eigen::VectorXd weights;  // > 0
  double tail_bound = 0.0;  // tau^{-1} mass beyond tau_max, carried by the
                            // final moment-matched node
  double max_rel_error = 0.0;  // validation error of the discrete transform
                               // against laplace_transform on s in [0.1,100]
};

// Node/weight discretization of the Bernstein measure. Exact for
// ExponentialKernel and MeasureKernel; for the density kernels the achieved
// validation error is reported, never silently accepted.
MeasureQuadrature discretize_measure(const Kernel& k, int n_nodes,
                                     double tau_max);

}  // namespace viscowave
