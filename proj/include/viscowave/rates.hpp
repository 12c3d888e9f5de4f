#pragma once

#include <functional>
#include <limits>

#include "viscowave/errors.hpp"
#include "viscowave/kernel.hpp"

namespace viscowave {

enum class RateDirection { Increasing, Decreasing };

// A strictly monotone rate on an interval, paired with enough metadata to
// invert it.  Monotonicity is spot-checked on a log grid at construction.
struct RateFunction {
    std::function<double(double)> eval;
    RateDirection direction = RateDirection::Increasing;
    double domain_lo = 1.0;
    double domain_hi = std::numeric_limits<double>::infinity();
};

// Validates monotonicity by sampling; throws NonMonotone on failure.
RateFunction make_rate(std::function<double(double)> eval, RateDirection direction,
                       double domain_lo, double domain_hi);

// High-frequency rate M(s) = 1 / Re k_hat(i s) on [1, inf).  Grows like
// s^beta / (Gamma(beta) cos(beta pi / 2)) for the fractional kernels and
// like s^2 when the impedance has a first moment.
RateFunction m_from_kernel(const Kernel& k);

// Log-corrected companion: for increasing f the result is
// f(s) (log(1+f(s)) + log(1+s)); for decreasing f (a rate toward s = 0) it
// is f(s) (log(1+f(s)) - log s), restricted to s <= 1 where it decreases.
RateFunction mlog(const RateFunction& f);

// Solves f(s) = t by bisection with geometric bracket growth, relative
// tolerance 1e-10.  Throws std::out_of_range when t is outside the range
// of f over its domain.
double invert(const RateFunction& f, double t);

enum class Scenario { InfinityOnly, ZeroAndInfinity };

// Energy decay envelope for unit graded-norm data.  `bound` carries the
// logarithmic corrections; `bound_log_free` inverts the bare rate and is
// sharp when the rate is a pure power.  Both decrease; bound >= bound_log_free.
struct EnergyEnvelope {
    std::function<double(double)> bound;
    std::function<double(double)> bound_log_free;
    Scenario scenario = Scenario::InfinityOnly;
    double t_min = 0.0; // both callables throw std::out_of_range below this
};

// InfinityOnly: bound(t) = invert(mlog(M), t)^-2, for kernels whose
// impedance stays away from zero (spectrum bounded away from the
// imaginary axis at low frequency).  ZeroAndInfinity: adds the low
// frequency branch, bound(t) = (1/s_hi + s_lo + 1/t)^2 with s_hi from the
// high-frequency rate and s_lo from the decreasing rate m(s) = 1/s.
// Throws ScenarioMismatch when the scenario contradicts the kernel's zero
// spectrum classification.
EnergyEnvelope predict_energy_envelope(const Kernel& k, Scenario scenario);

} // namespace viscowave
