#include "viscowave/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace viscowave {

namespace {

// Sampling cap for monotonicity checks and bracket growth on unbounded
// domains.  Rates here are polynomially bounded, so this is generous.
constexpr double kDomainCap = 1e60;

double finite_hi(const RateFunction& f) {
    return std::isfinite(f.domain_hi) ? f.domain_hi : std::min(kDomainCap, f.domain_lo * 1e8);
}

} // namespace

RateFunction make_rate(std::function<double(double)> eval, RateDirection direction,
                       double domain_lo, double domain_hi) {
    if (!(domain_lo > 0.0) || !(domain_hi > domain_lo))
        throw std::invalid_argument("rates: domain must satisfy 0 < lo < hi");
    RateFunction f{std::move(eval), direction, domain_lo, domain_hi};

    const double hi = finite_hi(f);
    const int samples = 120;
    double prev = f.eval(domain_lo);
    if (!std::isfinite(prev)) throw NonMonotone("rates: rate not finite at domain start");
    for (int i = 1; i < samples; ++i) {
        const double s =
            domain_lo * std::exp(std::log(hi / domain_lo) * i / (samples - 1));
        const double val = f.eval(s);
        if (!std::isfinite(val)) throw NonMonotone("rates: rate not finite on domain");
        const bool ok = direction == RateDirection::Increasing ? val > prev : val < prev;
        if (!ok) throw NonMonotone("rates: rate is not strictly monotone on its domain");
        prev = val;
    }
    return f;
}

RateFunction m_from_kernel(const Kernel& k) {
    auto eval = [k](double s) {
        const double re = laplace_transform(k, Complex(0.0, s)).real();
        if (!(re > 0.0)) throw DomainError("rates: impedance real part vanished");
        return 1.0 / re;
    };
    return make_rate(eval, RateDirection::Increasing, 1.0,
                     std::numeric_limits<double>::infinity());
}

RateFunction mlog(const RateFunction& f) {
    if (f.direction == RateDirection::Increasing) {
        auto base = f.eval;
        auto eval = [base](double s) {
            const double v = base(s);
            return v * (std::log1p(v) + std::log1p(s));
        };
        return make_rate(eval, RateDirection::Increasing, f.domain_lo, f.domain_hi);
    }
    // Low-frequency branch: the -log s factor is positive only below 1.
    const double hi = std::min(f.domain_hi, 1.0);
    if (!(f.domain_lo < hi))
        throw std::invalid_argument("rates: decreasing rate needs domain below 1");
    auto base = f.eval;
    auto eval = [base](double s) {
        const double v = base(s);
        return v * (std::log1p(v) - std::log(s));
    };
    return make_rate(eval, RateDirection::Decreasing, f.domain_lo, hi);
}

double invert(const RateFunction& f, double t) {
    if (!std::isfinite(t)) throw std::out_of_range("rates: target must be finite");
    const bool up = f.direction == RateDirection::Increasing;

    double lo = f.domain_lo;
    const double f_lo = f.eval(lo);
    if (up ? t < f_lo : t > f_lo) throw std::out_of_range("rates: target below the rate's range");
    if (t == f_lo) return lo;

    double hi;
    if (std::isfinite(f.domain_hi)) {
        hi = f.domain_hi;
        const double f_hi = f.eval(hi);
        if (up ? t > f_hi : t < f_hi) throw std::out_of_range("rates: target above the rate's range");
    } else {
        hi = 2.0 * lo;
        while (up ? f.eval(hi) < t : f.eval(hi) > t) {
            lo = hi;
            hi *= 2.0;
            if (hi > kDomainCap) throw std::out_of_range("rates: target above the rate's range");
        }
    }

    for (int iter = 0; iter < 200 && (hi - lo) > 1e-10 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double val = f.eval(mid);
        if (up ? val < t : val > t)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

EnergyEnvelope predict_energy_envelope(const Kernel& k, Scenario scenario) {
    const ZeroSpectrumClass cls = classify_zero_spectrum(k);
    if (scenario == Scenario::InfinityOnly && cls != ZeroSpectrumClass::Invertible)
        throw ScenarioMismatch("rates: kernel impedance degenerates at zero frequency");
    if (scenario == Scenario::ZeroAndInfinity && cls != ZeroSpectrumClass::SquareIntegrableSingularity)
        throw ScenarioMismatch("rates: kernel impedance is regular at zero frequency");

    const RateFunction m_hi = m_from_kernel(k);
    const RateFunction m_hi_log = mlog(m_hi);

    EnergyEnvelope env;
    env.scenario = scenario;

    if (scenario == Scenario::InfinityOnly) {
        env.t_min = std::max(m_hi.eval(m_hi.domain_lo), m_hi_log.eval(m_hi_log.domain_lo));
        env.bound = [m_hi_log](double t) {
            const double s = invert(m_hi_log, t);
            return 1.0 / (s * s);
        };
        env.bound_log_free = [m_hi](double t) {
            const double s = invert(m_hi, t);
            return 1.0 / (s * s);
        };
        return env;
    }

    const RateFunction m_lo =
        make_rate([](double s) { return 1.0 / s; }, RateDirection::Decreasing, 1e-9, 1.0);
    const RateFunction m_lo_log = mlog(m_lo);

    env.t_min = std::max({m_hi.eval(m_hi.domain_lo), m_hi_log.eval(m_hi_log.domain_lo),
                          m_lo.eval(m_lo.domain_hi), m_lo_log.eval(m_lo_log.domain_hi)});
    env.bound = [m_hi_log, m_lo_log](double t) {
        const double s_hi = invert(m_hi_log, t);
        const double s_lo = invert(m_lo_log, t);
        const double sum = 1.0 / s_hi + s_lo + 1.0 / t;
        return sum * sum;
    };
    env.bound_log_free = [m_hi, m_lo](double t) {
        const double s_hi = invert(m_hi, t);
        const double s_lo = invert(m_lo, t);
        const double sum = 1.0 / s_hi + s_lo + 1.0 / t;
        return sum * sum;
    };
    return env;
}

} // namespace viscowave
