#include "viscowave/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "viscowave/cluster_square.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/rates.hpp"
#include "viscowave/resolvent1d.hpp"
#include "viscowave/simulate.hpp"
#include "viscowave/spectrum1d.hpp"
#include "viscowave/spectrum_disk.hpp"

namespace viscowave::acceptance {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

CriterionResult make_result(int index, std::string name) {
    CriterionResult res;
    res.index = index;
    res.name = std::move(name);
    return res;
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
    void note(const std::string& msg) {
        if (ok) detail = msg;
    }
};

// 1. Interval spectrum: one certified root per branch, residuals at 1e-10,
//    and the high-branch damping ratio settling at 2.
CriterionResult criterion_1() {
    CriterionResult res = make_result(1, "interval spectrum asymptotics for the power-tail family");
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    double worst_residual = 0.0, worst_ratio_err = 0.0;
    for (const double beta : {0.3, 0.5, 0.7, 0.9}) {
        const Kernel k = Kernel::standard(beta, 1.0);
        const auto evs = find_eigenvalues(k, 20, 300, 1e-10);
        c.require(evs.size() == 281, fmt("beta=%.1f: expected 281 roots, got %zu", beta, evs.size()));
        for (const auto& ev : evs) {
            worst_residual = std::max(worst_residual, ev.residual);
            c.require(ev.residual <= 1e-10,
                      fmt("beta=%.1f n=%d: residual %.2e", beta, ev.n, ev.residual));
            c.require(ev.z.real() < 0.0, fmt("beta=%.1f n=%d: not damped", beta, ev.n));
            if (ev.n >= 100) {
                const double r = damping_ratio(k, ev);
                worst_ratio_err = std::max(worst_ratio_err, std::abs(r - 2.0));
                c.require(std::abs(r - 2.0) <= 0.1,
                          fmt("beta=%.1f n=%d: damping ratio %.3f", beta, ev.n, r));
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 30.0, fmt("wall time %.1f s exceeds 30 s", secs));
    c.note(fmt("4x281 roots, max residual %.1e, max |ratio-2| %.3f", worst_residual,
               worst_ratio_err));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 2. Disk spectrum: approach rate to the undamped frequencies governed by
//    the impedance, with the asymptotic constant as a hard cap.
CriterionResult criterion_2() {
    CriterionResult res = make_result(2, "disk spectrum impedance ratio and bounded rate product");
    Check c;
    const Kernel k = Kernel::standard(0.7, 1.0);
    const auto evs = find_disk_eigenvalues(k, 0, 10, 80);
    c.require(evs.size() == 71, fmt("expected 71 roots, got %zu", evs.size()));
    double worst_off = 0.0, worst_product = 0.0;
    for (const auto& ev : evs) {
        c.require(ev.residual <= 1e-8, fmt("n=%d: residual %.2e", ev.n, ev.residual));
        const DiskRate r = disk_rate(k, 0, ev);
        worst_product = std::max(worst_product, r.rate_product);
        c.require(r.rate_product <= 1.4735,
                  fmt("n=%d: rate product %.5f above 1.4735", ev.n, r.rate_product));
        if (ev.n >= 30) {
            const double off = std::abs(r.xi_ratio - std::complex<double>(1.0, 0.0));
            worst_off = std::max(worst_off, off);
            c.require(off <= 0.1, fmt("n=%d: |xi ratio - 1| = %.3f", ev.n, off));
        }
    }
    c.note(fmt("71 roots, max rate product %.4f, max |xi-1| beyond n=30: %.3f", worst_product,
               worst_off));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 3. Resolvent: the two-sided proxy stays within a fixed band across three
//    decades, and grid refinement barely moves the norms.
CriterionResult criterion_3() {
    CriterionResult res = make_result(3, "resolvent norm growth matches the impedance band");
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    std::string bands;
    for (const double beta : {0.5, 0.8}) {
        const Kernel k = Kernel::standard(beta, 1.0);
        const TwoSidedReport rep = two_sided_check(k, 1000.0, 120, 256);
        c.require(rep.ratio <= 20.0, fmt("beta=%.1f: band ratio %.2f above 20", beta, rep.ratio));
        for (const double s : {10.0, 100.0, 500.0, 1000.0}) {
            const ResolventProbe probe = resolvent_norm(k, s, 256);
            c.require(probe.refinement_ratio >= 0.99 && probe.refinement_ratio <= 1.01,
                      fmt("beta=%.1f s=%.0f: refinement ratio %.4f", beta, s,
                          probe.refinement_ratio));
        }
        bands += fmt("%sbeta=%.1f: %.2f", bands.empty() ? "" : ", ", beta, rep.ratio);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 300.0, fmt("wall time %.1f s exceeds 300 s", secs));
    c.note(fmt("band ratios over [10, 1000]: %s; refinements within 1%%", bands.c_str()));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 4. Strict low-frequency product: requires max/min of s^2 norm_R over
//    s in {0.3, 0.1, 0.03} to stay within a factor 3.  The resolvent of the
//    memory-coupled system grows like 1/s through the near-constant mode,
//    so the once-rescaled product s norm_R is the flat one and the doubly
//    rescaled product falls linearly; the diagnostic prints both.
CriterionResult criterion_4() {
    CriterionResult res = make_result(4, "strict low-frequency resolvent product stays within factor 3");
    res.passed = true;
    for (const double beta : {0.5, 0.8}) {
        const LowFrequencyReport rep = low_frequency_check(Kernel::standard(beta, 1.0));
        res.passed = res.passed && rep.strict_ratio <= 3.0;
        std::string products;
        for (std::size_t i = 0; i < rep.s.size(); ++i)
            products += fmt("%ss=%.2f: s*R=%.3f s^2*R=%.4f", i ? "; " : "", rep.s[i],
                            rep.damped_product[i], rep.strict_product[i]);
        if (!res.detail.empty()) res.detail += " | ";
        res.detail += fmt("beta=%.1f: strict ratio %.2f (limit 3), once-rescaled ratio %.2f; %s",
                          beta, rep.strict_ratio, rep.damped_ratio, products.c_str());
    }
    return res;
}

// 5. Clusters: random unit clusters keep order-one boundary mass while the
//    deterministic comb grows like sqrt(s).
CriterionResult criterion_5() {
    CriterionResult res = make_result(5, "boundary mass bounds across frequency shells");
    Check c;
    const ClusterBoundsReport rep =
        verify_cluster_bounds(0.3, {100.0, 400.0, 1600.0, 6400.0}, 200, 7);
    c.require(rep.rows.size() == 4, "expected 4 shells");
    const double frozen_value[] = {6.006928, 11.093095, 20.647559, 40.372483};
    const int frozen_size[] = {8, 16, 31, 62};
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        c.require(row.cluster_size == frozen_size[i],
                  fmt("s=%.0f: comb size %d != %d", row.s, row.cluster_size, frozen_size[i]));
        c.require(std::abs(row.optimality_value - frozen_value[i]) < 5e-4,
                  fmt("s=%.0f: comb mass %.5f != %.5f", row.s, row.optimality_value,
                      frozen_value[i]));
        c.require(std::abs(row.pure_value - 8.0 / kPi) < 1e-12,
                  fmt("s=%.0f: single-mode mass %.6f", row.s, row.pure_value));
        c.require(row.c_lower > 0.2, fmt("s=%.0f: lower constant %.3f under 0.2", row.s, row.c_lower));
        c.require(row.upper_scaled < 1.0,
                  fmt("s=%.0f: scaled boundary mass %.3f reached 1", row.s, row.upper_scaled));
        c.require(row.max_count_ratio > 0.5 && row.max_count_ratio < 1.0,
                  fmt("s=%.0f: lattice count ratio %.3f", row.s, row.max_count_ratio));
    }
    c.require(rep.rows[3].random_max_scaled < rep.rows[0].random_max_scaled,
              "random scaled mass failed to shrink across shells");
    c.require(rep.optimality_slope >= 0.45 && rep.optimality_slope <= 0.55,
              fmt("comb growth slope %.4f outside [0.45, 0.55]", rep.optimality_slope));
    c.require(std::abs(rep.pure_slope) <= 0.05,
              fmt("single-mode slope %.2e outside [-0.05, 0.05]", rep.pure_slope));
    c.note(fmt("comb slope %.4f, single-mode slope %.1e, lower constants %.2f..%.2f",
               rep.optimality_slope, rep.pure_slope, rep.rows[0].c_lower, rep.rows[3].c_lower));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 6. Simulation: sampled energies never increase, and removing the damping
//    conserves energy over the same horizon.
CriterionResult criterion_6() {
    CriterionResult res = make_result(6, "discrete energy decay is monotone; undamped run conserves");
    Check c;

    // Damped run, checked step by step.
    {
        const Kernel k = Kernel::standard(0.7, 1.0);
        const MeasureQuadrature quad = discretize_measure(k, 30, 100.0);
        const int n = 512;
        const double h = 1.0 / n, dt = 0.9 * h;
        Eigen::VectorXd p0(n), v0 = Eigen::VectorXd::Zero(n + 1);
        for (int i = 0; i < n; ++i) p0[i] = std::exp(-100.0 * std::pow((i + 0.5) * h - 0.5, 2));
        SimState state = initialize(p0, v0, quad, dt);
        double prev = energy(state, quad).energy;
        double worst_growth = 0.0;
        const long steps = static_cast<long>(std::ceil(50.0 / dt));
        for (long s = 0; s < steps; ++s) {
            step(state, quad, dt);
            const double e = energy(state, quad).energy;
            if (prev > 0.0) worst_growth = std::max(worst_growth, (e - prev) / prev);
            c.require(e <= prev * (1.0 + 1e-8),
                      fmt("t=%.3f: energy grew by rel %.2e", state.t, (e - prev) / prev));
            prev = e;
        }
        c.note(fmt("%ld damped steps, max relative growth %.1e", steps, worst_growth));
    }

    // Undamped standing wave over one period at the reference grid.
    {
        const int n = 2048;
        const double h = 1.0 / n;
        const long steps = static_cast<long>(std::ceil(2.0 / (0.9 * h)));
        const double dt = 2.0 / static_cast<double>(steps);
        Eigen::VectorXd p0(n), v0 = Eigen::VectorXd::Zero(n + 1);
        for (int i = 0; i < n; ++i) p0[i] = std::cos(kPi * (i + 0.5) * h);
        const MeasureQuadrature quad; // empty: sound-hard walls
        SimState state = initialize(p0, v0, quad, dt);
        const double e0 = energy(state, quad).energy;
        for (long s = 0; s < steps; ++s) step(state, quad, dt);
        const double drift = std::abs(energy(state, quad).energy - e0) / e0;
        c.require(drift < 0.01, fmt("undamped drift %.2e above 1%%", drift));
        if (c.ok) c.detail += fmt("; one-period drift at n=2048: %.1e", drift);
    }

    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 7. Simulation: decay exponent for rough data under the power-tail kernel,
//    stable under grid doubling.
CriterionResult criterion_7() {
    CriterionResult res = make_result(7, "fractional decay exponent is grid-converged");
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    const Kernel k = Kernel::standard(0.8, 1.0);
    const DecayResult base = run_decay(k, 2048, 48, 1e4, 500.0, "powerlaw");
    const DecayResult fine_grid = run_decay(k, 4096, 48, 1e4, 500.0, "powerlaw");
    const DecayResult fine_quad = run_decay(k, 2048, 96, 1e4, 500.0, "powerlaw");
    c.require(base.exponent >= -3.0 && base.exponent <= -2.0,
              fmt("exponent %.3f outside [-3, -2]", base.exponent));
    c.require(std::abs(base.exponent - fine_grid.exponent) < 0.1,
              fmt("grid doubling moved the exponent by %.3f",
                  std::abs(base.exponent - fine_grid.exponent)));
    c.require(std::abs(base.exponent - fine_quad.exponent) < 0.1,
              fmt("quadrature doubling moved the exponent by %.3f",
                  std::abs(base.exponent - fine_quad.exponent)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 600.0, fmt("wall time %.1f s exceeds 600 s", secs));
    c.note(fmt("exponent %.3f (target -2.5; grid-doubled %.3f, quad-doubled %.3f), half-width %.3f",
               base.exponent, fine_grid.exponent, fine_quad.exponent, base.half_width));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 8. Simulation against the predicted envelope for the singular kernel: the
//    constant fitted on the first half of the window keeps dominating on
//    the second half.
CriterionResult criterion_8() {
    CriterionResult res = make_result(8, "singular-kernel decay stays under the predicted envelope");
    Check c;
    const Kernel k = Kernel::prime(2.0, 0.8);
    // Gaussian pulse with the boundary memory loaded near the threshold of
    // the tau^-2-weighted norm; run long enough for the asymptotic window.
    const double horizon = 2000.0;
    const DecayResult sim = run_decay(k, 1024, 48, 1e4, horizon, "memory");
    const double wpsi0 = sim.records.front().weighted_psi;
    c.require(std::isfinite(wpsi0) && wpsi0 > 0.0, "weighted memory norm not positive and finite");
    c.require(sim.exponent >= -2.5 && sim.exponent <= -1.5,
              fmt("exponent %.3f outside [-2.5, -1.5]", sim.exponent));

    const EnergyEnvelope env = predict_energy_envelope(k, Scenario::ZeroAndInfinity);
    const double t_lo = horizon / 10.0;
    const double t_split = std::sqrt(t_lo * horizon);
    double c_fit = 0.0;
    for (const auto& rec : sim.records)
        if (rec.t >= t_lo && rec.t <= t_split) c_fit = std::max(c_fit, rec.energy / env.bound(rec.t));
    c.require(c_fit > 0.0, "no samples in the calibration half");
    double worst = 0.0;
    for (const auto& rec : sim.records)
        if (rec.t > t_split) worst = std::max(worst, rec.energy / (c_fit * env.bound(rec.t)));
    c.require(worst <= 1.25, fmt("second-half excess %.3f above 1.25", worst));
    c.note(fmt("exponent %.3f (sharp rate -2), weighted memory norm %.3e, second-half excess %.3f",
               sim.exponent, wpsi0, worst));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 9. Stationary solver against the independent finite-difference scheme on
//    random forcings: the gap closes at second order.
CriterionResult criterion_9() {
    CriterionResult res = make_result(9, "stationary formula and difference scheme converge together");
    Check c;
    std::mt19937_64 gen(20260815u);
    auto uniform = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const Kernel k = Kernel::standard(0.6, 1.0);
    double worst_order = 10.0;
    for (int trial = 0; trial < 5; ++trial) {
        const double s = 5.0 * std::exp(std::log(150.0 / 5.0) * uniform());
        double amp_c[10], amp_s[10];
        for (int m = 0; m < 10; ++m) {
            amp_c[m] = 2.0 * uniform() - 1.0;
            amp_s[m] = 2.0 * uniform() - 1.0;
        }
        std::vector<double> log_h, log_e;
        for (const int n : {512, 1024, 2048, 4096}) {
            VectorXcd f(n + 1);
            for (int j = 0; j <= n; ++j) {
                const double x = static_cast<double>(j) / n;
                double v = 0.0;
                for (int m = 0; m < 10; ++m)
                    v += amp_c[m] * std::cos((m + 1) * kPi * x) + amp_s[m] * std::sin((m + 1) * kPi * x);
                f[j] = v;
            }
            const VectorXcd a = solve_stationary(k, s, f);
            const VectorXcd b = fd_stationary_reference(k, s, f);
            double err = 0.0, ref = 0.0;
            for (int j = 0; j <= n; ++j) {
                err += std::norm(a[j] - b[j]);
                ref += std::norm(a[j]);
            }
            log_h.push_back(std::log(1.0 / n));
            log_e.push_back(0.5 * std::log(err / ref));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < log_h.size(); ++i) {
            sx += log_h[i];
            sy += log_e[i];
            sxx += log_h[i] * log_h[i];
            sxy += log_h[i] * log_e[i];
        }
        const double n_pts = static_cast<double>(log_h.size());
        const double order = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
        worst_order = std::min(worst_order, order);
        c.require(order >= 1.8, fmt("trial %d (s=%.2f): order %.2f below 1.8", trial, s, order));
    }
    c.note(fmt("5 random forcings, worst order %.2f", worst_order));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

// 10. Rate inversion round trips across the kernel family.
CriterionResult criterion_10() {
    CriterionResult res = make_result(10, "rate functions invert to 1e-8 across the family");
    Check c;
    Eigen::VectorXd nodes(3), weights(3);
    nodes << 0.5, 2.0, 9.0;
    weights << 0.4, 0.3, 0.2;
    const Kernel kernels[] = {Kernel::standard(0.5, 1.0), Kernel::standard(0.8, 1.0),
                              Kernel::exponential(1.0), Kernel::prime(2.0, 0.7),
                              Kernel::measure(nodes, weights)};
    double worst = 0.0;
    for (const Kernel& k : kernels) {
        const RateFunction m = m_from_kernel(k);
        const RateFunction ml = mlog(m);
        for (const RateFunction* f : {&m, &ml}) {
            const double lo = f->eval(1.0) * 1.0001;
            const double hi = f->eval(1e7) * 0.9999;
            for (int i = 0; i < 100; ++i) {
                const double t = lo * std::exp(std::log(hi / lo) * i / 99.0);
                const double back = f->eval(invert(*f, t));
                const double rel = std::abs(back - t) / t;
                worst = std::max(worst, rel);
                c.require(rel <= 1e-8, fmt("round trip error %.2e at t=%.3e", rel, t));
            }
        }
    }
    c.note(fmt("10 rate functions x 100 targets across 5 kernels, worst relative error %.1e", worst));
    res.passed = c.ok;
    res.detail = c.detail;
    return res;
}

} // namespace

std::vector<int> all_indices() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

CriterionResult run_criterion(int index) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    switch (index) {
        case 1: res = criterion_1(); break;
        case 2: res = criterion_2(); break;
        case 3: res = criterion_3(); break;
        case 4: res = criterion_4(); break;
        case 5: res = criterion_5(); break;
        case 6: res = criterion_6(); break;
        case 7: res = criterion_7(); break;
        case 8: res = criterion_8(); break;
        case 9: res = criterion_9(); break;
        case 10: res = criterion_10(); break;
        default: throw std::invalid_argument("acceptance: criterion index must be 1..10");
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string format_line(const CriterionResult& res) {
    return std::string(res.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(res.index) +
           ": " + res.name + " [" + fmt("%.1f", res.seconds) + " s] " + res.detail;
}

CriterionResult run_criterion_guarded(int index) {
    try {
        return run_criterion(index);
    } catch (const std::exception& e) {
        CriterionResult res;
        res.index = index;
        res.name = "criterion raised";
        res.passed = false;
        res.detail = e.what();
        return res;
    }
}

int run_suite(const std::vector<int>& indices, std::ostream& out) {
    int failures = 0;
    for (const int idx : indices) {
        const CriterionResult res = run_criterion_guarded(idx);
        out << format_line(res) << "\n";
        out.flush();
        if (!res.passed) ++failures;
    }
    return failures;
}

} // namespace viscowave::acceptance
