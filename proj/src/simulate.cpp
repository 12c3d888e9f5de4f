#include "viscowave/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viscowave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCflFraction = 0.9;

void check_sizes(const SimState& state, const MeasureQuadrature& quad) {
    const auto n = state.p.size();
    if (n < 3) throw std::invalid_argument("simulate: need at least 3 cells");
    if (state.v.size() != n + 1) throw std::invalid_argument("simulate: v must have one more entry than p");
    if (state.psi_L.size() != quad.nodes.size() || state.psi_R.size() != quad.nodes.size())
        throw std::invalid_argument("simulate: memory size mismatch with quadrature");
}

// Boundary faces are enslaved to the memory: the outgoing trace equals the
// measure-weighted memory sum, with outward normals of opposite sign.
void close_boundary(SimState& state, const MeasureQuadrature& quad) {
    double left = 0.0, right = 0.0;
    for (Eigen::Index j = 0; j < quad.nodes.size(); ++j) {
        left += quad.weights[j] * state.psi_L[j];
        right += quad.weights[j] * state.psi_R[j];
    }
    state.v[0] = -left;
    state.v[state.v.size() - 1] = right;
}

Eigen::VectorXd half_step_pressure(const SimState& state) {
    const auto n = state.p.size();
    const double lambda = state.dt * static_cast<double>(n);
    return state.p - lambda * (state.v.segment(1, n) - state.v.segment(0, n));
}

Eigen::VectorXd profile_values(const std::string& profile, int grid_n) {
    const double h = 1.0 / grid_n;
    Eigen::VectorXd p0(grid_n);
    auto fill = [&](auto&& f) {
        for (int i = 0; i < grid_n; ++i) p0[i] = f((i + 0.5) * h);
    };

    const auto head = profile.substr(0, profile.find(':'));
    if (head == "gaussian") {
        if (profile != "gaussian") throw std::invalid_argument("simulate: gaussian takes no parameters");
        fill([](double x) { return std::exp(-100.0 * (x - 0.5) * (x - 0.5)); });
        return p0;
    }
    if (head == "standing") {
        const auto sep = profile.find(':');
        if (sep == std::string::npos)
            throw std::invalid_argument("simulate: standing requires a mode number, standing:m");
        int m = 0;
        try {
            std::size_t used = 0;
            m = std::stoi(profile.substr(sep + 1), &used);
            if (used != profile.size() - sep - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw std::invalid_argument("simulate: bad mode number in standing profile");
        }
        if (m < 1 || m > grid_n / 2)
            throw std::invalid_argument("simulate: standing mode must satisfy 1 <= m <= grid_n/2");
        fill([m](double x) { return std::cos(m * kPi * x); });
        return p0;
    }
    if (head == "powerlaw") {
        double q = 1.4;
        int nmax = std::min(1024, grid_n / 2);
        try {
            auto sep = profile.find(':');
            if (sep != std::string::npos) {
                const auto rest = profile.substr(sep + 1);
                const auto sep2 = rest.find(':');
                q = std::stod(rest.substr(0, sep2));
                if (sep2 != std::string::npos) nmax = std::stoi(rest.substr(sep2 + 1));
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("simulate: bad powerlaw parameters, want powerlaw[:q[:nmax]]");
        }
        if (!(q > 0.5) || nmax < 1 || nmax > grid_n / 2)
            throw std::invalid_argument("simulate: powerlaw needs q > 0.5 and 1 <= nmax <= grid_n/2");
        fill([q, nmax](double x) {
            double acc = 0.0;
            for (int n = 1; n <= nmax; ++n) acc += std::pow(n, -q) * std::cos(n * kPi * x);
            return acc;
        });
        return p0;
    }
    if (head == "memory") {
        fill([](double x) { return std::exp(-100.0 * (x - 0.5) * (x - 0.5)); });
        return p0;
    }
    throw std::invalid_argument("simulate: unknown profile '" + profile +
                                "', expected gaussian, standing:m, powerlaw[:q[:nmax]], or memory[:c]");
}

// Exponent of the memory load psi0(tau) = tau^c exp(-tau); must keep the
// tau^-2-weighted norm finite for every admissible Bernstein density.
double memory_exponent(const std::string& profile) {
    double c = -0.4;
    const auto sep = profile.find(':');
    if (sep != std::string::npos) {
        try {
            std::size_t used = 0;
            c = std::stod(profile.substr(sep + 1), &used);
            if (used != profile.size() - sep - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw std::invalid_argument("simulate: bad exponent in memory profile");
        }
    }
    if (!(c > -0.5) || !(c < 0.0))
        throw std::invalid_argument("simulate: memory exponent must lie in (-1/2, 0)");
    return c;
}

} // namespace

void step(SimState& state, const MeasureQuadrature& quad, double dt) {
    check_sizes(state, quad);
    const auto n = state.p.size();
    const double h = 1.0 / static_cast<double>(n);
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    if (dt > kCflFraction * h + 1e-15) throw CFLViolation("simulate: dt exceeds 0.9 h");
    state.dt = dt;

    const Eigen::VectorXd p_half = half_step_pressure(state);

    // Trapezoidal relaxation keeps the memory update unconditionally stable
    // and makes the discrete dissipation identity exact.
    for (Eigen::Index j = 0; j < quad.nodes.size(); ++j) {
        const double a = 0.5 * quad.nodes[j] * dt;
        state.psi_L[j] = ((1.0 - a) * state.psi_L[j] + dt * p_half[0]) / (1.0 + a);
        state.psi_R[j] = ((1.0 - a) * state.psi_R[j] + dt * p_half[n - 1]) / (1.0 + a);
    }
    close_boundary(state, quad);

    const double lambda = dt / h;
    for (Eigen::Index i = 1; i < n; ++i) state.v[i] -= lambda * (p_half[i] - p_half[i - 1]);

    state.p = p_half;
    state.t += dt;
}

SimState initialize(const Eigen::VectorXd& p0, const Eigen::VectorXd& v0,
                    const MeasureQuadrature& quad, double dt) {
    return initialize(p0, v0, Eigen::VectorXd::Zero(quad.nodes.size()), quad, dt);
}

SimState initialize(const Eigen::VectorXd& p0, const Eigen::VectorXd& v0,
                    const Eigen::VectorXd& psi0, const MeasureQuadrature& quad, double dt) {
    SimState state;
    state.p = p0;
    state.v = v0;
    state.psi_L = psi0;
    state.psi_R = psi0;
    state.t = 0.0;
    state.dt = dt;
    check_sizes(state, quad);
    const auto n = p0.size();
    const double h = 1.0 / static_cast<double>(n);
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    if (dt > kCflFraction * h + 1e-15) throw CFLViolation("simulate: dt exceeds 0.9 h");

    close_boundary(state, quad);
    // Pressure is stored half a step behind the faces.
    state.p += (0.5 * dt / h) * (state.v.segment(1, n) - state.v.segment(0, n));
    return state;
}

EnergyRecord energy(const SimState& state, const MeasureQuadrature& quad) {
    check_sizes(state, quad);
    if (!(state.dt > 0.0)) throw std::invalid_argument("simulate: state has no step size");
    const auto n = state.p.size();
    const double h = 1.0 / static_cast<double>(n);

    const Eigen::VectorXd p_half = half_step_pressure(state);

    EnergyRecord rec;
    rec.t = state.t;

    // Product form: exactly dissipated by the scheme, one memory term per
    // node and side, kinetic part over interior faces only.
    double e = h * state.p.dot(p_half);
    for (Eigen::Index i = 1; i < n; ++i) e += h * state.v[i] * state.v[i];
    for (Eigen::Index j = 0; j < quad.nodes.size(); ++j)
        e += quad.weights[j] *
             (state.psi_L[j] * state.psi_L[j] + state.psi_R[j] * state.psi_R[j]);
    rec.energy = e;

    // Graded norm, centered at the face time level.
    const Eigen::VectorXd p_bar = 0.5 * (state.p + p_half);
    double grad = 0.0;
    {
        // One-sided slopes at the walls from the three nearest cell centers.
        const double g0 = (-2.0 * p_bar[0] + 3.0 * p_bar[1] - p_bar[2]) / h;
        const double g1 = (2.0 * p_bar[n - 1] - 3.0 * p_bar[n - 2] + p_bar[n - 3]) / h;
        grad += 0.5 * h * (g0 * g0 + g1 * g1);
        for (Eigen::Index i = 1; i < n; ++i) {
            const double g = (p_bar[i] - p_bar[i - 1]) / h;
            grad += h * g * g;
        }
    }
    double div = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = (state.v[i + 1] - state.v[i]) / h;
        div += h * d * d;
    }
    double relax = 0.0, weighted = 0.0;
    for (Eigen::Index j = 0; j < quad.nodes.size(); ++j) {
        const double tau = quad.nodes[j];
        const double w = quad.weights[j];
        const double rl = tau * state.psi_L[j] - p_bar[0];
        const double rr = tau * state.psi_R[j] - p_bar[n - 1];
        relax += w * (rl * rl + rr * rr);
        weighted += w / (tau * tau) *
                    (state.psi_L[j] * state.psi_L[j] + state.psi_R[j] * state.psi_R[j]);
    }
    rec.energy_grad = grad + div + relax;
    rec.weighted_psi = weighted;
    return rec;
}

DecayResult run_decay(const Kernel& k, int grid_n, int quad_nodes, double tau_max, double T,
                      const std::string& profile, bool undamped) {
    if (grid_n < 8) throw std::invalid_argument("simulate: grid_n must be at least 8");
    if (!(T > 12.0)) throw std::invalid_argument("simulate: need T > 12 for the fit window");

    MeasureQuadrature quad;
    if (!undamped) quad = discretize_measure(k, quad_nodes, tau_max);

    const double h = 1.0 / grid_n;
    const double dt = kCflFraction * h;
    const Eigen::VectorXd p0 = profile_values(profile, grid_n);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(grid_n + 1);
    Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(quad.nodes.size());
    if (profile.substr(0, profile.find(':')) == "memory") {
        const double c = memory_exponent(profile);
        for (Eigen::Index j = 0; j < quad.nodes.size(); ++j)
            psi0[j] = std::pow(quad.nodes[j], c) * std::exp(-quad.nodes[j]);
    }
    SimState state = initialize(p0, v0, psi0, quad, dt);

    // About 200 log-spaced sample times, snapped to whole steps.
    const long total_steps = static_cast<long>(std::ceil(T / dt));
    std::vector<long> sample_steps;
    {
        const double lo = std::log(std::max(1.0, 20.0 * dt));
        const double hi = std::log(static_cast<double>(total_steps) * dt);
        const int samples = 200;
        long prev = 0;
        for (int i = 0; i < samples; ++i) {
            const double t_target = std::exp(lo + (hi - lo) * i / (samples - 1));
            long s = std::lround(t_target / dt);
            s = std::min(std::max(s, prev + 1), total_steps);
            if (s > prev) {
                sample_steps.push_back(s);
                prev = s;
            }
        }
    }

    DecayResult result;
    result.records.push_back(energy(state, quad));
    long done = 0;
    for (const long target : sample_steps) {
        for (; done < target; ++done) step(state, quad, dt);
        result.records.push_back(energy(state, quad));
    }

    // Power-law fit over the tail window.
    const double t_lo = std::max(10.0, T / 10.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& rec : result.records) {
        if (rec.t < t_lo || rec.energy <= 0.0) continue;
        const double lx = std::log(rec.t);
        const double ly = std::log(rec.energy);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 8) throw std::invalid_argument("simulate: too few samples in the fit window");
    const double det = m * sxx - sx * sx;
    result.exponent = (m * sxy - sx * sy) / det;
    const double mean_slope = result.exponent;
    const double intercept = (sy - mean_slope * sx) / m;
    double ss_res = 0.0;
    for (const auto& rec : result.records) {
        if (rec.t < t_lo || rec.energy <= 0.0) continue;
        const double r = std::log(rec.energy) - (intercept + mean_slope * std::log(rec.t));
        ss_res += r * r;
    }
    const double var_slope = (m > 2) ? (ss_res / (m - 2)) * (m / det) : 0.0;
    result.half_width = 2.0 * std::sqrt(std::max(0.0, var_slope));
    return result;
}

} // namespace viscowave
