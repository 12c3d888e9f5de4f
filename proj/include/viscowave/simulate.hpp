#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "viscowave/errors.hpp"
#include "viscowave/kernel.hpp"

namespace viscowave {

// Staggered state for the damped wave system on (0,1).  Pressure lives at
// cell centers (i+1/2)h and lags velocity by half a step; velocity lives at
// the faces ih, i = 0..N.  Each boundary carries one memory value per
// quadrature node of the relaxation measure.  dt is stored because the
// energy functional needs the half-step pressure, which is a function of
// the stored fields only together with the step size.
struct SimState {
    Eigen::VectorXd p;     // N cells, time t - dt/2
    Eigen::VectorXd v;     // N + 1 faces, time t
    Eigen::VectorXd psi_L; // memory at x = 0, time t
    Eigen::VectorXd psi_R; // memory at x = 1, time t
    double t = 0.0;
    double dt = 0.0;
};

struct EnergyRecord {
    double t = 0.0;
    double energy = 0.0;       // total: field + memory
    double energy_grad = 0.0;  // graded norm: gradients plus relaxation residual
    double weighted_psi = 0.0; // sum_j w_j tau_j^-2 (|psi_L,j|^2 + |psi_R,j|^2)
};

struct DecayResult {
    std::vector<EnergyRecord> records;
    double exponent = 0.0;   // least-squares slope of log E against log t
    double half_width = 0.0; // two standard errors of the slope
};

// One leapfrog step: half-step pressure from the divergence, trapezoidal
// memory update driven by the adjacent cell pressure, boundary faces closed
// against the fresh memory, interior faces from the pressure gradient.
// Throws CFLViolation when dt > 0.9 h.
void step(SimState& state, const MeasureQuadrature& quad, double dt);

// Builds the staggered state from initial fields sampled at cell centers
// and faces: shifts p back half a step and closes the boundary faces.
SimState initialize(const Eigen::VectorXd& p0, const Eigen::VectorXd& v0,
                    const MeasureQuadrature& quad, double dt);

// Memory-loaded start: both boundary memories begin at psi0 (one value per
// quadrature node) instead of zero.  Slowly relaxing nodes dominate the
// late-time energy, so this is how near-threshold data is prepared.
SimState initialize(const Eigen::VectorXd& p0, const Eigen::VectorXd& v0,
                    const Eigen::VectorXd& psi0, const MeasureQuadrature& quad, double dt);

// Evaluates the energy functionals at the state's native time level.
EnergyRecord energy(const SimState& state, const MeasureQuadrature& quad);

// Integrates the system for the named initial profile and fits the decay
// exponent of the total energy over the window [max(10, T/10), T].
// Profiles: "gaussian", "standing:m", "powerlaw[:q[:nmax]]", and
// "memory[:c]", which pairs the gaussian pulse with boundary memory
// psi0(tau) = tau^c exp(-tau); c in (-1/2, 0) keeps the tau^-2-weighted
// memory norm finite while loading the slow relaxation modes.
DecayResult run_decay(const Kernel& k, int grid_n, int quad_nodes, double tau_max, double T,
                      const std::string& profile, bool undamped = false);

} // namespace viscowave
