#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "viscowave/errors.hpp"

namespace viscowave {

// Neumann Laplacian modes on the square (0,pi)^2.  The eigenfunction for
// index pair (m,n) is cos(m x) cos(n y) / sqrt(q_m q_n) with q_0 = pi and
// q_k = pi/2 for k >= 1, so the basis is orthonormal in L^2 and a cluster
// with sum |a|^2 = 1 has unit norm.
struct ClusterMode {
    int m = 0;
    int n = 0;
    std::complex<double> a{0.0, 0.0};
};

// A unit-norm combination of modes whose frequencies sqrt(m^2+n^2) all lie
// in the annulus [s, s+delta].
struct ClusterSpec {
    std::vector<ClusterMode> modes;
    double delta = 0.0;
    double s = 0.0;
};

// Squared L^2 norm of the cluster's boundary trace over all four sides.
// Evaluates the closed form obtained from one-dimensional orthogonality of
// the cos(m x) factors along each edge; cost is O(#modes) after grouping.
// Throws std::invalid_argument if the cluster is not unit norm (1e-12) or a
// mode leaves the annulus.
double boundary_norm_sq(const ClusterSpec& cluster);

// Cluster of N = ceil(eps * sqrt(n1)) modes (m, n1), m = 0..N-1, with equal
// coefficients 1/sqrt(N).  Its boundary mass grows like sqrt(s), which is
// the worst case over the annulus.  Throws WindowViolation if the frequency
// spread sqrt(n1^2 + (N-1)^2) - n1 exceeds delta.
ClusterSpec build_optimality_cluster(int n1, double eps, double delta = 0.3);

// Boundary-mass statistics at one frequency shell.
struct ClusterBoundsRow {
    double s = 0.0;
    double random_min = 0.0;        // min over random unit clusters
    double random_max = 0.0;        // max over random unit clusters
    double random_max_scaled = 0.0; // random_max / sqrt(s)
    double c_lower = 0.0;           // min over random and deterministic
    double upper_scaled = 0.0;      // max boundary mass / sqrt(s)
    double optimality_value = 0.0;  // boundary mass of the equal-weight cluster
    double pure_value = 0.0;        // boundary mass of a single mode
    int cluster_size = 0;           // N for the equal-weight cluster
    double max_count_ratio = 0.0;   // max_n #{m : (m,n) in annulus} / sqrt(s)
};

struct ClusterBoundsReport {
    std::vector<ClusterBoundsRow> rows;
    double optimality_slope = 0.0; // d log(optimality_value) / d log(s)
    double pure_slope = 0.0;       // same for single-mode clusters
};

// Samples random unit clusters on each shell and compares them with the
// deterministic equal-weight cluster.  The lower bound c_lower stays of
// order one while optimality_value grows like s^(1/2); pure_slope stays
// near zero because a single mode has boundary mass 8/pi independent of s.
ClusterBoundsReport verify_cluster_bounds(double delta,
                                          const std::vector<double>& s_list,
                                          int trials,
                                          std::uint64_t seed);

} // namespace viscowave
