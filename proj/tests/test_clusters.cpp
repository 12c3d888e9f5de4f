#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "viscowave/cluster_square.hpp"
#include "viscowave/errors.hpp"

using namespace viscowave;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

double edge_weight(int k) { return k == 0 ? kPi : kPi / 2.0; }

// Boundary trace integrated edge by edge with adaptive quadrature.  This is
// the definition; the closed form under test is its orthogonality reduction.
double boundary_norm_sq_quadrature(const ClusterSpec& c) {
    auto trace = [&](double coord, bool horizontal, double fixed) {
        Complex u{0.0, 0.0};
        for (const auto& mode : c.modes) {
            const double along = horizontal ? std::cos(mode.m * coord) : std::cos(mode.n * coord);
            const double across = horizontal ? std::cos(mode.n * fixed) : std::cos(mode.m * fixed);
            u += mode.a * along * across /
                 std::sqrt(edge_weight(mode.m) * edge_weight(mode.n));
        }
        return std::norm(u);
    };
    double total = 0.0;
    for (const double y : {0.0, kPi})
        total += oracle::simpson([&](double x) { return Complex{trace(x, true, y), 0.0}; }, 0.0,
                                 kPi, 1e-13)
                     .real();
    for (const double x : {0.0, kPi})
        total += oracle::simpson([&](double y) { return Complex{trace(y, false, x), 0.0}; }, 0.0,
                                 kPi, 1e-13)
                     .real();
    return total;
}

ClusterSpec single_mode(int m, int n, double s, double delta) {
    ClusterSpec c;
    c.s = s;
    c.delta = delta;
    c.modes.push_back({m, n, {1.0, 0.0}});
    return c;
}

// Independent reduction for the equal-weight cluster {(m, n1)}_{m<N}: the
// horizontal edges contribute 4/pi, the vertical ones collapse to a single
// column sum with alternating signs on the far edge.
double equal_weight_value(int count) {
    const double root2 = std::sqrt(2.0);
    const double far_sign = (count % 2 == 0) ? -1.0 : 0.0;
    const double near_edge = std::pow(1.0 + root2 * (count - 1), 2) / (count * kPi);
    const double far_edge = std::pow(1.0 + root2 * far_sign, 2) / (count * kPi);
    return 4.0 / kPi + near_edge + far_edge;
}

} // namespace

TEST_CASE("single-mode boundary masses") {
    CHECK(boundary_norm_sq(single_mode(0, 0, 0.0, 0.0)) == doctest::Approx(4.0 / kPi).epsilon(1e-13));
    CHECK(boundary_norm_sq(single_mode(3, 4, 5.0, 0.0)) == doctest::Approx(8.0 / kPi).epsilon(1e-13));
    CHECK(boundary_norm_sq(single_mode(4, 3, 5.0, 0.0)) == doctest::Approx(8.0 / kPi).epsilon(1e-13));
    // One index zero: the two edges parallel to that axis see the fatter
    // normalization q_0 = pi, so the mass drops to 6/pi.
    CHECK(boundary_norm_sq(single_mode(0, 5, 5.0, 0.0)) == doctest::Approx(6.0 / kPi).epsilon(1e-13));
}

TEST_CASE("closed form matches edge quadrature") {
    ClusterSpec two;
    two.s = 5.0;
    two.delta = 0.0;
    two.modes.push_back({3, 4, Complex{1.0, 0.0} / std::sqrt(2.0)});
    two.modes.push_back({4, 3, Complex{0.0, 1.0} / std::sqrt(2.0)});
    CHECK(boundary_norm_sq(two) == doctest::Approx(boundary_norm_sq_quadrature(two)).epsilon(1e-10));

    // Wider annulus with mixed phases and a zero index.
    ClusterSpec mixed;
    mixed.s = 12.0;
    mixed.delta = 1.0;
    std::vector<std::pair<int, int>> pts = {{0, 12}, {5, 11}, {9, 8}, {12, 1}, {3, 12}};
    double nsq = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Complex a{std::cos(1.7 * static_cast<double>(i + 1)),
                        std::sin(0.9 * static_cast<double>(i + 1))};
        mixed.modes.push_back({pts[i].first, pts[i].second, a});
        nsq += std::norm(a);
    }
    for (auto& mode : mixed.modes) mode.a /= std::sqrt(nsq);
    const double closed = boundary_norm_sq(mixed);
    CHECK(closed == doctest::Approx(boundary_norm_sq_quadrature(mixed)).epsilon(1e-10));
    CHECK(closed > 0.0);
}

TEST_CASE("cluster validation") {
    ClusterSpec c = single_mode(3, 4, 5.0, 0.0);
    c.modes[0].a = {0.5, 0.0};
    CHECK_THROWS_AS(boundary_norm_sq(c), std::invalid_argument);

    ClusterSpec off = single_mode(3, 4, 6.0, 0.1);
    CHECK_THROWS_AS(boundary_norm_sq(off), std::invalid_argument);

    ClusterSpec empty;
    empty.s = 5.0;
    CHECK_THROWS_AS(boundary_norm_sq(empty), std::invalid_argument);

    ClusterSpec neg = single_mode(-1, 4, 4.0, 0.5);
    CHECK_THROWS_AS(boundary_norm_sq(neg), std::invalid_argument);
}

TEST_CASE("equal-weight cluster values") {
    // Two modes at n1 = 400: mass is exactly 7/pi.
    const ClusterSpec two = build_optimality_cluster(400, 0.1);
    CHECK(two.modes.size() == 2);
    CHECK(boundary_norm_sq(two) == doctest::Approx(7.0 / kPi).epsilon(1e-13));
    CHECK(7.0 / kPi == doctest::Approx(2.2281692032865347).epsilon(1e-15));

    const ClusterSpec ten = build_optimality_cluster(10000, 0.1);
    CHECK(ten.modes.size() == 10);
    CHECK(boundary_norm_sq(ten) == doctest::Approx(equal_weight_value(10)).epsilon(1e-12));

    // Mass grows with the shell, but slower than sqrt(s) at these sizes.
    const double ratio = boundary_norm_sq(ten) / boundary_norm_sq(two);
    CHECK(ratio > 1.0);
    CHECK(ratio < std::sqrt(10000.0 / 400.0));
    CHECK(ratio > 0.5 * std::sqrt(10000.0 / 400.0));
}

TEST_CASE("optimality cluster window") {
    // Spread hypot(100, 11) - 100 = 0.60 exceeds the 0.3 window.
    CHECK_THROWS_AS(build_optimality_cluster(100, 1.2, 0.3), WindowViolation);
    CHECK_THROWS_AS(build_optimality_cluster(1, 10.0, 0.3), WindowViolation);
    CHECK_THROWS_AS(build_optimality_cluster(0, 0.5, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(build_optimality_cluster(100, -1.0, 0.3), std::invalid_argument);

    // Just inside: eps = 0.99 sqrt(2 delta) keeps the spread under delta at
    // the shells the bounds report uses.
    const double eps = 0.99 * std::sqrt(0.6);
    int expected[] = {8, 16, 31, 62};
    double shells[] = {100.0, 400.0, 1600.0, 6400.0};
    for (int i = 0; i < 4; ++i) {
        const ClusterSpec c = build_optimality_cluster(static_cast<int>(shells[i]), eps, 0.3);
        CHECK(static_cast<int>(c.modes.size()) == expected[i]);
        CHECK(boundary_norm_sq(c) == doctest::Approx(equal_weight_value(expected[i])).epsilon(1e-12));
    }
}

TEST_CASE("bounds report at reference shells") {
    const std::vector<double> shells = {100.0, 400.0, 1600.0, 6400.0};
    const ClusterBoundsReport rep = verify_cluster_bounds(0.3, shells, 40, 7);
    REQUIRE(rep.rows.size() == 4);

    int expected_n[] = {8, 16, 31, 62};
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        CHECK(row.cluster_size == expected_n[i]);
        CHECK(row.optimality_value ==
              doctest::Approx(equal_weight_value(expected_n[i])).epsilon(1e-12));
        CHECK(row.pure_value == doctest::Approx(8.0 / kPi).epsilon(1e-13));
        CHECK(row.random_min > 0.0);
        CHECK(row.random_min <= row.random_max);
        CHECK(row.c_lower <= row.random_min);
        CHECK(row.upper_scaled >= row.optimality_value / std::sqrt(row.s));
        // Random unit clusters concentrate near the per-mode average 8/pi;
        // scaled by sqrt(s) they vanish, unlike the deterministic cluster.
        CHECK(row.random_max < 3.0 * 8.0 / kPi);
        CHECK(row.random_max_scaled < 1.0);
        CHECK(row.max_count_ratio > 0.5);
        CHECK(row.max_count_ratio < 1.0);
    }
    CHECK(rep.rows[3].random_max_scaled < rep.rows[0].random_max_scaled);

    CHECK(rep.optimality_slope > 0.45);
    CHECK(rep.optimality_slope < 0.55);
    CHECK(std::abs(rep.pure_slope) < 1e-12);
}

TEST_CASE("bounds report determinism") {
    const std::vector<double> shells = {100.0, 400.0};
    const ClusterBoundsReport a = verify_cluster_bounds(0.3, shells, 10, 42);
    const ClusterBoundsReport b = verify_cluster_bounds(0.3, shells, 10, 42);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].random_min == b.rows[i].random_min);
        CHECK(a.rows[i].random_max == b.rows[i].random_max);
        CHECK(a.rows[i].optimality_value == b.rows[i].optimality_value);
    }
    const ClusterBoundsReport c = verify_cluster_bounds(0.3, shells, 10, 43);
    CHECK(c.rows[0].random_min != a.rows[0].random_min);
}

TEST_CASE("bounds report validation") {
    CHECK_THROWS_AS(verify_cluster_bounds(0.0, {100.0}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_cluster_bounds(0.3, {}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_cluster_bounds(0.3, {100.0}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_cluster_bounds(0.3, {0.5}, 10, 1), std::invalid_argument);
}
