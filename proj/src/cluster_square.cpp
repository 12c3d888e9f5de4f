#include "viscowave/cluster_square.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace viscowave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double mode_weight(int k) { return k == 0 ? kPi : kPi / 2.0; }

double lsq_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Gaussian pairs via Box-Muller on the raw 64-bit stream.  Distribution
// helpers in <random> are not pinned across standard libraries, and the
// report must be byte-stable for a fixed seed.
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

  private:
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::vector<std::pair<int, int>> annulus_lattice(double s, double delta) {
    std::vector<std::pair<int, int>> pts;
    const double lo2 = s * s;
    const double hi = s + delta;
    const double hi2 = hi * hi;
    const int m_max = static_cast<int>(std::floor(hi));
    for (int m = 0; m <= m_max; ++m) {
        const double rem_hi = hi2 - static_cast<double>(m) * m;
        if (rem_hi < 0.0) break;
        const double rem_lo = std::max(0.0, lo2 - static_cast<double>(m) * m);
        int n_lo = static_cast<int>(std::ceil(std::sqrt(rem_lo) - 1e-9));
        const int n_hi = static_cast<int>(std::floor(std::sqrt(rem_hi) + 1e-9));
        for (int n = std::max(0, n_lo); n <= n_hi; ++n) {
            const double r = std::hypot(static_cast<double>(m), static_cast<double>(n));
            if (r >= s - 1e-9 && r <= hi + 1e-9) pts.emplace_back(m, n);
        }
    }
    return pts;
}

} // namespace

double boundary_norm_sq(const ClusterSpec& cluster) {
    if (cluster.modes.empty()) throw std::invalid_argument("cluster_square: empty cluster");
    if (!(cluster.delta >= 0.0) || !(cluster.s >= 0.0))
        throw std::invalid_argument("cluster_square: require s >= 0 and delta >= 0");

    double norm_sq = 0.0;
    // Row sums over n for the horizontal edges; column sums over m for the
    // vertical ones.  The +/- variants carry the cos(k*pi) = (-1)^k traces.
    std::map<int, std::complex<double>> row_plus, row_minus, col_plus, col_minus;
    for (const auto& mode : cluster.modes) {
        if (mode.m < 0 || mode.n < 0)
            throw std::invalid_argument("cluster_square: negative mode index");
        const double freq = std::hypot(static_cast<double>(mode.m), static_cast<double>(mode.n));
        if (freq < cluster.s - 1e-9 || freq > cluster.s + cluster.delta + 1e-9)
            throw std::invalid_argument("cluster_square: mode frequency outside annulus");
        norm_sq += std::norm(mode.a);
        const double rn = 1.0 / std::sqrt(mode_weight(mode.n));
        const double rm = 1.0 / std::sqrt(mode_weight(mode.m));
        const double sn = (mode.n % 2 == 0) ? 1.0 : -1.0;
        const double sm = (mode.m % 2 == 0) ? 1.0 : -1.0;
        row_plus[mode.m] += mode.a * rn;
        row_minus[mode.m] += mode.a * (sn * rn);
        col_plus[mode.n] += mode.a * rm;
        col_minus[mode.n] += mode.a * (sm * rm);
    }
    if (std::abs(norm_sq - 1.0) > 1e-12)
        throw std::invalid_argument("cluster_square: cluster is not unit norm");

    double total = 0.0;
    for (const auto& [m, v] : row_plus) total += std::norm(v);
    for (const auto& [m, v] : row_minus) total += std::norm(v);
    for (const auto& [n, v] : col_plus) total += std::norm(v);
    for (const auto& [n, v] : col_minus) total += std::norm(v);
    return total;
}

ClusterSpec build_optimality_cluster(int n1, double eps, double delta) {
    if (n1 < 1) throw std::invalid_argument("cluster_square: n1 must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("cluster_square: eps must be positive");
    const int count = std::max(1, static_cast<int>(std::ceil(eps * std::sqrt(static_cast<double>(n1)))));
    const double spread =
        std::hypot(static_cast<double>(n1), static_cast<double>(count - 1)) - static_cast<double>(n1);
    if (spread > delta + 1e-12) throw WindowViolation("cluster_square: cluster spread exceeds delta");

    ClusterSpec spec;
    spec.delta = delta;
    spec.s = static_cast<double>(n1);
    spec.modes.reserve(static_cast<std::size_t>(count));
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    for (int m = 0; m < count; ++m) spec.modes.push_back({m, n1, {amp, 0.0}});
    return spec;
}

ClusterBoundsReport verify_cluster_bounds(double delta, const std::vector<double>& s_list,
                                          int trials, std::uint64_t seed) {
    if (!(delta > 0.0)) throw std::invalid_argument("cluster_square: delta must be positive");
    if (s_list.empty()) throw std::invalid_argument("cluster_square: empty frequency list");
    if (trials < 1) throw std::invalid_argument("cluster_square: trials must be positive");

    // Largest eps whose cluster still fits the annulus: spread is about
    // (N-1)^2/(2 n1) <= eps^2/2, so eps = sqrt(2 delta) is the ceiling.
    const double eps = 0.99 * std::sqrt(2.0 * delta);
    GaussianSource gauss(seed);

    ClusterBoundsReport report;
    report.rows.reserve(s_list.size());
    for (const double s : s_list) {
        if (!(s >= 1.0)) throw std::invalid_argument("cluster_square: shell frequency below 1");
        const int n1 = static_cast<int>(std::llround(s));

        ClusterBoundsRow row;
        row.s = s;

        const ClusterSpec det = build_optimality_cluster(n1, eps, delta);
        row.cluster_size = static_cast<int>(det.modes.size());
        row.optimality_value = boundary_norm_sq(det);

        const auto lattice = annulus_lattice(s, delta);
        if (lattice.empty()) throw std::invalid_argument("cluster_square: annulus holds no modes");

        // Single interior mode: boundary mass 8/pi regardless of s.
        ClusterSpec pure;
        pure.delta = delta;
        pure.s = s;
        std::pair<int, int> interior = lattice.front();
        for (const auto& p : lattice)
            if (p.first >= 1 && p.second >= 1) {
                interior = p;
                break;
            }
        pure.modes.push_back({interior.first, interior.second, {1.0, 0.0}});
        row.pure_value = boundary_norm_sq(pure);

        double vmin = row.optimality_value;
        double vmax = row.optimality_value;
        double rmin = 0.0, rmax = 0.0;
        std::vector<std::complex<double>> coeff(lattice.size());
        for (int t = 0; t < trials; ++t) {
            double nsq = 0.0;
            for (auto& c : coeff) {
                c = {gauss(), gauss()};
                nsq += std::norm(c);
            }
            const double inv = 1.0 / std::sqrt(nsq);
            ClusterSpec trial;
            trial.delta = delta;
            trial.s = s;
            trial.modes.reserve(lattice.size());
            for (std::size_t i = 0; i < lattice.size(); ++i)
                trial.modes.push_back({lattice[i].first, lattice[i].second, coeff[i] * inv});
            const double v = boundary_norm_sq(trial);
            rmin = (t == 0) ? v : std::min(rmin, v);
            rmax = (t == 0) ? v : std::max(rmax, v);
        }
        vmin = std::min(vmin, rmin);
        vmax = std::max(vmax, rmax);

        row.random_min = rmin;
        row.random_max = rmax;
        row.random_max_scaled = rmax / std::sqrt(s);
        row.c_lower = vmin;
        row.upper_scaled = vmax / std::sqrt(s);

        int max_count = 0;
        int n_lo = lattice.back().second, n_hi = lattice.front().second;
        for (const auto& p : lattice) {
            n_lo = std::min(n_lo, p.second);
            n_hi = std::max(n_hi, p.second);
        }
        std::vector<int> per_n(static_cast<std::size_t>(n_hi - n_lo + 1), 0);
        for (const auto& p : lattice) max_count = std::max(max_count, ++per_n[static_cast<std::size_t>(p.second - n_lo)]);
        row.max_count_ratio = static_cast<double>(max_count) / std::sqrt(s);

        report.rows.push_back(row);
    }

    if (report.rows.size() >= 2) {
        std::vector<double> xs, yo, yp;
        for (const auto& r : report.rows) {
            xs.push_back(r.s);
            yo.push_back(r.optimality_value);
            yp.push_back(r.pure_value);
        }
        report.optimality_slope = lsq_log_slope(xs, yo);
        report.pure_slope = lsq_log_slope(xs, yp);
    }
    return report;
}

} // namespace viscowave
