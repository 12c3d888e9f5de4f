#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "viscowave/acceptance.hpp"
#include "viscowave/cluster_square.hpp"
#include "viscowave/csv.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/kernel_json.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/rates.hpp"
#include "viscowave/resolvent1d.hpp"
#include "viscowave/simulate.hpp"
#include "viscowave/spectrum1d.hpp"
#include "viscowave/spectrum_disk.hpp"

namespace {

using nlohmann::json;
using namespace viscowave;

// --kernel takes the spec inline ('{...}') or as a path to a JSON file.
Kernel load_kernel(const std::string& arg, json& echo) {
  std::string text = arg;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw std::invalid_argument("--kernel: empty spec");
  if (text[text.find_first_not_of(" \t\r\n")] != '{') {
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw std::invalid_argument("--kernel: cannot read file '" + arg + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("--kernel: invalid JSON: ") + e.what());
  }
  const Kernel k = kernel_from_json(j);
  echo = kernel_to_json(k);  // canonical echo, independent of input formatting
  return k;
}

// "a:b" with integers a <= b.
std::pair<int, int> parse_range(const std::string& spec, const std::string& flag) {
  const auto sep = spec.find(':');
  std::size_t ua = 0, ub = 0;
  int a = 0, b = 0;
  try {
    if (sep == std::string::npos) throw std::invalid_argument("no separator");
    a = std::stoi(spec.substr(0, sep), &ua);
    b = std::stoi(spec.substr(sep + 1), &ub);
  } catch (const std::exception&) {
    throw std::invalid_argument(flag + ": expected a:b with integers, got '" + spec + "'");
  }
  if (ua != sep || ub != spec.size() - sep - 1 || a > b)
    throw std::invalid_argument(flag + ": expected a:b with integers a <= b, got '" + spec + "'");
  return {a, b};
}

// "log:lo:hi:n" or "lin:lo:hi:n" with 0 < lo < hi (lo < hi for lin), n >= 2.
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  std::vector<std::string> parts;
  std::string::size_type pos = 0;
  for (;;) {
    const auto next = spec.find(':', pos);
    parts.push_back(spec.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  const std::string usage = flag + ": expected log:lo:hi:n or lin:lo:hi:n, got '" + spec + "'";
  if (parts.size() != 4 || (parts[0] != "log" && parts[0] != "lin"))
    throw std::invalid_argument(usage);
  double lo = 0.0, hi = 0.0;
  long n = 0;
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    lo = std::stod(parts[1], &u1);
    hi = std::stod(parts[2], &u2);
    n = std::stol(parts[3], &u3);
    if (u1 != parts[1].size() || u2 != parts[2].size() || u3 != parts[3].size())
      throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw std::invalid_argument(usage);
  }
  if (n < 2 || !(lo < hi) || (parts[0] == "log" && !(lo > 0.0)))
    throw std::invalid_argument(flag + ": need lo < hi (lo > 0 for log) and n >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    grid[static_cast<std::size_t>(i)] =
        parts[0] == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  return grid;
}

// "a,b,c" with positive doubles.
std::vector<double> parse_list(const std::string& spec, const std::string& flag) {
  std::vector<double> values;
  std::string::size_type pos = 0;
  while (pos <= spec.size()) {
    const auto next = spec.find(',', pos);
    const std::string item = spec.substr(pos, next - pos);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": bad number '" + item + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (values.empty()) throw std::invalid_argument(flag + ": empty list");
  return values;
}

// roots.csv -> roots.json; paths without the .csv suffix just gain .json.
std::string summary_path(const std::string& out) {
  if (out.size() > 4 && out.substr(out.size() - 4) == ".csv")
    return out.substr(0, out.size() - 4) + ".json";
  return out + ".json";
}

void write_summary(const std::string& out, const json& summary) {
  const std::string path = summary_path(out);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("summary: cannot open " + path);
  f << summary.dump(2) << "\n";
}

bool all_passed(const json& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const json& v) { return v.get<bool>(); });
}

int finish(const std::string& out, json summary, const json& checks) {
  summary["checks"] = checks;
  write_summary(out, summary);
  std::cout << (all_passed(checks) ? "ok: " : "CHECK FAILED: ") << out << ", "
            << summary_path(out) << "\n";
  return 0;
}

int cmd_spectrum1d(const std::string& kernel_arg, const std::string& range,
                   double tol, const std::string& out) {
  json kernel_echo;
  const Kernel k = load_kernel(kernel_arg, kernel_echo);
  const auto [n_min, n_max] = parse_range(range, "--n-range");
  if (n_min < 1) throw std::invalid_argument("--n-range: need a >= 1");

  const auto roots = find_eigenvalues(k, n_min, n_max, tol);
  CsvWriter csv(out, {"n", "re_z", "im_z", "residual", "seed_re", "seed_im", "ratio_r_n"});
  double max_residual = 0.0;
  for (const auto& ev : roots) {
    max_residual = std::max(max_residual, ev.residual);
    csv.row({CsvWriter::cell(ev.n), CsvWriter::cell(ev.z.real()), CsvWriter::cell(ev.z.imag()),
             CsvWriter::cell(ev.residual), CsvWriter::cell(ev.seed.real()),
             CsvWriter::cell(ev.seed.imag()), CsvWriter::cell(damping_ratio(k, ev))});
  }
  json summary = {{"subcommand", "spectrum1d"}, {"kernel", kernel_echo},
                  {"n_min", n_min},             {"n_max", n_max},
                  {"tol", tol},                 {"n_roots", roots.size()},
                  {"max_residual", max_residual}};
  return finish(out, summary,
                {{"residuals_within_tol", max_residual <= tol},
                 {"window_counts_certified", true}});  // find_eigenvalues throws otherwise
}

int cmd_disk(const std::string& kernel_arg, int l, const std::string& range,
             double tol, const std::string& out) {
  json kernel_echo;
  const Kernel k = load_kernel(kernel_arg, kernel_echo);
  const auto [n_min, n_max] = parse_range(range, "--n-range");
  if (n_min < 1) throw std::invalid_argument("--n-range: need a >= 1");

  const auto roots = find_disk_eigenvalues(k, l, n_min, n_max, tol);
  CsvWriter csv(out, {"l", "n", "re_z", "im_z", "residual", "xi_ratio_re", "xi_ratio_im",
                      "rate_product"});
  double max_residual = 0.0, max_product = 0.0;
  for (const auto& ev : roots) {
    const DiskRate rate = disk_rate(k, l, ev);
    max_residual = std::max(max_residual, ev.residual);
    max_product = std::max(max_product, rate.rate_product);
    csv.row({CsvWriter::cell(l), CsvWriter::cell(ev.n), CsvWriter::cell(ev.z.real()),
             CsvWriter::cell(ev.z.imag()), CsvWriter::cell(ev.residual),
             CsvWriter::cell(rate.xi_ratio.real()), CsvWriter::cell(rate.xi_ratio.imag()),
             CsvWriter::cell(rate.rate_product)});
  }
  json summary = {{"subcommand", "disk"}, {"kernel", kernel_echo}, {"l", l},
                  {"n_min", n_min},       {"n_max", n_max},        {"tol", tol},
                  {"n_roots", roots.size()}, {"max_residual", max_residual},
                  {"max_rate_product", max_product}};
  return finish(out, summary, {{"residuals_within_tol", max_residual <= tol}});
}

int cmd_resolvent(const std::string& kernel_arg, const std::string& s_grid,
                  const std::string& grid_n_arg, const std::string& out) {
  json kernel_echo;
  const Kernel k = load_kernel(kernel_arg, kernel_echo);
  const std::vector<double> grid = parse_grid(s_grid, "--s-grid");
  int grid_n = 256;
  if (grid_n_arg != "auto") {
    try {
      std::size_t used = 0;
      grid_n = std::stoi(grid_n_arg, &used);
      if (used != grid_n_arg.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("--grid-n: expected auto or an integer, got '" + grid_n_arg +
                                  "'");
    }
    if (grid_n < 16) throw std::invalid_argument("--grid-n: need at least 16 cells");
  }

  std::vector<ResolventProbe> probes(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    probes[static_cast<std::size_t>(i)] =
        resolvent_norm(k, grid[static_cast<std::size_t>(i)], grid_n);
  });

  // B(s) = Re k-hat(is) * sup over sampled sigma in [1, s] of sigma * norm_R.
  CsvWriter csv(out, {"s", "norm_R", "proxy_full", "B", "refinement_ratio"});
  double running_sup = 0.0;
  double b_min = 0.0, b_max = 0.0;
  double worst_refinement = 1.0;
  for (const auto& p : probes) {
    const double proxy = p.s * p.norm_R;
    if (p.s >= 1.0) running_sup = std::max(running_sup, proxy);
    const double b = impedance_parts(k, p.s).re * running_sup;
    if (p.s >= 10.0 && running_sup > 0.0) {
      b_min = b_min == 0.0 ? b : std::min(b_min, b);
      b_max = std::max(b_max, b);
    }
    if (std::abs(p.refinement_ratio - 1.0) > std::abs(worst_refinement - 1.0))
      worst_refinement = p.refinement_ratio;
    csv.row({CsvWriter::cell(p.s), CsvWriter::cell(p.norm_R), CsvWriter::cell(proxy),
             CsvWriter::cell(b), CsvWriter::cell(p.refinement_ratio)});
  }
  json summary = {{"subcommand", "resolvent"},
                  {"kernel", kernel_echo},
                  {"grid_n", grid_n},
                  {"n_points", grid.size()},
                  {"band_min", b_min},
                  {"band_max", b_max},
                  {"band_ratio", b_min > 0.0 ? b_max / b_min : 0.0},
                  {"worst_refinement_ratio", worst_refinement}};
  return finish(out, summary,
                {{"band_ratio_le_20", b_min > 0.0 && b_max / b_min <= 20.0},
                 {"refinement_within_1pct", std::abs(worst_refinement - 1.0) <= 0.01}});
}

int cmd_clusters(double delta, const std::string& s_list, int trials, std::uint64_t seed,
                 const std::string& out) {
  const std::vector<double> shells = parse_list(s_list, "--s-list");
  const ClusterBoundsReport report = verify_cluster_bounds(delta, shells, trials, seed);

  CsvWriter csv(out, {"s", "cluster_size", "random_min", "random_max", "random_max_scaled",
                      "c_lower", "upper_scaled", "optimality_value", "pure_value",
                      "max_count_ratio"});
  bool positive = true;
  for (const auto& row : report.rows) {
    positive = positive && row.c_lower > 0.0;
    csv.row({CsvWriter::cell(row.s), CsvWriter::cell(row.cluster_size),
             CsvWriter::cell(row.random_min), CsvWriter::cell(row.random_max),
             CsvWriter::cell(row.random_max_scaled), CsvWriter::cell(row.c_lower),
             CsvWriter::cell(row.upper_scaled), CsvWriter::cell(row.optimality_value),
             CsvWriter::cell(row.pure_value), CsvWriter::cell(row.max_count_ratio)});
  }
  json summary = {{"subcommand", "clusters"},
                  {"delta", delta},
                  {"trials", trials},
                  {"seed", seed},
                  {"optimality_slope", report.optimality_slope},
                  {"pure_slope", report.pure_slope}};
  return finish(out, summary,
                {{"lower_bound_positive", positive},
                 {"optimality_slope_in_band",
                  report.optimality_slope >= 0.45 && report.optimality_slope <= 0.55},
                 {"pure_slope_flat", std::abs(report.pure_slope) <= 0.05}});
}

int cmd_simulate(const std::string& kernel_arg, int grid_n, int quad_nodes, double T,
                 const std::string& init, double tau_max, bool undamped,
                 const std::string& out) {
  json kernel_echo;
  const Kernel k = load_kernel(kernel_arg, kernel_echo);
  const DecayResult res = run_decay(k, grid_n, quad_nodes, tau_max, T, init, undamped);

  CsvWriter csv(out, {"t", "E", "E1_hom", "weighted_psi"});
  bool monotone = true;
  double prev = res.records.empty() ? 0.0 : res.records.front().energy;
  double e_min = prev, e_max = prev;
  for (const auto& rec : res.records) {
    monotone = monotone && rec.energy <= prev * (1.0 + 1e-8);
    prev = rec.energy;
    e_min = std::min(e_min, rec.energy);
    e_max = std::max(e_max, rec.energy);
    csv.row({CsvWriter::cell(rec.t), CsvWriter::cell(rec.energy),
             CsvWriter::cell(rec.energy_grad), CsvWriter::cell(rec.weighted_psi)});
  }
  json summary = {{"subcommand", "simulate"}, {"kernel", kernel_echo},
                  {"grid_n", grid_n},         {"quad_nodes", quad_nodes},
                  {"T", T},                   {"init", init},
                  {"tau_max", tau_max},       {"undamped", undamped},
                  {"n_records", res.records.size()}, {"exponent", res.exponent},
                  {"half_width", res.half_width}};
  json checks;
  if (undamped)
    checks = {{"energy_conserved_1pct", e_min > 0.0 && e_max / e_min <= 1.01}};
  else
    checks = {{"energy_monotone", monotone}};
  return finish(out, summary, checks);
}

int cmd_rates(const std::string& kernel_arg, const std::string& scenario_arg,
              const std::string& t_grid, const std::string& out) {
  json kernel_echo;
  const Kernel k = load_kernel(kernel_arg, kernel_echo);
  const std::vector<double> grid = parse_grid(t_grid, "--t-grid");

  Scenario scenario;
  if (scenario_arg == "infinity") {
    scenario = Scenario::InfinityOnly;
  } else if (scenario_arg == "zero-and-infinity") {
    scenario = Scenario::ZeroAndInfinity;
  } else if (scenario_arg == "auto") {
    switch (classify_zero_spectrum(k)) {
      case ZeroSpectrumClass::Invertible:
        scenario = Scenario::InfinityOnly;
        break;
      case ZeroSpectrumClass::SquareIntegrableSingularity:
        scenario = Scenario::ZeroAndInfinity;
        break;
      default:
        throw std::invalid_argument(
            "--scenario: no supported decay scenario for this kernel "
            "(zero-spectrum singularity is not square integrable)");
    }
  } else {
    throw std::invalid_argument("--scenario: expected auto, infinity, or zero-and-infinity");
  }

  const EnergyEnvelope env = predict_energy_envelope(k, scenario);
  CsvWriter csv(out, {"t", "bound", "bound_log_free"});
  long skipped = 0;
  long rows = 0;
  bool decreasing = true;
  double prev_bound = 0.0;
  for (const double t : grid) {
    if (t < env.t_min) {
      ++skipped;
      continue;
    }
    const double bound = env.bound(t);
    const double bound_free = env.bound_log_free(t);
    if (rows > 0) decreasing = decreasing && bound <= prev_bound * (1.0 + 1e-12);
    prev_bound = bound;
    ++rows;
    csv.row({CsvWriter::cell(t), CsvWriter::cell(bound), CsvWriter::cell(bound_free)});
  }
  json summary = {{"subcommand", "rates"},
                  {"kernel", kernel_echo},
                  {"scenario", scenario == Scenario::InfinityOnly ? "infinity"
                                                                  : "zero-and-infinity"},
                  {"t_min", env.t_min},
                  {"n_rows", rows},
                  {"n_skipped_below_t_min", skipped}};
  return finish(out, summary, {{"envelope_nonincreasing", decreasing}, {"has_rows", rows > 0}});
}

int cmd_accept(const std::string& suite, std::vector<int> only, const std::string& out) {
  if (suite != "primary")
    throw std::invalid_argument("--suite: unknown suite '" + suite + "', expected primary");
  std::vector<int> indices = only.empty() ? acceptance::all_indices() : std::move(only);
  for (const int idx : indices)
    if (idx < 1 || idx > 10)
      throw std::invalid_argument("--only: criterion index out of range: " +
                                  std::to_string(idx));

  int failures = 0;
  json results = json::array();
  for (const int idx : indices) {
    const acceptance::CriterionResult res = acceptance::run_criterion_guarded(idx);
    std::cout << acceptance::format_line(res) << "\n" << std::flush;
    if (!res.passed) ++failures;
    results.push_back({{"criterion", res.index},
                       {"name", res.name},
                       {"passed", res.passed},
                       {"seconds", res.seconds},
                       {"detail", res.detail}});
  }
  if (!out.empty()) {
    json summary = {{"subcommand", "accept"},
                    {"suite", suite},
                    {"failures", failures},
                    {"results", results}};
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("summary: cannot open " + out);
    f << summary.dump(2) << "\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave equation with viscoelastic boundary damping: spectra, resolvent bounds,"
               " cluster estimates, time-domain runs, and decay-rate envelopes"};
  app.require_subcommand(1);

  // Each subcommand owns its option storage: CLI11 applies default_val at
  // setup time, so sharing a variable would let the last default win.
  std::string kernel_arg, out_arg;
  std::string sp_range = "1:200", dk_range = "5:80";
  double sp_tol = 1e-10, dk_tol = 1e-8;
  std::string rv_grid = "log:1:1000:200", rt_grid = "log:10:1e4:100";
  std::string grid_n_arg = "auto", s_list_arg = "100,400,1600,6400";
  std::string init_arg = "gaussian", scenario_arg = "auto", suite_arg = "primary";
  double delta = 0.25, T = 500.0, tau_max = 1e4;
  int l = 0, trials = 200, grid_n = 2048, quad_nodes = 40;
  std::uint64_t seed = 7;
  bool undamped = false;
  std::vector<int> only;

  auto* sp = app.add_subcommand("spectrum1d", "Interval eigenvalues with certification");
  sp->add_option("--kernel", kernel_arg, "kernel spec, inline JSON or a file path")->required();
  sp->add_option("--n-range", sp_range, "branch indices a:b")->capture_default_str();
  sp->add_option("--tol", sp_tol, "residual tolerance")->capture_default_str();
  sp->add_option("--out", out_arg, "output CSV path")->required();

  auto* dk = app.add_subcommand("disk", "Disk eigenvalues and impedance ratios");
  dk->add_option("--kernel", kernel_arg, "kernel spec, inline JSON or a file path")->required();
  dk->add_option("--l", l, "angular index")->capture_default_str();
  dk->add_option("--n-range", dk_range, "radial indices a:b")->capture_default_str();
  dk->add_option("--tol", dk_tol, "residual tolerance")->capture_default_str();
  dk->add_option("--out", out_arg, "output CSV path")->required();

  auto* rv = app.add_subcommand("resolvent", "Resolvent norms along the imaginary axis");
  rv->add_option("--kernel", kernel_arg, "kernel spec, inline JSON or a file path")->required();
  rv->add_option("--s-grid", rv_grid, "frequency grid log:lo:hi:n or lin:lo:hi:n")->capture_default_str();
  rv->add_option("--grid-n", grid_n_arg, "cells per solve, or auto")->capture_default_str();
  rv->add_option("--out", out_arg, "output CSV path")->required();

  auto* cl = app.add_subcommand("clusters", "Square boundary-trace bounds for mode clusters");
  cl->add_option("--delta", delta, "frequency window half-width")->capture_default_str();
  cl->add_option("--s-list", s_list_arg, "comma-separated shell frequencies")->capture_default_str();
  cl->add_option("--trials", trials, "random clusters per shell")->capture_default_str();
  cl->add_option("--seed", seed, "rng seed")->capture_default_str();
  cl->add_option("--out", out_arg, "output CSV path")->required();

  auto* sm = app.add_subcommand("simulate", "Time-domain decay run");
  sm->add_option("--kernel", kernel_arg, "kernel spec, inline JSON or a file path")->required();
  sm->add_option("--grid-n", grid_n, "spatial cells")->capture_default_str();
  sm->add_option("--quad-nodes", quad_nodes, "memory quadrature nodes")->capture_default_str();
  sm->add_option("--T", T, "final time")->capture_default_str();
  sm->add_option("--init", init_arg,
                 "initial profile: gaussian, standing:m, powerlaw[:q[:nmax]], memory[:c]")->capture_default_str();
  sm->add_option("--tau-max", tau_max, "quadrature truncation of the relaxation spectrum")->capture_default_str();
  sm->add_flag("--undamped", undamped, "drop the boundary memory (conservation runs)");
  sm->add_option("--out", out_arg, "output CSV path")->required();

  auto* rt = app.add_subcommand("rates", "Decay envelope from the rate calculus");
  rt->add_option("--kernel", kernel_arg, "kernel spec, inline JSON or a file path")->required();
  rt->add_option("--scenario", scenario_arg, "auto, infinity, or zero-and-infinity")->capture_default_str();
  rt->add_option("--t-grid", rt_grid, "time grid log:lo:hi:n or lin:lo:hi:n")->capture_default_str();
  rt->add_option("--out", out_arg, "output CSV path")->required();

  auto* ac = app.add_subcommand("accept", "Run the acceptance suite");
  ac->add_option("--suite", suite_arg, "suite name")->capture_default_str();
  ac->add_option("--only", only, "run selected criteria (repeatable)");
  ac->add_option("--out", out_arg, "optional JSON report path");

  try {
    app.parse(argc, argv);
    if (sp->parsed()) return cmd_spectrum1d(kernel_arg, sp_range, sp_tol, out_arg);
    if (dk->parsed()) return cmd_disk(kernel_arg, l, dk_range, dk_tol, out_arg);
    if (rv->parsed()) return cmd_resolvent(kernel_arg, rv_grid, grid_n_arg, out_arg);
    if (cl->parsed()) return cmd_clusters(delta, s_list_arg, trials, seed, out_arg);
    if (sm->parsed())
      return cmd_simulate(kernel_arg, grid_n, quad_nodes, T, init_arg, tau_max, undamped,
                          out_arg);
    if (rt->parsed()) return cmd_rates(kernel_arg, scenario_arg, rt_grid, out_arg);
    if (ac->parsed()) return cmd_accept(suite_arg, only, out_arg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
