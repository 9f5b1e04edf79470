// Acceptance criteria A1..A9. One PASS/FAIL line per criterion; the details
// under each line are the measured values the verdict rests on.
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "kinetic/csv.hpp"
#include "kinetic/equilibria.hpp"
#include "kinetic/fourier.hpp"
#include "kinetic/graph.hpp"
#include "kinetic/initial_condition.hpp"
#include "kinetic/moments.hpp"
#include "kinetic/montecarlo.hpp"
#include "kinetic/rng.hpp"

using namespace kinetic;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct ChildRun {
  int exit_code = -1;
  double seconds = 0;
  long max_rss_kb = 0;
};

ChildRun run_tool(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  std::string bin = KINETIC_MC_BINARY;
  argv.push_back(bin.data());
  std::vector<std::string> copy = args;
  for (auto& a : copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  const auto t0 = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid == 0) {
    if (!std::freopen("/dev/null", "w", stdout) || !std::freopen("/dev/null", "w", stderr)) _exit(127);
    execv(bin.c_str(), argv.data());
    _exit(127);
  }
  int status = 0;
  rusage ru{};
  wait4(pid, &status, 0, &ru);
  ChildRun r;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.max_rss_kb = ru.ru_maxrss;
  return r;
}

fs::path workdir(const std::string& name) {
  const auto p = fs::temp_directory_path() / "kinetic_acceptance" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Json manifest(const fs::path& dir) { return Json::parse(slurp(dir / "manifest.json")); }

bool same_artifacts(const fs::path& a, const fs::path& b, std::size_t& compared) {
  bool same = true;
  compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file() || entry.path().filename() == "timings.json") continue;
    const auto rel = fs::relative(entry.path(), a);
    same = same && fs::exists(b / rel) && slurp(entry.path()) == slurp(b / rel);
    ++compared;
  }
  return same && compared > 0;
}

double value_at(const Trace& tr, const std::string& name, double t) {
  std::size_t c = 0;
  while (tr.names[c] != name) ++c;
  std::size_t best = 0;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    if (std::abs(tr.times[k] - t) < std::abs(tr.times[best] - t)) best = k;
  return tr.columns[c][best];
}

const char* kA1Config =
    "experiment = fig1\nseed = 20240601\nN_p = 200000\nT = 10\neps = 1e-3\ndt_over_eps = 1\n"
    "snapshots = 0, 2.5, 5, 10\n[law]\nkind = advection_diffusion\nlambda = 3.5\nsigma_sq = 6\neta = uniform\n"
    "[initial]\nkind = uniform\na = -1\nb = 3\n[histogram]\nbins = 100\nrange = 0, 6\n";

// A1 and A9 share the two worker-count runs of the A1 configuration.
struct A1Runs {
  fs::path w1, w4;
  ChildRun r1, r4;
};

A1Runs run_a1_pair() {
  A1Runs r;
  const auto dir = workdir("a1");
  const auto cfg = write_config(dir, kA1Config);
  r.w1 = dir / "workers1";
  r.w4 = dir / "workers4";
  r.r1 = run_tool({"run", cfg.string(), "--workers", "1", "--out", r.w1.string()});
  r.r4 = run_tool({"run", cfg.string(), "--workers", "4", "--out", r.w4.string()});
  return r;
}

Verdict a1(const A1Runs& runs) {
  Verdict v;
  v.expect(runs.r1.exit_code == 0, "eps=1e-3 run exit code " + std::to_string(runs.r1.exit_code));
  if (runs.r1.exit_code != 0) return v;
  const auto m = manifest(runs.w1);
  const auto& run = m["derived"]["runs"][0];
  const double l1_small = run["snapshots"].back()["l1_to_equilibrium"];
  const double mean = run["terminal_mean"];
  v.expect(l1_small <= 0.05, "eps=1e-3 terminal L1 " + fmt(l1_small) + " <= 0.05");
  v.expect(std::abs(mean - 1) <= 0.02, "eps=1e-3 terminal mean " + fmt(mean) + " in 1 +- 0.02");

  // eps = 4e-2 with dt = eps/2
  const auto dir = workdir("a1_eps4e-2");
  std::string text = kA1Config;
  text.replace(text.find("eps = 1e-3\ndt_over_eps = 1"), 26, "eps = 4e-2\ndt_over_eps = 0.5");
  const auto cfg = write_config(dir, text);
  const auto r = run_tool({"run", cfg.string(), "--out", (dir / "out").string()});
  v.expect(r.exit_code == 0, "eps=4e-2 run exit code " + std::to_string(r.exit_code));
  if (r.exit_code != 0) return v;
  const auto m2 = manifest(dir / "out");
  const double l1_large = m2["derived"]["runs"][0]["snapshots"].back()["l1_to_equilibrium"];
  v.expect(l1_large > l1_small, "eps=4e-2 terminal L1 " + fmt(l1_large) + " > eps=1e-3 value " + fmt(l1_small));
  return v;
}

Verdict a2() {
  Verdict v;
  const auto dir = workdir("a2");
  const auto cfg = write_config(
      dir,
      "experiment = fig2\nseed = 7\nN_p = 200000\nT = 4\neps = 1e-3\ndt_over_eps = 1\nsnapshots = 1, 2, 4\n"
      "[law]\nkind = advection_dominated\nlambda = 1\nsigma_sq = 1.69\ndelta = 1\neta = uniform\n"
      "[initial]\nkind = uniform\na = -1\nb = 3\n");
  const auto r = run_tool({"run", cfg.string(), "--out", (dir / "out").string()});
  v.expect(r.exit_code == 0, "run exit code " + std::to_string(r.exit_code));
  if (r.exit_code != 0) return v;
  const auto m = manifest(dir / "out");
  const auto tr = read_trace_csv(dir / "out" / "trace.csv");
  for (const auto& s : m["derived"]["snapshots"]) {
    const double t = s["t"];
    const double l1 = s["l1_to_exact"];
    const double mean = value_at(tr, "M1", t);
    v.expect(l1 <= 0.10, "t=" + fmt(t) + " L1 to exact transport solution " + fmt(l1) + " <= 0.10");
    v.expect(std::abs(mean - 1) <= 0.02, "t=" + fmt(t) + " mean " + fmt(mean) + " in 1 +- 0.02");
  }
  const double e = m["derived"]["terminal_energy"];
  const double lim = m["derived"]["energy_limit_eps_corrected"];
  v.expect(std::abs(lim - 1.000846) <= 1e-6, "eps-corrected energy limit " + fmt(lim) + " = 1.000846 (quoted to 6 decimals)");
  v.expect(std::abs(e - lim) <= 0.02, "terminal M2 " + fmt(e) + " within 0.02 of " + fmt(lim));
  return v;
}

Verdict a3() {
  Verdict v;
  std::vector<double> xi;
  for (int k = -1000; k <= 1000; ++k) xi.push_back(0.005 * k);
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double res = gaussian_fixed_point_residual(1.0, eps, 1.0, xi);
    v.expect(res <= 1e-12, "eps=" + fmt(eps) + " Gaussian fixed-point residual " + fmt(res) + " <= 1e-12");
  }
  const auto dir = workdir("a3");
  const auto cfg = write_config(
      dir,
      "experiment = cons_energy_sigma0\nseed = 3\nN_p = 100000\nT = 5\neps = 1e-2\ndt_over_eps = 1\n"
      "snapshots = 0, 1, 5\n[law]\nkind = conserved_energy\nlambda = 1\nsigma_sq = 0\n"
      "[initial]\nkind = two_point\nx = 1\n");
  const auto r = run_tool({"run", cfg.string(), "--out", (dir / "out").string()});
  v.expect(r.exit_code == 0, "MC run exit code " + std::to_string(r.exit_code));
  if (r.exit_code != 0) return v;
  const auto m = manifest(dir / "out");
  const double e = m["derived"]["terminal_energy"];
  const double l1 = m["derived"]["snapshots"].back()["l1_to_gaussian"];
  v.expect(std::abs(e - 1) <= 0.05, "MC terminal energy " + fmt(e) + " in 1 +- 0.05");
  v.expect(l1 <= 0.10, "MC terminal L1 to N(0,1) " + fmt(l1) + " <= 0.10");
  return v;
}

Verdict a4() {
  Verdict v;
  struct Case {
    std::string name;
    ScalingRegime regime;
    double eps;
  };
  const auto uni = RandomCoefficient::centered_uniform(1.0);
  const auto two = RandomCoefficient::two_point(-1, 0.5, 1, 0.5);
  const std::vector<Case> cases{{"advection_diffusion eps=1e-3", AdvectionDiffusion{3.5, std::sqrt(6.0), uni}, 1e-3},
                                {"advection_diffusion eps=4e-2", AdvectionDiffusion{3.5, std::sqrt(6.0), uni}, 4e-2},
                                {"advection_dominated", AdvectionDominated{1.0, 1.3, 1.0, uni}, 1e-3},
                                {"conserved_energy sigma=0", ConservedEnergy{1.0, 0.0, two}, 1e-2}};
  std::uint64_t seed = 40;
  auto check = [&](const std::string& name, Ensemble& e, auto&& advance) {
    double worst = 0;
    RunOptions opt;
    opt.observers.push_back([&](const Ensemble& en) {
      for (double x : en.states) worst = std::min(worst, x);
    });
    advance(e, opt);
    v.expect(worst >= 0.0 && e.iteration == 1000,
             name + ": min state over 1000 iterations " + fmt(worst) + " >= 0");
  };
  for (const auto& c : cases) {
    RngStream rng(seed, {run_id(StreamTag::Initial), 0, 0});
    Ensemble e = make_ensemble(sample_initial_condition(rng, UniformInterval{0, 1}, 10000), c.eps, seed++, 1.0);
    check(c.name, e, [&](Ensemble& en, const RunOptions& opt) { run_quasi_invariant(en, c.regime, c.eps, 1000 * c.eps, opt); });
  }
  const InteractionLaw example{RandomCoefficient::affine(0.75, 1.0, RandomCoefficient::centered_uniform(0.1)),
                               RandomCoefficient::constant(0.25)};
  RngStream rng(seed, {run_id(StreamTag::Initial), 0, 0});
  Ensemble e = make_ensemble(sample_initial_condition(rng, UniformInterval{0, 1}, 10000), 0.05, seed, 0.05);
  check("explicit p = 0.75 + eta, q = 0.25", e, [&](Ensemble& en, const RunOptions& opt) { run(en, example, 50.0, opt); });
  return v;
}

Verdict a5() {
  Verdict v;
  const InteractionLaw law{RandomCoefficient::affine(0.75, 1.0, RandomCoefficient::centered_uniform(0.1)),
                           RandomCoefficient::constant(0.25)};
  const double dt = 0.05, T = 5.0;
  const std::size_t n = 100000;
  RngStream rng(5, {run_id(StreamTag::Initial), 0, 0});
  Ensemble e = make_ensemble(sample_initial_condition(rng, UniformInterval{-1, 3}, n), dt, 5, dt);
  const double M10 = ensemble_moment(e.states, 1);
  const double M20 = ensemble_moment(e.states, 2);
  std::size_t sampled = 0, inside = 0;
  double worst_z = 0;
  RunOptions opt;
  opt.observers.push_back([&](const Ensemble& en) {
    if (en.iteration == 0 || en.iteration % 5) return;
    const double m2 = ensemble_moment(en.states, 2);
    const double m4 = ensemble_moment(en.states, 4);
    const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / double(n));
    const double z = std::abs(m2 - energy_closed_form(M10, M20, law, en.t)) / se;
    worst_z = std::max(worst_z, z);
    ++sampled;
    if (z <= 5) ++inside;
  });
  run(e, law, T, opt);
  v.expect(sampled == 20 && inside == sampled,
           std::to_string(inside) + "/" + std::to_string(sampled) + " sampled times within 5 SE of the closed form (worst " +
               fmt(worst_z) + " SE)");
  const auto s = integrate_moment_system(law, {1.0, M10, M20}, T, 1e-3);
  double err = 0;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    err = std::max(err, std::abs(s.values[k][1] - mean_closed_form(M10, law, s.times[k])));
    err = std::max(err, std::abs(s.values[k][2] - energy_closed_form(M10, M20, law, s.times[k])));
  }
  v.expect(err <= 1e-8, "RK4 moment system vs closed forms, max error " + fmt(err) + " <= 1e-8");
  return v;
}

CfFunction dirac(double a) {
  return [a](double xi) { return std::exp(std::complex<double>(0, -xi * a)); };
}

Verdict a6() {
  Verdict v;
  const auto grid = make_xi_grid();
  const auto d0 = analytic_cf(dirac(0), grid, {0});
  const auto d07 = analytic_cf(dirac(0.7), grid, {0.7});
  v.expect(fourier_distance(d07, d07, 2.0).value == 0.0, "d_2(a, a) = 0");
  const double d1 = fourier_distance(d0, d07, 1.0).value;
  v.expect(std::abs(d1 - 0.7) <= 1e-6, "d_1(delta_0, delta_0.7) = " + fmt(d1) + " within 1e-6 of 0.7");
  double dil = 0;
  for (auto [s, c] : {std::pair{2.0, 2.0}, {1.0, 0.5}, {1.5, 3.0}}) {
    const auto r = dilation_scaling_check(dirac(0), dirac(0.7), grid, s, c);
    dil = std::max(dil, std::abs(r.lhs - r.rhs) / r.rhs);
    dil = std::max(dil, std::abs(r.rhs - std::pow(c, s) * r.ds) / r.rhs);
  }
  v.expect(dil <= 1e-10, "dilation scaling, max relative gap " + fmt(dil) + " <= 1e-10");

  const auto g128 = make_xi_grid(1e-4, 1e2, 128);
  std::size_t held = 0;
  double worst_ratio = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    RngStream r(1000 + k, {run_id(StreamTag::Generic), 0, 0});
    const double m = -1 + 2 * r.uniform();
    std::vector<double> a(2000), b(2000);
    const double wa = 0.2 + 2 * r.uniform(), wb = 0.2 + 2 * r.uniform();
    for (auto& x : a) x = m + wa * (r.uniform() - 0.5);
    for (auto& x : b) x = m + wb * r.normal();
    const auto fa = empirical_cf(a, g128, 1, m);
    const auto fb = empirical_cf(b, g128, 1, m);
    const double x1 = fourier_distance(fa, fb, 1.0).value;
    const double x2 = fourier_distance(fa, fb, 2.0).value;
    worst_ratio = std::max(worst_ratio, x1 / (2 * std::sqrt(2.0) * std::sqrt(x2)));
    if (x1 <= 2 * std::sqrt(2.0) * std::sqrt(x2)) ++held;
  }
  v.expect(held == 50, "interpolation d1 <= 2 sqrt2 d2^(1/2) on " + std::to_string(held) +
                           "/50 matched-mean pairs (largest ratio " + fmt(worst_ratio) + ")");

  // d2 contraction: two Alg.-1 runs per seed, f0 = U(-1,3), g0 = U(0,2), p = 0.7, q = 0.3.
  const InteractionLaw law{RandomCoefficient::constant(0.7), RandomCoefficient::constant(0.3)};
  const double envelope = law_statistics(law).energy_sum - 1.0;
  const double dt = 0.1, T = 4.0;
  const std::size_t n = 100000;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const std::uint64_t seed = splitmix64(0xd2 + trial);
    RngStream rf(seed, {run_id(StreamTag::Initial), 0, 0});
    RngStream rg(seed, {run_id(StreamTag::Initial, 1), 0, 0});
    Ensemble f = make_ensemble(sample_initial_condition(rf, UniformInterval{-1, 3}, n), dt, seed, dt);
    Ensemble g = make_ensemble(sample_initial_condition(rg, UniformInterval{0, 2}, n), dt, seed ^ 0x5eed, dt);
    std::vector<double> times, d2;
    const std::uint64_t steps = step_count(T, dt);
    for (std::uint64_t it = 0; it <= steps; ++it) {
      if (it % 2 == 0) {
        const auto ff = empirical_cf(f.states, g128, 1, 1.0);
        const auto gg = empirical_cf(g.states, g128, 1, 1.0);
        times.push_back(f.t);
        d2.push_back(fourier_distance(ff, gg, 2.0).value);
      }
      if (it == steps) break;
      step(f, law);
      step(g, law);
    }
    const auto fit = fit_log_slope(times, d2);
    v.expect(fit.slope <= envelope + 3 * fit.slope_stderr,
             "d2 trial " + std::to_string(trial + 1) + ": slope " + fmt(fit.slope) + " <= " + fmt(envelope) +
                 " + 3 * " + fmt(fit.slope_stderr));
  }
  return v;
}

Verdict a7() {
  Verdict v;
  const InteractionLaw half{RandomCoefficient::constant(0.5), RandomCoefficient::constant(0.5)};
  double perron_res = 0, gap = 0, mass_err = 0, min_rho = 1;
  std::size_t largest = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 2 + (seed * 7) % 9;
    largest = std::max(largest, n);
    const double chi = 0.3 + 0.2 * static_cast<double>(seed);
    const auto g = make_graph_from_weights(random_strongly_connected_weights(n, 0.35, seed), chi, NormalizedRate{1.0},
                                           std::vector(n, half));
    const auto eq = density_equilibrium(g);
    perron_res = std::max(perron_res, eq.residual);
    std::vector<double> rho0(n, 0.0);
    rho0[seed % n] = 1.0;
    const auto tr = density_ode_solve(g, rho0, 50.0 / chi, 1e-2 / chi);
    for (const auto& r : tr.rho) {
      double s = 0;
      for (double x : r) {
        s += x;
        min_rho = std::min(min_rho, x);
      }
      mass_err = std::max(mass_err, std::abs(s - 1));
    }
    for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, std::abs(tr.rho.back()[i] - eq.rho[i]));
  }
  v.expect(perron_res <= 1e-12, "Perron residual " + fmt(perron_res) + " <= 1e-12 (10 graphs, N <= " +
                                    std::to_string(largest) + ")");
  v.expect(gap <= 1e-8, "ODE at t = 50/chi vs Perron " + fmt(gap) + " <= 1e-8");
  v.expect(mass_err <= 1e-12, "ODE mass error " + fmt(mass_err) + " <= 1e-12");
  v.expect(min_rho >= 0, "ODE densities nonnegative (min " + fmt(min_rho) + ")");

  const double beta = 0.3;
  const auto two = make_graph(Matrix::from_rows({{1 - beta, 0}, {beta, 1}}), 1.0, PerVertexRates{{1, 0}}, {half, half});
  const auto tr = density_ode_solve(two, {1.0, 0.0}, 5.0, 1e-3);
  double ode_err = 0;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    ode_err = std::max(ode_err, std::abs(tr.rho[k][0] - std::exp(-beta * tr.times[k])));
  v.expect(ode_err <= 1e-8, "two-vertex ODE rho1 vs e^{-0.3t}, max error " + fmt(ode_err) + " <= 1e-8");

  const std::size_t np = 200000;
  const double dt = 0.01;
  GraphEnsemble e = make_graph_ensemble({{1.0, UniformInterval{0, 1}}, {0.0, UniformInterval{0, 1}}}, np, dt, 31);
  bool count_ok = true, occ_ok = true, nonneg = true;
  double worst = 0;
  for (std::uint64_t it = 1; it <= 500; ++it) {
    graph_step(e, two);
    count_ok = count_ok && e.states.size() == np;
    if (it % 100) continue;
    const auto occ = e.occupancy(2);
    const double r1 = std::exp(-beta * e.t);
    const double tol = 4 * std::sqrt(r1 * (1 - r1) / double(np));
    worst = std::max(worst, std::abs(occ[0] - r1) / tol);
    occ_ok = occ_ok && std::abs(occ[0] - r1) <= tol && occ[0] + occ[1] == 1.0;
  }
  for (double x : e.states) nonneg = nonneg && x >= 0;
  v.expect(count_ok, "graph MC particle count conserved exactly");
  v.expect(occ_ok, "MC occupancy within 4 sqrt(rho1(1-rho1)/N_p) at t = 1..5 (worst " + fmt(worst) + " of the band)");
  v.expect(nonneg, "graph MC states stay nonnegative");
  return v;
}

Verdict a8() {
  Verdict v;
  const auto dir = workdir("a8");
  const auto cfg = write_config(
      dir,
      "experiment = two_vertex\nseed = 11\nN_p = 200000\nT = 3\neps = 1e-3\ndt_over_eps = 1\nsnapshots = 1, 3\n"
      "[graph]\nbeta = 0.3\nchi = 1\nmu1 = 1\nmu2 = 0\nrho10 = 0.6\nM110 = 1\nlambda1 = 3.5\nsigma1_sq = 6\n"
      "g20_mean = 0\ng20_variance = 0.25\n");
  const auto r = run_tool({"run", cfg.string(), "--out", (dir / "out").string()});
  v.expect(r.exit_code == 0, "run exit code " + std::to_string(r.exit_code));
  if (r.exit_code != 0) return v;
  const auto m = manifest(dir / "out");
  for (const auto& s : m["derived"]["snapshots"]) {
    const double t = s["t"];
    for (const char* key : {"l1_vertex1", "l1_vertex2"}) {
      const double l1 = s[key];
      v.expect(l1 <= 0.08, "t=" + fmt(t) + " " + key + " " + fmt(l1) + " <= 0.08");
    }
  }
  const auto tr = read_trace_csv(dir / "out" / "rho_trace.csv");
  double worst = 0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    if (!(tr.columns[0][k] > 0)) continue;
    worst = std::max(worst, std::abs(tr.columns[2][k] - 1));
  }
  v.expect(worst <= 0.03, "vertex-1 mean within 1 +- 0.03 while occupied (max deviation " + fmt(worst) + ")");
  return v;
}

Verdict a9(const A1Runs& runs) {
  Verdict v;
  std::size_t compared = 0;
  const bool same = runs.r1.exit_code == 0 && runs.r4.exit_code == 0 && same_artifacts(runs.w1, runs.w4, compared);
  v.expect(same, "A1 artifacts byte-identical for --workers 1 and 4 (" + std::to_string(compared) + " files)");
  v.expect(runs.r1.seconds < 120, "A1 run with 1 worker took " + fmt(runs.r1.seconds) + " s < 120 s");
  v.expect(runs.r4.seconds < 120, "A1 run with 4 workers took " + fmt(runs.r4.seconds) + " s < 120 s");

  // Peak memory per particle at N_p = 1e6 against a short and a longer horizon.
  const auto dir = workdir("a9_memory");
  auto cfg_for = [&](const std::string& name, std::size_t np, double T) {
    return write_config(dir / name,
                        "experiment = fig1\nseed = 1\nN_p = " + std::to_string(np) + "\nT = " + fmt(T) +
                            "\neps = 1e-3\n[histogram]\nbins = 100\nrange = 0, 6\n");
  };
  for (const char* d : {"small", "big", "big_long"}) fs::create_directories(dir / d);
  const auto small = run_tool({"run", cfg_for("small", 200000, 0.05).string(), "--out", (dir / "small" / "out").string()});
  const auto big = run_tool({"run", cfg_for("big", 1000000, 0.05).string(), "--out", (dir / "big" / "out").string()});
  const auto big_long =
      run_tool({"run", cfg_for("big_long", 1000000, 0.2).string(), "--out", (dir / "big_long" / "out").string()});
  v.expect(small.exit_code == 0 && big.exit_code == 0 && big_long.exit_code == 0, "N_p = 1e6 runs complete");
  const double per_particle = 1024.0 * double(big.max_rss_kb - small.max_rss_kb) / 800000.0;
  v.expect(per_particle <= 128, "peak RSS " + fmt(small.max_rss_kb / 1024.0) + " MB at 2e5, " +
                                    fmt(big.max_rss_kb / 1024.0) + " MB at 1e6: " + fmt(per_particle) +
                                    " bytes per extra particle <= 128");
  v.expect(big_long.max_rss_kb <= big.max_rss_kb * 1.05 + 4096,
           "4x horizon at 1e6 peaks at " + fmt(big_long.max_rss_kb / 1024.0) + " MB (no growth with time)");
  return v;
}

}  // namespace

int main() {
  std::cout << std::unitbuf;
  bool all = true;
  auto report = [&](const char* id, const char* title, const Verdict& v) {
    std::cout << id << " " << (v.pass ? "PASS" : "FAIL") << "  " << title << "\n";
    for (const auto& n : v.notes) std::cout << "     " << n << "\n";
    all = all && v.pass;
  };
  auto guarded = [&](const char* id, const char* title, auto&& fn) {
    try {
      report(id, title, fn());
    } catch (const std::exception& e) {
      Verdict v;
      v.expect(false, std::string("exception: ") + e.what());
      report(id, title, v);
    }
  };
  A1Runs runs;
  try {
    runs = run_a1_pair();
  } catch (const std::exception& e) {
    std::cerr << "A1 runs failed: " << e.what() << "\n";
  }
  guarded("A1", "inverse-gamma equilibrium", [&] { return a1(runs); });
  guarded("A2", "transport self-similar solution", a2);
  guarded("A3", "conserved-energy Gaussian fixed point", a3);
  guarded("A4", "support preservation", a4);
  guarded("A5", "moment closed forms vs Monte Carlo", a5);
  guarded("A6", "Fourier metric properties", a6);
  guarded("A7", "graph densities", a7);
  guarded("A8", "two-vertex closed-form solution", a8);
  guarded("A9", "determinism and performance", [&] { return a9(runs); });
  return all ? 0 : 1;
}
