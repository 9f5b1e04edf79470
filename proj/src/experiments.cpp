#include "kinetic/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

#include "kinetic/csv.hpp"
#include "kinetic/equilibria.hpp"
#include "kinetic/errors.hpp"
#include "kinetic/fourier.hpp"
#include "kinetic/graph.hpp"
#include "kinetic/montecarlo.hpp"

namespace kinetic {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Context {
  const RunConfig& cfg;
  unsigned workers;
  fs::path dir;
  std::ostream& log;
  Json derived = Json::object();
  Json timings = Json::object();
  Json checks = Json::array();
  std::vector<std::string> warnings;
};

class Phase {
 public:
  Phase(Context& ctx, std::string name) : ctx_(ctx), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~Phase() {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    ctx_.timings[name_] = d.count();
  }

 private:
  Context& ctx_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

void check(Context& ctx, const std::string& name, bool ok, const std::string& detail) {
  ctx.checks.push_back({{"name", name}, {"passed", ok}, {"detail", detail}});
  if (!ok) ctx.log << "self-check failed: " << name << " (" << detail << ")\n";
}

std::string tag(double x) { return format_double(x); }

double initial_mean(const InitialSpec& s) {
  if (s.kind == "uniform") return 0.5 * (s.a + s.b);
  if (s.kind == "two_point") return 0.0;
  return s.mean;
}

double initial_energy(const InitialSpec& s) {
  if (s.kind == "uniform") return (s.a * s.a + s.a * s.b + s.b * s.b) / 3.0;
  if (s.kind == "two_point") return s.x * s.x;
  return s.mean * s.mean + s.variance;
}

std::vector<double> sample_initial(const RunConfig& cfg, const InitialSpec& spec) {
  RngStream rng(cfg.seed, {run_id(StreamTag::Initial), 0, 0});
  return sample_initial_condition(rng, make_initial(spec), cfg.n_particles);
}

Json report_json(const AdmissibilityReport& r) {
  return {{"mean_sum", r.mean_sum},
          {"energy_sum", r.energy_sum},
          {"cubic_sum", r.cubic_sum},
          {"pq_mean", r.pq_mean},
          {"eps_max", r.eps_max},
          {"eta_min_required", r.eta_min_required},
          {"mean_conserving", r.mean_conserving},
          {"energy_dissipative", r.energy_dissipative},
          {"cubic_contractive", r.cubic_contractive}};
}

std::vector<double> bin_centres(const Histogram& h) {
  std::vector<double> c(h.bins());
  for (std::size_t b = 0; b < h.bins(); ++b) c[b] = 0.5 * (h.edges[b] + h.edges[b + 1]);
  return c;
}

void write_overlay(const Histogram& h, const std::function<double(double)>& density, const fs::path& path) {
  const auto c = bin_centres(h);
  std::vector<double> d(c.size());
  for (std::size_t b = 0; b < c.size(); ++b) d[b] = density(c[b]);
  emit_table_csv({"v", "density"}, {c, d}, path);
}

Trace to_trace(const EnsembleTrace& t) { return {t.times, t.names, t.columns}; }

std::uint64_t snapshot_step(double s, double dt) { return static_cast<std::uint64_t>(std::llround(s / dt)); }

// Quasi-invariant single-population run with histograms at the snapshot times.
struct SnapshotRun {
  EnsembleTrace trace;
  std::vector<std::pair<double, Histogram>> hists;
  std::vector<double> final_states;
};

SnapshotRun run_with_snapshots(Context& ctx, const ScalingRegime& regime, double eps, double dt,
                               const std::function<HistogramSpec(std::span<const double>)>& spec) {
  const auto& cfg = ctx.cfg;
  Ensemble e = make_ensemble(sample_initial(cfg, cfg.initial), dt, cfg.seed, 1.0);
  std::vector<double> snaps = cfg.snapshots.empty() ? std::vector<double>{0.0, cfg.T} : cfg.snapshots;
  std::map<std::uint64_t, double> wanted;
  for (double s : snaps) wanted[snapshot_step(s, dt)] = s;
  SnapshotRun out;
  RunOptions opt;
  opt.statistics = {Statistic::Mean, Statistic::Energy, Statistic::Min, Statistic::Max};
  opt.workers = ctx.workers;
  opt.observers.push_back([&](const Ensemble& en) {
    for (double v : en.states)
      if (!std::isfinite(v)) throw Error("non-finite particle state at t = " + tag(en.t));
    const auto it = wanted.find(en.iteration);
    if (it != wanted.end()) out.hists.emplace_back(it->second, histogram(en.states, spec(en.states)));
  });
  out.trace = run_quasi_invariant(e, regime, eps, cfg.T, opt);
  out.final_states = e.states;
  check(ctx, "particle_count", e.states.size() == cfg.n_particles, "N_p preserved");
  return out;
}

void fig1(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ScalingRegime regime = make_regime(cfg.law);
  const auto* ad = std::get_if<AdvectionDiffusion>(&regime);
  if (!ad) throw Error("fig1 needs law.kind = advection_diffusion");
  const double M10 = initial_mean(cfg.initial);
  const AnalyticDistribution eq = advection_diffusion_equilibrium(ad->lambda, ad->sigma, M10);
  Json runs = Json::array();
  for (double eps : cfg.eps) {
    Phase ph(ctx, "fig1 eps=" + tag(eps));
    const double dt = step_for(cfg, eps);
    const fs::path sub = ctx.dir / ("eps_" + tag(eps));
    fs::create_directories(sub);
    const auto mat = materialize(regime, eps);
    const HistogramSpec spec = cfg.bins ? HistogramSpec{*cfg.bins} : HistogramSpec{UniformBins{0.0, 6.0, cfg.bin_count}};
    auto run = run_with_snapshots(ctx, regime, eps, dt, [&](std::span<const double>) { return spec; });
    Json snaps = Json::array();
    for (const auto& [t, h] : run.hists) {
      emit_histogram_csv(h, sub / ("histogram_t" + tag(t) + ".csv"));
      snaps.push_back({{"t", t}, {"l1_to_equilibrium", l1_distance(h, [&](double a, double b) { return bin_mass(eq, a, b); })}});
    }
    if (!run.hists.empty()) write_overlay(run.hists.back().second, [&](double v) { return pdf(eq, v); }, sub / "overlay.csv");
    emit_trace_csv(to_trace(run.trace), sub / "trace.csv");
    const double m1 = run.trace.column("M1").back();
    runs.push_back({{"eps", eps},
                    {"dt", dt},
                    {"admissibility", report_json(mat.report)},
                    {"snapshots", snaps},
                    {"terminal_mean", m1}});
    check(ctx, "finite_mean eps=" + tag(eps), std::isfinite(m1), "terminal mean " + tag(m1));
  }
  const auto& ig = std::get<InverseGamma>(eq);
  ctx.derived["equilibrium"] = {{"family", "inverse_gamma"}, {"shape", ig.shape}, {"scale", ig.scale},
                                {"reflected", ig.reflected}, {"describe", describe(eq)}};
  ctx.derived["runs"] = runs;
}

void fig2(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ScalingRegime regime = make_regime(cfg.law);
  const auto* adv = std::get_if<AdvectionDominated>(&regime);
  if (!adv) throw Error("fig2 needs law.kind = advection_dominated");
  BaseDensity base;
  if (cfg.initial.kind == "uniform") base = UniformDensity{cfg.initial.a, cfg.initial.b};
  else if (cfg.initial.kind == "gaussian") base = Gaussian{cfg.initial.mean, cfg.initial.variance};
  else throw Error("fig2 needs a uniform or gaussian initial law for the exact overlay");
  const double M10 = initial_mean(cfg.initial);
  const double eps = cfg.eps.front();
  const double dt = step_for(cfg, eps);
  Phase ph(ctx, "fig2");
  const auto mat = materialize(regime, eps);
  auto run = run_with_snapshots(ctx, regime, eps, dt, [&](std::span<const double> v) -> HistogramSpec {
    if (cfg.bins) return *cfg.bins;
    return default_histogram_spec(v, false, cfg.bin_count);
  });
  Json snaps = Json::array();
  for (const auto& [t, h] : run.hists) {
    const AnalyticDistribution exact = TransportSelfSimilar{base, adv->lambda, M10, t};
    emit_histogram_csv(h, ctx.dir / ("histogram_t" + tag(t) + ".csv"));
    write_overlay(h, [&](double v) { return pdf(exact, v); }, ctx.dir / ("overlay_t" + tag(t) + ".csv"));
    snaps.push_back({{"t", t}, {"l1_to_exact", l1_distance(h, [&](double a, double b) { return bin_mass(exact, a, b); })}});
  }
  emit_trace_csv(to_trace(run.trace), ctx.dir / "trace.csv");
  const double lam = adv->lambda;
  const double s2 = adv->sigma * adv->sigma;
  const double denom = 2 * lam * (1 - eps * lam) - std::pow(eps, adv->delta) * s2;
  ctx.derived["eps"] = eps;
  ctx.derived["dt"] = dt;
  ctx.derived["admissibility"] = report_json(mat.report);
  ctx.derived["exact_solution"] = {{"family", "transport_self_similar"}, {"lambda", lam}, {"M10", M10}};
  ctx.derived["energy_limit_eps_corrected"] = 2 * lam * (1 - eps * lam) / denom * M10 * M10;
  ctx.derived["snapshots"] = snaps;
  ctx.derived["terminal_mean"] = run.trace.column("M1").back();
  ctx.derived["terminal_energy"] = run.trace.column("M2").back();
}

void cons_energy_sigma0(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ScalingRegime regime = make_regime(cfg.law);
  const auto* ce = std::get_if<ConservedEnergy>(&regime);
  if (!ce) throw Error("cons_energy_sigma0 needs law.kind = conserved_energy");
  if (ce->sigma != 0.0) throw Error("cons_energy_sigma0 needs law.sigma_sq = 0");
  const double eps = cfg.eps.front();
  const double dt = step_for(cfg, eps);
  const double M20 = initial_energy(cfg.initial);
  const AnalyticDistribution gauss = Gaussian{0.0, M20};
  ctx.warnings.push_back(
      "the Gaussian state is an unstable equilibrium of the equation for the mean; the particle mean is amplified "
      "at every step, so only short horizons are meaningful");
  Phase ph(ctx, "cons_energy_sigma0");
  const auto mat = materialize(regime, eps);
  auto run = run_with_snapshots(ctx, regime, eps, dt, [&](std::span<const double>) -> HistogramSpec {
    if (cfg.bins) return *cfg.bins;
    const double w = 4.0 * std::sqrt(M20);
    return UniformBins{-w, w, cfg.bin_count};
  });
  Json snaps = Json::array();
  for (const auto& [t, h] : run.hists) {
    emit_histogram_csv(h, ctx.dir / ("histogram_t" + tag(t) + ".csv"));
    snaps.push_back({{"t", t}, {"l1_to_gaussian", l1_distance(h, [&](double a, double b) { return bin_mass(gauss, a, b); })}});
  }
  if (!run.hists.empty()) write_overlay(run.hists.back().second, [&](double v) { return pdf(gauss, v); }, ctx.dir / "overlay.csv");
  emit_trace_csv(to_trace(run.trace), ctx.dir / "trace.csv");
  std::vector<double> xi;
  for (int k = -500; k <= 500; ++k) xi.push_back(0.01 * k);
  ctx.derived["eps"] = eps;
  ctx.derived["dt"] = dt;
  ctx.derived["admissibility"] = report_json(mat.report);
  ctx.derived["overlay"] = {{"family", "gaussian"}, {"mean", 0.0}, {"variance", M20}};
  ctx.derived["fixed_point_residual"] = gaussian_fixed_point_residual(ce->lambda, eps, M20, xi);
  ctx.derived["snapshots"] = snaps;
  ctx.derived["terminal_energy"] = run.trace.column("M2").back();
}

void two_vertex(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& gs = cfg.graph;
  const double eps = cfg.eps.front();
  const double dt = step_for(cfg, eps);
  const ScalingRegime regime = AdvectionDiffusion{gs.lambda1, std::sqrt(gs.sigma1_sq), RandomCoefficient::centered_uniform(1.0)};
  const auto mat = materialize(regime, eps);
  const Matrix P = Matrix::from_rows({{1 - gs.beta, 0.0}, {gs.beta, 1.0}});
  GraphModel g = make_graph(P, gs.chi, PerVertexRates{{gs.mu1, gs.mu2}}, {mat.law, mat.law});
  g = scale_transitions(g, eps);
  g.rate_scale = 1.0 / eps;
  g.validate();

  GraphTwoVertexPair pair;
  pair.rho10 = gs.rho10;
  pair.M110 = gs.M110;
  pair.lambda1 = gs.lambda1;
  pair.sigma1 = std::sqrt(gs.sigma1_sq);
  pair.beta = gs.beta * gs.chi;
  pair.g20_profile = Gaussian{gs.g20_mean, gs.g20_variance};
  const double k = 2 * gs.lambda1 / gs.sigma1_sq;
  const AnalyticDistribution h_profile = InverseGamma{1 + k, k * gs.M110, false};

  Phase ph(ctx, "two_vertex");
  GraphEnsemble e = make_graph_ensemble({{gs.rho10, AnalyticDistribution{h_profile}},
                                         {1 - gs.rho10, AnalyticDistribution{Gaussian{gs.g20_mean, gs.g20_variance}}}},
                                        cfg.n_particles, dt, cfg.seed);
  std::vector<double> snaps = cfg.snapshots.empty() ? std::vector<double>{0.0, cfg.T} : cfg.snapshots;
  std::map<std::uint64_t, double> wanted;
  for (double s : snaps) wanted[snapshot_step(s, dt)] = s;
  Trace rho_trace{{}, {"rho1", "rho2", "M1_vertex1", "M1_vertex2"}, std::vector<std::vector<double>>(4)};
  Json snap_json = Json::array();
  const std::uint64_t steps = step_count(cfg.T, dt);
  const std::uint64_t stride = std::max<std::uint64_t>(1, steps / 1000);
  for (std::uint64_t it = 0;; ++it) {
    const bool snap = wanted.count(it) > 0;
    if (snap || it % stride == 0 || it == steps) {
      std::vector<double> v1;
      std::vector<double> v2;
      for (std::size_t p = 0; p < e.states.size(); ++p) (e.vertex[p] == 0 ? v1 : v2).push_back(e.states[p]);
      const double r1 = static_cast<double>(v1.size()) / static_cast<double>(e.states.size());
      rho_trace.times.push_back(e.t);
      rho_trace.columns[0].push_back(r1);
      rho_trace.columns[1].push_back(1 - r1);
      rho_trace.columns[2].push_back(v1.empty() ? std::nan("") : ensemble_moment(v1, 1));
      rho_trace.columns[3].push_back(v2.empty() ? std::nan("") : ensemble_moment(v2, 1));
      if (snap) {
        const double t = wanted[it];
        const auto exact_mass = [&](double a, double b) { return graph_two_vertex_bin_mass(pair, a, b, t); };
        const double m1 = gs.rho10 * std::exp(-pair.beta * t);
        Json entry{{"t", t}, {"rho1", r1}};
        for (int vtx = 0; vtx < 2; ++vtx) {
          const auto& vs = vtx == 0 ? v1 : v2;
          if (vs.empty()) continue;
          const Histogram h = histogram(vs, cfg.bins ? HistogramSpec{*cfg.bins}
                                                     : HistogramSpec{default_histogram_spec(vs, true, cfg.bin_count)});
          const double mass = vtx == 0 ? m1 : 1 - m1;
          const std::string name = "vertex" + std::to_string(vtx + 1) + "_t" + tag(t);
          emit_histogram_csv(h, ctx.dir / ("histogram_" + name + ".csv"));
          write_overlay(h, [&](double v) {
            const auto val = graph_two_vertex_solution(pair, v, t);
            return (vtx == 0 ? val.g1 : val.g2) / mass;
          }, ctx.dir / ("overlay_" + name + ".csv"));
          entry["l1_vertex" + std::to_string(vtx + 1)] = l1_distance(h, [&](double a, double b) {
            const auto m = exact_mass(a, b);
            return vtx == 0 ? m.g1 : m.g2;
          }, mass);
        }
        snap_json.push_back(entry);
      }
    }
    if (it == steps) break;
    graph_step(e, g, ctx.workers);
  }
  emit_trace_csv(rho_trace, ctx.dir / "rho_trace.csv");
  check(ctx, "particle_count", e.states.size() == cfg.n_particles, "mass is the particle count");
  ctx.derived["eps"] = eps;
  ctx.derived["dt"] = dt;
  ctx.derived["admissibility"] = report_json(mat.report);
  ctx.derived["h_profile"] = {{"family", "inverse_gamma"}, {"shape", 1 + k}, {"scale", k * gs.M110}};
  ctx.derived["rho1_exact_rate"] = pair.beta;
  ctx.derived["snapshots"] = snap_json;
}

void d2_contraction(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& gs = cfg.graph;
  if (cfg.law.kind != LawKind::Explicit) throw Error("d2_contraction needs law.kind = explicit");
  const InteractionLaw law = make_explicit_law(cfg.law);
  Matrix P;
  if (gs.n_vertices == 1) P = Matrix::identity(1);
  else if (gs.n_vertices == 2) P = Matrix::from_rows({{1 - gs.beta, gs.beta}, {gs.beta, 1 - gs.beta}});
  else throw Error("d2_contraction supports graph.n_vertices = 1 or 2");
  const GraphModel g = make_graph(P, gs.chi, NormalizedRate{gs.mu}, std::vector<InteractionLaw>(P.n, law));
  std::vector<VertexInitial> f0;
  std::vector<VertexInitial> g0;
  for (std::size_t i = 0; i < P.n; ++i) {
    f0.push_back({1.0 / static_cast<double>(P.n), make_initial(cfg.initial)});
    g0.push_back({1.0 / static_cast<double>(P.n), make_initial(cfg.initial2)});
  }
  D2ContractionOptions opt;
  opt.seed = cfg.seed;
  opt.n_particles = cfg.n_particles;
  opt.dt = cfg.dt.value_or(0.05);
  opt.samples = gs.samples;
  opt.grid = make_grid(cfg);
  opt.workers = ctx.workers;
  Phase ph(ctx, "d2_contraction");
  const auto rep = d2_contraction_experiment(g, f0, g0, cfg.T, gs.trials, opt);
  Trace tr;
  tr.times = rep.trials.front().times;
  Json trials = Json::array();
  for (std::size_t k = 0; k < rep.trials.size(); ++k) {
    tr.names.push_back("d2_trial" + std::to_string(k + 1));
    tr.columns.push_back(rep.trials[k].d2);
    trials.push_back({{"slope", rep.trials[k].fit.slope},
                      {"slope_stderr", rep.trials[k].fit.slope_stderr},
                      {"passed", rep.trials[k].passed}});
  }
  emit_trace_csv(tr, ctx.dir / "d2_trace.csv");
  ctx.derived["envelope_rate"] = rep.envelope_rate;
  ctx.derived["common_mean"] = rep.common_mean;
  ctx.derived["coupling"] = rep.coupling_note;
  ctx.derived["trials"] = trials;
  ctx.derived["all_passed"] = rep.all_passed;
  ctx.derived["law"] = report_json(law_statistics(law));
}

void perron(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& gs = cfg.graph;
  const Matrix A = random_strongly_connected_weights(gs.n_vertices, gs.edge_prob, cfg.seed);
  const InteractionLaw trivial{RandomCoefficient::constant(1.0), RandomCoefficient::constant(0.0)};
  const GraphModel g = make_graph_from_weights(A, gs.chi, NormalizedRate{1.0},
                                               std::vector<InteractionLaw>(gs.n_vertices, trivial));
  Phase ph(ctx, "perron");
  const auto eq = density_equilibrium(g);
  std::vector<double> rho0(gs.n_vertices, 0.0);
  rho0[0] = 1.0;
  const double dt_ode = cfg.dt.value_or(1e-3);
  const auto ode = density_ode_solve(g, rho0, cfg.T, dt_ode);
  Trace tr;
  const std::size_t stride = std::max<std::size_t>(1, ode.times.size() / 1000);
  double worst_mass = 0;
  for (std::size_t r = 0; r < ode.times.size(); ++r) {
    double sum = 0;
    for (double x : ode.rho[r]) sum += x;
    worst_mass = std::max(worst_mass, std::abs(sum - 1.0));
  }
  for (std::size_t i = 0; i < gs.n_vertices; ++i) tr.names.push_back("rho" + std::to_string(i + 1));
  tr.columns.resize(gs.n_vertices);
  for (std::size_t r = 0; r < ode.times.size(); r += stride) {
    tr.times.push_back(ode.times[r]);
    for (std::size_t i = 0; i < gs.n_vertices; ++i) tr.columns[i].push_back(ode.rho[r][i]);
  }
  if ((ode.times.size() - 1) % stride != 0) {
    tr.times.push_back(ode.times.back());
    for (std::size_t i = 0; i < gs.n_vertices; ++i) tr.columns[i].push_back(ode.rho.back()[i]);
  }
  emit_trace_csv(tr, ctx.dir / "rho_trace.csv");
  std::vector<double> idx;
  for (std::size_t i = 0; i < gs.n_vertices; ++i) idx.push_back(static_cast<double>(i + 1));
  emit_table_csv({"vertex", "rho"}, {idx, eq.rho}, ctx.dir / "perron.csv");
  double gap = 0;
  for (std::size_t i = 0; i < gs.n_vertices; ++i) gap = std::max(gap, std::abs(ode.rho.back()[i] - eq.rho[i]));
  check(ctx, "perron_residual", eq.residual <= 1e-12, "residual " + tag(eq.residual));
  check(ctx, "ode_mass", worst_mass <= 1e-12 * std::max(1.0, cfg.T), "max |sum rho - 1| = " + tag(worst_mass));
  Json P = Json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < g.size(); ++j) row.push_back(g.P(i, j));
    P.push_back(row);
  }
  ctx.derived["P"] = P;
  ctx.derived["perron_vector"] = eq.rho;
  ctx.derived["perron_residual"] = eq.residual;
  ctx.derived["perron_iterations"] = eq.iterations;
  ctx.derived["ode_vs_perron_max_abs"] = gap;
  ctx.derived["ode_max_mass_error"] = worst_mass;
}

void write_json(const Json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

ExperimentOutcome run_experiment(const RunConfig& cfg, unsigned workers, const fs::path& out_dir, std::ostream& log) {
  ExperimentOutcome outcome;
  outcome.out_dir = out_dir;
  Context ctx{cfg, std::max(1u, workers), out_dir, log, Json::object(), Json::object(), Json::array(), {}};
  try {
    fs::create_directories(out_dir);
    static const std::map<std::string, void (*)(Context&)> table{
        {"fig1", fig1},         {"fig2", fig2},
        {"cons_energy_sigma0", cons_energy_sigma0},
        {"two_vertex", two_vertex},
        {"d2_contraction", d2_contraction},
        {"perron", perron}};
    const auto it = table.find(cfg.experiment);
    if (it == table.end()) throw ValidationError("experiment", "unknown experiment '" + cfg.experiment + "'");
    {
      Phase total(ctx, "total");
      it->second(ctx);
    }
    Json manifest;
    manifest["tool"] = "kinetic-mc";
    manifest["version"] = kToolVersion;
    manifest["experiment"] = cfg.experiment;
    manifest["seed"] = cfg.seed;
    manifest["seed_source"] = cfg.seed_from_env ? "KINETIC_MC_SEED" : "config";
    Json echo = Json::object();
    for (const auto& [k, v] : cfg.echo) echo[k] = v;
    manifest["config"] = echo;
    manifest["derived"] = ctx.derived;
    manifest["self_checks"] = ctx.checks;
    manifest["warnings"] = ctx.warnings;
    write_json(manifest, out_dir / "manifest.json");
    write_json(ctx.timings, out_dir / "timings.json");
    for (const auto& c : ctx.checks) {
      if (!c["passed"].get<bool>()) {
        outcome.exit_code = kExitSelfCheck;
        outcome.message = "self-check failed: " + c["name"].get<std::string>();
        return outcome;
      }
    }
    for (const auto& w : ctx.warnings) log << "warning: " << w << '\n';
  } catch (const ValidationError& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = kExitRuntime;
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace kinetic
