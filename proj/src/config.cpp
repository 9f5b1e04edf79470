#include "kinetic/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ValidationError(key, "'" + v + "' is not a finite number");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  // Accept 2e5 style as long as it is integral.
  const double x = to_double(key, v);
  if (x < 0 || x != std::floor(x) || x > 1.8e19) throw ValidationError(key, "'" + v + "' is not a nonnegative integer");
  return static_cast<std::uint64_t>(x);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ValidationError(key, "empty list");
  return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

InitialSpec& initial_of(RunConfig& c, bool second) { return second ? c.initial2 : c.initial; }

std::map<std::string, Setter> make_setters() {
  std::map<std::string, Setter> s;
  s["experiment"] = [](RunConfig& c, const std::string&, const std::string& v) { c.experiment = v; };
  s["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_uint(k, v); };
  s["N_p"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.n_particles = to_uint(k, v); };
  s["T"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.T = to_double(k, v); };
  s["dt"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.dt = to_double(k, v); };
  s["dt_over_eps"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.dt_over_eps = to_list(k, v); };
  s["eps"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.eps = to_list(k, v); };
  s["snapshots"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.snapshots = to_list(k, v); };
  s["out_dir"] = [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; };

  s["law.kind"] = [](RunConfig& c, const std::string& k, const std::string& v) {
    if (v == "advection_diffusion") c.law.kind = LawKind::AdvectionDiffusion;
    else if (v == "advection_dominated") c.law.kind = LawKind::AdvectionDominated;
    else if (v == "conserved_energy") c.law.kind = LawKind::ConservedEnergy;
    else if (v == "explicit") c.law.kind = LawKind::Explicit;
    else throw ValidationError(k, "unknown law kind '" + v + "'");
  };
  s["law.eta"] = [](RunConfig& c, const std::string& k, const std::string& v) {
    if (v == "uniform") c.law.eta = EtaKind::Uniform;
    else if (v == "two_point") c.law.eta = EtaKind::TwoPoint;
    else throw ValidationError(k, "eta must be uniform or two_point");
  };
  auto law_num = [&s](const std::string& name, double LawSpec::*field) {
    s["law." + name] = [field](RunConfig& c, const std::string& k, const std::string& v) {
      c.law.*field = to_double(k, v);
    };
  };
  law_num("lambda", &LawSpec::lambda);
  law_num("sigma_sq", &LawSpec::sigma_sq);
  law_num("delta", &LawSpec::delta);
  law_num("p_mean", &LawSpec::p_mean);
  law_num("p_var", &LawSpec::p_var);
  law_num("q", &LawSpec::q);

  for (const bool second : {false, true}) {
    const std::string sec = second ? "initial2." : "initial.";
    s[sec + "kind"] = [second](RunConfig& c, const std::string& k, const std::string& v) {
      if (v != "uniform" && v != "two_point" && v != "gaussian")
        throw ValidationError(k, "initial kind must be uniform, two_point or gaussian");
      initial_of(c, second).kind = v;
    };
    for (const auto& [name, field] : std::vector<std::pair<std::string, double InitialSpec::*>>{
             {"a", &InitialSpec::a},
             {"b", &InitialSpec::b},
             {"x", &InitialSpec::x},
             {"mean", &InitialSpec::mean},
             {"variance", &InitialSpec::variance}}) {
      s[sec + name] = [second, field = field](RunConfig& c, const std::string& k, const std::string& v) {
        initial_of(c, second).*field = to_double(k, v);
      };
    }
  }

  s["histogram.bins"] = [](RunConfig& c, const std::string& k, const std::string& v) {
    c.bin_count = to_uint(k, v);
    if (c.bins) c.bins->bins = c.bin_count;
  };
  s["histogram.range"] = [](RunConfig& c, const std::string& k, const std::string& v) {
    const auto r = to_list(k, v);
    if (r.size() != 2) throw ValidationError(k, "range needs two values lo, hi");
    c.bins = UniformBins{r[0], r[1], c.bin_count};
  };
  s["xi.min"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.xi_min = to_double(k, v); };
  s["xi.max"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.xi_max = to_double(k, v); };
  s["xi.per_side"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.xi_per_side = to_uint(k, v); };

  auto graph_num = [&s](const std::string& name, double GraphSpec::*field) {
    s["graph." + name] = [field](RunConfig& c, const std::string& k, const std::string& v) {
      c.graph.*field = to_double(k, v);
    };
  };
  graph_num("beta", &GraphSpec::beta);
  graph_num("chi", &GraphSpec::chi);
  graph_num("mu", &GraphSpec::mu);
  graph_num("mu1", &GraphSpec::mu1);
  graph_num("mu2", &GraphSpec::mu2);
  graph_num("rho10", &GraphSpec::rho10);
  graph_num("M110", &GraphSpec::M110);
  graph_num("lambda1", &GraphSpec::lambda1);
  graph_num("sigma1_sq", &GraphSpec::sigma1_sq);
  graph_num("g20_mean", &GraphSpec::g20_mean);
  graph_num("g20_variance", &GraphSpec::g20_variance);
  graph_num("edge_prob", &GraphSpec::edge_prob);
  s["graph.n_vertices"] = [](RunConfig& c, const std::string& k, const std::string& v) {
    c.graph.n_vertices = to_uint(k, v);
  };
  s["graph.trials"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.graph.trials = to_uint(k, v); };
  s["graph.samples"] = [](RunConfig& c, const std::string& k, const std::string& v) {
    c.graph.samples = to_uint(k, v);
  };
  return s;
}

const std::map<std::string, Setter>& setters() {
  static const auto s = make_setters();
  return s;
}

std::string suggest(const std::string& full) {
  const auto leaf_of = [](const std::string& k) {
    const auto dot = k.rfind('.');
    return dot == std::string::npos ? k : k.substr(dot + 1);
  };
  const std::string leaf = leaf_of(full);
  std::string best;
  std::size_t best_d = 4;  // farther than 3 edits is not a typo
  for (const auto& [key, _] : setters()) {
    const std::size_t d = edit_distance(leaf, leaf_of(key));
    if (d < best_d) {
      best_d = d;
      best = key;
    }
  }
  if (best.empty()) return {};
  const auto dot = best.rfind('.');
  const std::string where = dot == std::string::npos ? "top level" : "[" + best.substr(0, dot) + "]";
  return "; did you mean '" + leaf_of(best) + "' (" + where + ")?";
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "cons_energy_sigma0", "two_vertex", "d2_contraction",
                                              "perron"};
  return names;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  std::vector<std::pair<std::string, std::string>> pending;
  std::vector<std::size_t> pending_lines;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!setters().count(full)) throw ParseError(line_no, "unknown key '" + full + "'" + suggest(full));
    for (const auto& [k, _] : pending)
      if (k == full) throw ParseError(line_no, "duplicate key '" + full + "'");
    pending.emplace_back(full, value);
    pending_lines.push_back(line_no);
  }
  // Order matters for histogram.bins vs histogram.range, so apply ranges last.
  std::stable_partition(pending.begin(), pending.end(), [](const auto& kv) { return kv.first != "histogram.range"; });
  std::vector<std::string> problems;
  std::string first_key;
  for (const auto& [k, v] : pending) {
    try {
      setters().at(k)(cfg, k, v);
    } catch (const ValidationError& e) {
      if (first_key.empty()) first_key = e.key;
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += (all.empty() ? "" : "; ") + p;
    throw ValidationError(first_key, all);
  }
  cfg.echo = pending;
  if (cfg.experiment.empty()) throw ValidationError("experiment", "is required");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("path", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config(ss.str());
  if (const char* env = std::getenv("KINETIC_MC_SEED"); env && *env) {
    cfg.seed = to_uint("KINETIC_MC_SEED", env);
    cfg.seed_from_env = true;
  }
  validate_config(cfg);
  return cfg;
}

ScalingRegime make_regime(const LawSpec& spec) {
  const double sigma = std::sqrt(spec.sigma_sq);
  RandomCoefficient eta = spec.eta == EtaKind::Uniform ? RandomCoefficient::centered_uniform(1.0)
                                                       : RandomCoefficient::two_point(-1.0, 0.5, 1.0, 0.5);
  switch (spec.kind) {
    case LawKind::AdvectionDiffusion: return AdvectionDiffusion{spec.lambda, sigma, eta};
    case LawKind::AdvectionDominated: return AdvectionDominated{spec.lambda, sigma, spec.delta, eta};
    case LawKind::ConservedEnergy: return ConservedEnergy{spec.lambda, sigma, eta};
    case LawKind::Explicit: break;
  }
  throw std::invalid_argument("explicit laws have no scaling regime");
}

InteractionLaw make_explicit_law(const LawSpec& spec) {
  RandomCoefficient p = spec.p_var > 0
                            ? RandomCoefficient::affine(spec.p_mean, 1.0, RandomCoefficient::centered_uniform(spec.p_var))
                            : RandomCoefficient::constant(spec.p_mean);
  return {p, RandomCoefficient::constant(spec.q)};
}

InitialCondition make_initial(const InitialSpec& spec) {
  if (spec.kind == "uniform") return UniformInterval{spec.a, spec.b};
  if (spec.kind == "two_point") return TwoPointSym{spec.x};
  return AnalyticDistribution{Gaussian{spec.mean, spec.variance}};
}

XiGrid make_grid(const RunConfig& cfg) { return make_xi_grid(cfg.xi_min, cfg.xi_max, cfg.xi_per_side); }

double step_for(const RunConfig& cfg, double eps) {
  if (cfg.dt) return *cfg.dt;
  if (cfg.dt_over_eps.size() == 1) return cfg.dt_over_eps.front() * eps;
  const auto it = std::find(cfg.eps.begin(), cfg.eps.end(), eps);
  if (it == cfg.eps.end() || cfg.dt_over_eps.size() != cfg.eps.size())
    throw std::invalid_argument("dt_over_eps has no entry for eps");
  return cfg.dt_over_eps[static_cast<std::size_t>(it - cfg.eps.begin())] * eps;
}

void validate_config(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> problems;
  auto fail = [&](const std::string& key, const std::string& why) { problems.emplace_back(key, why); };
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    fail("experiment", "unknown experiment '" + cfg.experiment + "'");
  if (cfg.n_particles < 2 || cfg.n_particles % 2) fail("N_p", "must be even and >= 2");
  if (!(cfg.T > 0)) fail("T", "must be > 0");
  if (cfg.dt && !(*cfg.dt > 0 && *cfg.dt <= 1)) fail("dt", "must lie in (0, 1]");
  for (double r : cfg.dt_over_eps)
    if (!(r > 0 && r <= 1)) fail("dt_over_eps", "entries must lie in (0, 1]");
  if (cfg.dt_over_eps.size() != 1 && cfg.dt_over_eps.size() != cfg.eps.size())
    fail("dt_over_eps", "give one ratio or one per eps entry");
  for (double s : cfg.snapshots)
    if (s < 0 || s > cfg.T * (1 + 1e-12)) fail("snapshots", "times must lie in [0, T]");
  if (cfg.bin_count < 1) fail("histogram.bins", "must be >= 1");
  if (cfg.bins && !(cfg.bins->hi > cfg.bins->lo)) fail("histogram.range", "needs lo < hi");
  if (!(cfg.xi_min > 0 && cfg.xi_max > cfg.xi_min)) fail("xi", "needs 0 < min < max");
  if (cfg.xi_per_side < 2) fail("xi.per_side", "must be >= 2");
  for (const auto* init : {&cfg.initial, &cfg.initial2}) {
    if (init->kind == "uniform" && !(init->b > init->a)) fail("initial", "uniform needs a < b");
    if (init->kind == "gaussian" && !(init->variance > 0)) fail("initial", "gaussian needs variance > 0");
  }

  if (cfg.law.kind != LawKind::Explicit) {
    if (cfg.law.sigma_sq < 0) {
      fail("law.sigma_sq", "must be >= 0");
    } else {
      try {
        const ScalingRegime regime = make_regime(cfg.law);
        const double eps_max = regime_eps_max(regime);
        for (double e : cfg.eps) {
          if (!(e > 0)) fail("eps", "must be > 0");
          else if (!(e < eps_max))
            fail("eps", "eps = " + std::to_string(e) + " is not below the admissible bound eps_max = " +
                            std::to_string(eps_max));
          else if (step_for(cfg, e) > e * (1 + 1e-12))
            fail("dt", "must not exceed eps in the quasi-invariant scheme");
        }
      } catch (const ValidationError&) {
        throw;
      } catch (const std::exception& ex) {
        fail("law", ex.what());
      }
    }
  } else {
    try {
      make_explicit_law(cfg.law).validate();
    } catch (const std::exception& ex) {
      fail("law", ex.what());
    }
  }

  const auto& g = cfg.graph;
  if (!(g.chi > 0)) fail("graph.chi", "must be > 0");
  if (!(g.beta >= 0 && g.beta <= 1)) fail("graph.beta", "must lie in [0, 1]");
  if (!(g.rho10 > 0 && g.rho10 < 1)) fail("graph.rho10", "must lie in (0, 1)");
  if (!(g.mu > 0)) fail("graph.mu", "must be > 0");
  if (!(g.mu1 >= 0 && g.mu2 >= 0)) fail("graph.mu1", "rates must be >= 0");
  if (!(g.lambda1 > 0 && g.sigma1_sq > 0)) fail("graph.lambda1", "lambda1 and sigma1_sq must be > 0");
  if (!(g.g20_variance > 0)) fail("graph.g20_variance", "must be > 0");
  if (g.n_vertices < 1 || g.n_vertices > 64) fail("graph.n_vertices", "must lie in [1, 64]");
  if (!(g.edge_prob >= 0 && g.edge_prob <= 1)) fail("graph.edge_prob", "must lie in [0, 1]");
  if (g.trials < 1) fail("graph.trials", "must be >= 1");
  if (g.samples < 3) fail("graph.samples", "must be >= 3");

  if (!problems.empty()) {
    std::string all;
    for (const auto& [k, why] : problems) all += (all.empty() ? "" : "; ") + k + ": " + why;
    throw ValidationError(problems.front().first, all);
  }
}

}  // namespace kinetic
