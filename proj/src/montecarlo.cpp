#include "kinetic/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kinetic/parallel.hpp"
#include "kinetic/rng.hpp"

namespace kinetic {

void Ensemble::validate() const {
  if (states.size() < 2 || states.size() % 2 != 0)
    throw std::invalid_argument("ensemble size must be even and >= 2, got " + std::to_string(states.size()));
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  if (!(interaction_rate_param > 0 && interaction_rate_param <= 1))
    throw std::invalid_argument("interaction gate must lie in (0, 1], got " + std::to_string(interaction_rate_param));
}

Ensemble make_ensemble(std::vector<double> states, double dt, std::uint64_t seed, double interaction_rate_param) {
  Ensemble e;
  e.states = std::move(states);
  e.dt = dt;
  e.seed = seed;
  e.interaction_rate_param = interaction_rate_param;
  e.validate();
  return e;
}

void step(Ensemble& e, const InteractionLaw& law, unsigned workers) {
  auto& v = e.states;
  const std::size_t n = v.size();
  RngStream perm(e.seed, {run_id(StreamTag::Permute), e.iteration, 0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(v[i], v[perm.below(i + 1)]);

  const std::size_t half = n / 2;
  const double gate = e.interaction_rate_param;
  const std::uint64_t seed = e.seed;
  const std::uint64_t iteration = e.iteration;
  const std::uint64_t pair_run = run_id(StreamTag::Pair);
  parallel_for(half, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      RngStream rng(seed, {pair_run, iteration, k});
      if (!(rng.uniform() < gate)) continue;
      const double p = law.p.draw(rng);
      const double q = law.q.draw(rng);
      const double a = v[k];
      const double b = v[k + half];
      v[k] = interact(a, b, p, q);
      v[k + half] = interact(b, a, p, q);
    }
  });
  ++e.iteration;
  e.t = e.dt * static_cast<double>(e.iteration);
}

std::string statistic_name(Statistic s) {
  switch (s) {
    case Statistic::Mean: return "M1";
    case Statistic::Energy: return "M2";
    case Statistic::Variance: return "variance";
    case Statistic::Min: return "min";
    case Statistic::Max: return "max";
  }
  return "?";
}

const std::vector<double>& EnsembleTrace::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("trace has no column " + name);
  return columns[static_cast<std::size_t>(it - names.begin())];
}

std::uint64_t step_count(double T, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  if (!(T >= 0)) throw std::invalid_argument("T must be >= 0");
  // Guard against T/dt landing a hair below an integer.
  return static_cast<std::uint64_t>(std::floor(T / dt * (1.0 + 1e-12)));
}

namespace {

double evaluate(Statistic s, std::span<const double> v) {
  switch (s) {
    case Statistic::Mean: return ensemble_moment(v, 1);
    case Statistic::Energy: return ensemble_moment(v, 2);
    case Statistic::Variance: return ensemble_variance(v);
    case Statistic::Min: return *std::min_element(v.begin(), v.end());
    case Statistic::Max: return *std::max_element(v.begin(), v.end());
  }
  return 0.0;
}

EnsembleTrace run_gated(Ensemble& e, const InteractionLaw& law, double T, const RunOptions& options) {
  e.validate();
  law.validate();
  EnsembleTrace trace;
  for (Statistic s : options.statistics) trace.names.push_back(statistic_name(s));
  trace.columns.resize(options.statistics.size());
  auto record = [&] {
    trace.times.push_back(e.t);
    for (std::size_t j = 0; j < options.statistics.size(); ++j)
      trace.columns[j].push_back(evaluate(options.statistics[j], e.states));
    for (const auto& obs : options.observers) obs(e);
  };
  record();
  const std::uint64_t steps = step_count(T, e.dt);
  for (std::uint64_t k = 0; k < steps; ++k) {
    step(e, law, options.workers);
    record();
  }
  return trace;
}

}  // namespace

EnsembleTrace run(Ensemble& e, const InteractionLaw& law, double T, const RunOptions& options) {
  if (!(T > 0)) throw std::invalid_argument("T must be > 0");
  if (e.dt > 1.0) throw std::invalid_argument("Algorithm 1 needs dt <= 1");
  return run_gated(e, law, T, options);
}

EnsembleTrace run_quasi_invariant(Ensemble& e, const ScalingRegime& regime, double eps, double T,
                                  const RunOptions& options) {
  if (!(T > 0)) throw std::invalid_argument("T must be > 0");
  const MaterializedLaw m = materialize(regime, eps);
  if (e.dt > eps * (1.0 + 1e-12)) throw std::invalid_argument("Algorithm 2 needs dt <= eps");
  e.interaction_rate_param = std::min(1.0, e.dt / eps);
  return run_gated(e, m.law, T, options);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 128;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double x : values) s += x;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

double ensemble_moment(std::span<const double> states, int n) {
  if (n < 0 || n > 8) throw std::invalid_argument("moment order must be in [0, 8]");
  if (states.empty()) throw std::invalid_argument("empty state array");
  if (n == 0) return 1.0;
  if (n == 1) return pairwise_sum(states) / static_cast<double>(states.size());
  std::vector<double> powers(states.size());
  std::transform(states.begin(), states.end(), powers.begin(), [n](double x) {
    double r = x;
    for (int k = 1; k < n; ++k) r *= x;
    return r;
  });
  return pairwise_sum(powers) / static_cast<double>(states.size());
}

double ensemble_variance(std::span<const double> states) {
  const double m1 = ensemble_moment(states, 1);
  const double m2 = ensemble_moment(states, 2);
  const double var = m2 - m1 * m1;
  if (var >= 0) return var;
  if (var >= -1e-12 * std::max(1.0, m2)) return 0.0;
  throw std::logic_error("negative ensemble variance beyond rounding");
}

}  // namespace kinetic
