#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kinetic/histogram.hpp"
#include "kinetic/kinetics.hpp"

namespace kinetic {

struct Ensemble {
  std::vector<double> states;
  double dt = 0;
  double t = 0;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
  // Bernoulli parameter of the per-pair interaction gate.
  double interaction_rate_param = 0;

  // Throws std::invalid_argument on odd/empty populations or a gate outside (0, 1].
  void validate() const;
};

Ensemble make_ensemble(std::vector<double> states, double dt, std::uint64_t seed, double interaction_rate_param);

// One Nanbu-Babovsky iteration: keyed Fisher-Yates shuffle, then pair i with
// i + N/2; each pair uses its own substream so `workers` never changes results.
void step(Ensemble& e, const InteractionLaw& law, unsigned workers = 1);

enum class Statistic { Mean, Energy, Variance, Min, Max };

std::string statistic_name(Statistic s);

using Observer = std::function<void(const Ensemble&)>;

struct RunOptions {
  std::vector<Statistic> statistics;
  std::vector<Observer> observers;
  unsigned workers = 1;
};

// Times plus one column per requested statistic; row 0 is the initial state.
struct EnsembleTrace {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
};

// Number of whole steps of size dt that fit in T.
std::uint64_t step_count(double T, double dt);

EnsembleTrace run(Ensemble& e, const InteractionLaw& law, double T, const RunOptions& options = {});

// Algorithm 2: materializes the eps-scaled law and gates pairs at dt/eps.
EnsembleTrace run_quasi_invariant(Ensemble& e, const ScalingRegime& regime, double eps, double T,
                                  const RunOptions& options = {});

// Mean of v^n with pairwise summation; n in [0, 8].
double ensemble_moment(std::span<const double> states, int n);
// M2 - M1^2, clamped to zero when it is negative by less than 1e-12 (relative
// to M2).
double ensemble_variance(std::span<const double> states);

double pairwise_sum(std::span<const double> values);

}  // namespace kinetic
