#pragma once

#include <limits>
#include <variant>

#include "kinetic/sampling.hpp"

namespace kinetic {

// v' = p v + q v*, v*' = p v* + q v with p, q independent and nonnegative.
struct InteractionLaw {
  RandomCoefficient p;
  RandomCoefficient q;

  // Throws std::invalid_argument when either coefficient can be negative.
  void validate() const;
};

inline double interact(double v, double v_star, double p_draw, double q_draw) noexcept {
  return p_draw * v + q_draw * v_star;
}

struct AdmissibilityReport {
  double mean_sum = 0;    // <p+q>
  double energy_sum = 0;  // <p^2+q^2>
  double cubic_sum = 0;   // <p^3+q^3>
  double pq_mean = 0;     // <pq>
  // Only meaningful for a materialized regime; NaN otherwise.
  double eps_max = std::numeric_limits<double>::quiet_NaN();
  double eta_min_required = std::numeric_limits<double>::quiet_NaN();
  bool mean_conserving = false;
  bool energy_dissipative = false;
  bool cubic_contractive = false;
};

// Equalities "= 1" in the flags are judged to this absolute tolerance.
inline constexpr double kStatisticTolerance = 1e-12;

AdmissibilityReport law_statistics(const InteractionLaw& law);

// <p^k q^m> for independent p, q.
double mixed_moment(const InteractionLaw& law, int k, int m);

struct AdvectionDiffusion {
  double lambda = 0;
  double sigma = 0;
  RandomCoefficient eta;
};

struct AdvectionDominated {
  double lambda = 0;
  double sigma = 0;
  double delta = 0;
  RandomCoefficient eta;
};

struct ConservedEnergy {
  double lambda = 0;
  double sigma = 0;
  RandomCoefficient eta;
};

using ScalingRegime = std::variant<AdvectionDiffusion, AdvectionDominated, ConservedEnergy>;

// Largest admissible eps (exclusive). Throws std::invalid_argument when the
// regime's (lambda, sigma) constraint fails.
double regime_eps_max(const ScalingRegime& regime);

// Lower bound on the support of eta; -infinity when the regime imposes none.
double regime_eta_min(const ScalingRegime& regime);

struct MaterializedLaw {
  InteractionLaw law;
  AdmissibilityReport report;
};

MaterializedLaw materialize(const ScalingRegime& regime, double eps);

// S(s) = <p^s + q^s> - 1.
double spectral_S(const InteractionLaw& law, double s);

struct SlimTails {
  double s_max = 12;
};
struct FatTails {
  double s_bar = 0;
  int pareto_n_bar = 0;
};
using TailClass = std::variant<SlimTails, FatTails>;

TailClass classify_tail(const InteractionLaw& law, double s_max = 12.0);

}  // namespace kinetic
