#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "kinetic/equilibria.hpp"
#include "kinetic/histogram.hpp"
#include "kinetic/rng.hpp"

namespace kinetic {

struct UniformInterval {
  double a = 0;
  double b = 1;
};

// Atoms at -x and +x with probability 1/2 each.
struct TwoPointSym {
  double x = 1;
};

struct EmpiricalHistogram {
  Histogram h;
};

using InitialCondition = std::variant<UniformInterval, TwoPointSym, AnalyticDistribution, EmpiricalHistogram>;

// n i.i.d. draws; n must be even and >= 2.
std::vector<double> sample_initial_condition(RngStream& rng, const InitialCondition& f0, std::size_t n);

// Same law without the evenness requirement (per-vertex populations).
std::vector<double> sample_initial_values(RngStream& rng, const InitialCondition& f0, std::size_t n);

}  // namespace kinetic
