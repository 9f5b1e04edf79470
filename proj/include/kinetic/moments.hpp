#pragma once

#include <vector>

#include "kinetic/graph.hpp"
#include "kinetic/kinetics.hpp"

namespace kinetic {

// values[t][k] is M_k at times[t].
struct MomentSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> values;
};

double mean_closed_form(double M10, const InteractionLaw& law, double t);

// Needs <p+q> = 1 and <p^2+q^2> != 1.
double energy_closed_form(double M10, double M20, const InteractionLaw& law, double t);

// Time-uniform bound M20 + 2<pq> M10^2 / (1 - <p^2+q^2>).
double energy_bound(double M10, double M20, const InteractionLaw& law);

// 2<pq> M1^2 / (1 - <p^2+q^2>).
double energy_limit(double M1, const InteractionLaw& law);

// RK4 on the closed hierarchy dM_n/dt = S(n) M_n + sum_k C(n,k) <p^k q^(n-k)> M_k M_(n-k).
// `initial` holds M_0..M_n; M_0 is pinned to 1. Throws StepRejected when
// dt |S(k)| > 0.5 for some k.
MomentSeries integrate_moment_system(const InteractionLaw& law, std::vector<double> initial, double T, double dt);

// 3 <pq(p+q)> / (1 - <p^3+q^3>) (M2_inf)^(3/2).
double steady_third_bound(const InteractionLaw& law, double M1_inf);

// One series per vertex; values[t] = {rho_i, M1_i, M2_i}.
std::vector<MomentSeries> graph_moment_systems(const GraphModel& g, const std::vector<double>& rho0,
                                               const std::vector<double>& M1_0, const std::vector<double>& M2_0,
                                               double T, double dt);

}  // namespace kinetic
