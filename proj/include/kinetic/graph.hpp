#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "kinetic/fourier.hpp"
#include "kinetic/initial_condition.hpp"
#include "kinetic/kinetics.hpp"

namespace kinetic {

struct PerVertexRates {
  std::vector<double> mu;
};

// mu_i = mu / rho_i.
struct NormalizedRate {
  double mu = 1;
};

using MuSpec = std::variant<PerVertexRates, NormalizedRate>;

// Row-major N x N matrix.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(std::size_t n_, double fill = 0.0) : n(n_), a(n_ * n_, fill) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct GraphModel {
  Matrix P;  // P(i, j) = probability of a jump j -> i; columns sum to 1
  std::optional<Matrix> weights;
  double chi = 1;
  MuSpec mu = NormalizedRate{};
  std::vector<InteractionLaw> laws;
  // Multiplies both chi and the interaction rates; 1/eps in the
  // quasi-invariant scaling.
  double rate_scale = 1.0;

  std::size_t size() const { return P.n; }
  // Throws ValidationError naming the offending column or field.
  void validate() const;
};

GraphModel make_graph(Matrix P, double chi, MuSpec mu, std::vector<InteractionLaw> laws);
// P_ij = A_ij / sum_i A_ij.
GraphModel make_graph_from_weights(const Matrix& A, double chi, MuSpec mu, std::vector<InteractionLaw> laws);

bool is_strongly_connected(const GraphModel& g);

// Weights of a directed cycle 1 -> 2 -> ... -> n -> 1 plus every other ordered
// pair with probability edge_prob; weights uniform on [0.1, 1]. Always
// strongly connected.
Matrix random_strongly_connected_weights(std::size_t n, double edge_prob, std::uint64_t seed);

struct DensityTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> rho;
};

// RK4 on d rho / dt = chi (P - I) rho.
DensityTrace density_ode_solve(const GraphModel& g, const std::vector<double>& rho0, double T, double dt_ode);

struct PerronResult {
  std::vector<double> rho;
  double residual = 0;  // max |P rho - rho|
  std::size_t iterations = 0;
};

// Unit-sum Perron vector by power iteration on (I + P) / 2 from the uniform
// vector, to residual 1e-12.
PerronResult density_equilibrium(const GraphModel& g);

// Interaction rate of vertex i at density rho_i, before rate_scale. This is
// the per-particle rate mu_i rho_i from the loss term of the vertex operator.
double effective_interaction_rate(const GraphModel& g, std::size_t i, double rho_i, double rho_floor);

struct GraphEnsemble {
  std::vector<std::uint32_t> vertex;
  std::vector<double> states;
  double dt = 0;
  double t = 0;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;

  std::vector<double> occupancy(std::size_t n_vertices) const;
};

// Migration (Bernoulli(chi dt) then a jump drawn from column X of P), followed
// by per-vertex permutation pairing with Bernoulli(rate_i dt) gates.
void graph_step(GraphEnsemble& e, const GraphModel& g, unsigned workers = 1);

// Off-diagonals eps P_ij, diagonal restoring column sums.
GraphModel scale_transitions(const GraphModel& g, double eps);

struct L2Condition {
  double lhs = 0;
  double rhs = 0;
  bool satisfied = false;
};

L2Condition l2_decay_condition(const GraphModel& g);

struct VertexInitial {
  double mass = 0;
  InitialCondition law;
};

struct D2ContractionOptions {
  std::uint64_t seed = 1;
  std::size_t n_particles = 100000;
  double dt = 0.01;
  std::size_t samples = 20;  // D2 evaluation times, excluding t = 0
  XiGrid grid = make_xi_grid();
  unsigned workers = 1;
};

struct D2TrialResult {
  std::vector<double> times;
  std::vector<double> d2;
  SlopeFit fit;
  bool passed = false;
};

struct D2ContractionReport {
  double envelope_rate = 0;  // mu (max_i <p_i^2 + q_i^2> - 1)
  double common_mean = 0;
  std::vector<D2TrialResult> trials;
  bool all_passed = false;
  const char* coupling_note = "";
};

// Paired graph Monte Carlo with shared migration and pairing randomness. Each
// vertex's empirical law is recentred on the common mean before D2 is taken.
D2ContractionReport d2_contraction_experiment(const GraphModel& g, const std::vector<VertexInitial>& f0,
                                              const std::vector<VertexInitial>& g0, double T, std::size_t trials,
                                              const D2ContractionOptions& options = {});

// Places round(mass_i N) particles on vertex i (largest-remainder rounding)
// and samples their states.
GraphEnsemble make_graph_ensemble(const std::vector<VertexInitial>& init, std::size_t n_particles, double dt,
                                  std::uint64_t seed);

}  // namespace kinetic
