#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kinetic/rng.hpp"

namespace kinetic {

// Density proportional to v^{-shape-1} exp(-scale/v) on v > 0; mirrored onto
// v < 0 when `reflected`.
struct InverseGamma {
  double shape = 1;
  double scale = 1;
  bool reflected = false;
};

struct Gaussian {
  double mean = 0;
  double variance = 1;
};

struct DiracAtom {
  double location = 0;
};

struct UniformDensity {
  double a = 0;
  double b = 1;
};

// Initial profiles the transport solution can be built on.
using BaseDensity = std::variant<UniformDensity, Gaussian>;

// g(v,t) = e^{lambda t} f0(M10 + e^{lambda t}(v - M10)).
struct TransportSelfSimilar {
  BaseDensity f0 = UniformDensity{};
  double lambda = 1;
  double M10 = 0;
  double t = 0;
};

// Steady state of the conserved-energy Fokker-Planck limit:
// C / (sigma^2/2 v^2 + (lambda - sigma^2/2) M20)^{1 + lambda/sigma^2}.
struct ConservedEnergyFatTail {
  double lambda = 1;
  double sigma = 1;
  double M20 = 1;
};

// Two-vertex graph with P = [[1-beta, 0], [beta, 1]]: vertex 1 carries the
// self-similar g1, vertex 2 the Gaussian g20 (mass 1 - rho10) plus what has
// migrated. As a distribution this object stands for g1 (mass rho1(t)).
struct GraphTwoVertexPair {
  double rho10 = 0.5;
  double M110 = 1;
  double lambda1 = 1;
  double sigma1 = 1;
  double beta = 0.5;
  Gaussian g20_profile{};
  double t = 0;
};

using AnalyticDistribution =
    std::variant<InverseGamma, Gaussian, DiracAtom, TransportSelfSimilar, ConservedEnergyFatTail, GraphTwoVertexPair>;

// Equilibrium of the advection-diffusion limit with conserved mean M10:
// inverse gamma with shape 1 + 2 lambda/sigma^2, scale (2 lambda/sigma^2)|M10|,
// mirrored for M10 < 0, Dirac at 0 for M10 = 0.
AnalyticDistribution advection_diffusion_equilibrium(double lambda, double sigma, double M10);

// Regularized log of the fat-tail normalising constant.
double conserved_energy_log_constant(double lambda, double sigma, double M20);

void validate(const AnalyticDistribution& d);

double pdf(const AnalyticDistribution& d, double v);
double cdf(const AnalyticDistribution& d, double v);
// Probability mass in [a, b].
double bin_mass(const AnalyticDistribution& d, double a, double b);
// 1 for proper laws, rho1(t) for the two-vertex g1.
double total_mass(const AnalyticDistribution& d);
// Analytic mean, where one exists.
std::optional<double> mean(const AnalyticDistribution& d);
// Pareto exponent gamma such that the tail mass decays like v^{-gamma + 1}.
std::optional<double> tail_exponent(const AnalyticDistribution& d);

std::string describe(const AnalyticDistribution& d);

std::vector<double> sample(const AnalyticDistribution& d, RngStream& rng, std::size_t n);
double sample_one(const AnalyticDistribution& d, RngStream& rng);

// Fourier transform e^{-i xi v} integrated against d, for families where it is
// closed form (Gaussian, Dirac, uniform-based transport).
std::complex<double> characteristic_function(const AnalyticDistribution& d, double xi);

// max_xi |g(xi) - g(p xi) g(q xi)| with g(xi) = exp(-M20 xi^2 / 2).
double gaussian_fixed_point_residual_pq(double p, double q, double M20, const std::vector<double>& xi_grid);
// Same with (p, q) from the sigma = 0 conserved-energy scaling at eps.
double gaussian_fixed_point_residual(double lambda, double eps, double M20, const std::vector<double>& xi_grid);

struct TwoVertexValues {
  double g1 = 0;
  double g2 = 0;
};

TwoVertexValues graph_two_vertex_solution(const GraphTwoVertexPair& params, double v, double t);
// Masses of g1 and g2 on [a, b] at time t.
TwoVertexValues graph_two_vertex_bin_mass(const GraphTwoVertexPair& params, double a, double b, double t);

}  // namespace kinetic
