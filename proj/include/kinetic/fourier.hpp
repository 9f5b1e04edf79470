#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kinetic/histogram.hpp"

namespace kinetic {

// Symmetric grid: the negated positive half (descending) then the positive
// half, each log-spaced on [xi_min, xi_max].
struct XiGrid {
  std::vector<double> xi;
  std::size_t per_side = 0;
};

XiGrid make_xi_grid(double xi_min = 1e-4, double xi_max = 1e2, std::size_t per_side = 512);

// A characteristic function tabulated on a grid. `n_samples` is zero for
// analytic functions. `declared_moments[k]` is the k-th raw moment, k >= 1.
struct CharacteristicFunction {
  std::vector<double> xi;
  std::vector<std::complex<double>> values;
  std::size_t n_samples = 0;
  std::vector<double> declared_moments;
};

using EmpiricalCF = CharacteristicFunction;
using CfFunction = std::function<std::complex<double>(double)>;

// (1/n) sum_k exp(-i xi v_k) with Neumaier-compensated sums. The negative
// half of the grid is filled by conjugation, so conjugate symmetry is exact.
// With `recentre_to`, samples are shifted to have exactly that mean first.
EmpiricalCF empirical_cf(std::span<const double> states, const XiGrid& grid, unsigned workers = 1,
                         std::optional<double> recentre_to = std::nullopt);

CharacteristicFunction analytic_cf(const CfFunction& f, const XiGrid& grid, std::vector<double> declared_moments = {});

// Evaluates the empirical characteristic function of `states` at any xi.
CfFunction empirical_cf_function(std::vector<double> states);

struct DistanceResult {
  double value = 0;
  // Set when both sides declare moments that differ at some order n <= [s]
  // (n <= s - 1 for integer s).
  bool moment_mismatch_warning = false;
};

// max over the grid of |a - b| / |xi|^s.
DistanceResult fourier_distance(const CharacteristicFunction& a, const CharacteristicFunction& b, double s);

struct DilationCheck {
  double lhs = 0;
  double rhs = 0;
  double ds = 0;  // d_s(a, b) on the scaled grid, so rhs = |c|^s ds
};

// lhs = max_xi |a(c xi) - b(c xi)| / |xi|^s on `grid`; rhs = |c|^s d_s(a, b)
// with d_s taken on the grid scaled by c, which keeps both sides comparable.
DilationCheck dilation_scaling_check(const CfFunction& a, const CfFunction& b, const XiGrid& grid, double s, double c);

// sum_i rho_i d_s(F_i, G_i), skipping rho_i < 1e-12.
double graph_distance(std::span<const double> rho, std::span<const CharacteristicFunction> F,
                      std::span<const CharacteristicFunction> G, double s);

double l2_histogram_norm(const Histogram& h);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
};

// Ordinary least squares of log(values) on times; nonpositive values skipped.
SlopeFit fit_log_slope(std::span<const double> times, std::span<const double> values);

}  // namespace kinetic
