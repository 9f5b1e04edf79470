#include "kinetic/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kinetic/montecarlo.hpp"
#include "kinetic/parallel.hpp"

namespace kinetic {

namespace {

// Neumaier summation.
struct Compensated {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

std::complex<double> cf_at(std::span<const double> v, double xi) {
  Compensated re;
  Compensated im;
  for (double x : v) {
    re.add(std::cos(xi * x));
    im.add(-std::sin(xi * x));
  }
  const double n = static_cast<double>(v.size());
  return {re.value() / n, im.value() / n};
}

void check_same_grid(const CharacteristicFunction& a, const CharacteristicFunction& b) {
  if (a.xi != b.xi) throw std::invalid_argument("characteristic functions live on different grids");
  if (a.values.size() != a.xi.size() || b.values.size() != b.xi.size())
    throw std::invalid_argument("characteristic function has mismatched value count");
}

}  // namespace

XiGrid make_xi_grid(double xi_min, double xi_max, std::size_t per_side) {
  if (!(xi_min > 0 && xi_max > xi_min)) throw std::invalid_argument("xi grid needs 0 < xi_min < xi_max");
  if (per_side < 2) throw std::invalid_argument("xi grid needs at least 2 points per side");
  XiGrid g;
  g.per_side = per_side;
  std::vector<double> pos(per_side);
  const double l0 = std::log(xi_min);
  const double l1 = std::log(xi_max);
  for (std::size_t k = 0; k < per_side; ++k)
    pos[k] = std::exp(l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(per_side - 1));
  pos.front() = xi_min;
  pos.back() = xi_max;
  g.xi.reserve(2 * per_side);
  for (std::size_t k = per_side; k-- > 0;) g.xi.push_back(-pos[k]);
  for (double x : pos) g.xi.push_back(x);
  return g;
}

EmpiricalCF empirical_cf(std::span<const double> states, const XiGrid& grid, unsigned workers,
                         std::optional<double> recentre_to) {
  if (states.empty()) throw std::invalid_argument("empirical_cf of an empty sample");
  for (double x : grid.xi)
    if (x == 0.0) throw std::invalid_argument("xi grid must exclude 0");
  std::vector<double> shifted;
  std::span<const double> v = states;
  if (recentre_to) {
    const double shift = *recentre_to - ensemble_moment(states, 1);
    shifted.assign(states.begin(), states.end());
    for (auto& x : shifted) x += shift;
    v = shifted;
  }
  EmpiricalCF cf;
  cf.xi = grid.xi;
  cf.n_samples = v.size();
  cf.values.resize(grid.xi.size());
  const std::size_t m = grid.xi.size();
  // Evaluate each |xi| once; the mirrored point gets the conjugate.
  std::vector<std::size_t> positive;
  for (std::size_t j = 0; j < m; ++j)
    if (grid.xi[j] > 0) positive.push_back(j);
  parallel_for(positive.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t j = positive[k];
      cf.values[j] = cf_at(v, grid.xi[j]);
    }
  });
  for (std::size_t j = 0; j < m; ++j) {
    if (grid.xi[j] > 0) continue;
    const auto mirror = std::find(grid.xi.begin(), grid.xi.end(), -grid.xi[j]);
    cf.values[j] = mirror != grid.xi.end() ? std::conj(cf.values[static_cast<std::size_t>(mirror - grid.xi.begin())])
                                           : cf_at(v, grid.xi[j]);
  }
  return cf;
}

CharacteristicFunction analytic_cf(const CfFunction& f, const XiGrid& grid, std::vector<double> declared_moments) {
  CharacteristicFunction cf;
  cf.xi = grid.xi;
  cf.values.reserve(grid.xi.size());
  for (double x : grid.xi) cf.values.push_back(f(x));
  cf.declared_moments = std::move(declared_moments);
  return cf;
}

CfFunction empirical_cf_function(std::vector<double> states) {
  if (states.empty()) throw std::invalid_argument("empirical_cf of an empty sample");
  return [v = std::move(states)](double xi) { return cf_at(v, xi); };
}

DistanceResult fourier_distance(const CharacteristicFunction& a, const CharacteristicFunction& b, double s) {
  if (!(s > 0)) throw std::invalid_argument("fourier_distance: s must be > 0");
  check_same_grid(a, b);
  DistanceResult r;
  for (std::size_t j = 0; j < a.xi.size(); ++j)
    r.value = std::max(r.value, std::abs(a.values[j] - b.values[j]) / std::pow(std::abs(a.xi[j]), s));
  // Moments must agree for n <= [s], or n <= s - 1 when s is an integer.
  const double fl = std::floor(s);
  const auto order = static_cast<std::size_t>(fl == s ? fl - 1 : fl);
  if (order >= 1 && !a.declared_moments.empty() && !b.declared_moments.empty()) {
    for (std::size_t k = 1; k <= order; ++k) {
      if (k > a.declared_moments.size() || k > b.declared_moments.size()) break;
      const double x = a.declared_moments[k - 1];
      const double y = b.declared_moments[k - 1];
      if (std::abs(x - y) > 1e-12 * std::max({1.0, std::abs(x), std::abs(y)})) r.moment_mismatch_warning = true;
    }
  }
  return r;
}

DilationCheck dilation_scaling_check(const CfFunction& a, const CfFunction& b, const XiGrid& grid, double s,
                                     double c) {
  if (c == 0.0) throw std::invalid_argument("dilation factor must be nonzero");
  DilationCheck out;
  double rhs_sup = 0.0;
  for (double xi : grid.xi) {
    const double cx = c * xi;
    const double diff = std::abs(a(cx) - b(cx));
    out.lhs = std::max(out.lhs, diff / std::pow(std::abs(xi), s));
    rhs_sup = std::max(rhs_sup, diff / std::pow(std::abs(cx), s));
  }
  out.ds = rhs_sup;
  out.rhs = std::pow(std::abs(c), s) * rhs_sup;
  return out;
}

double graph_distance(std::span<const double> rho, std::span<const CharacteristicFunction> F,
                      std::span<const CharacteristicFunction> G, double s) {
  if (rho.size() != F.size() || rho.size() != G.size())
    throw std::invalid_argument("graph_distance: mismatched vertex counts");
  double total = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < 0) throw std::invalid_argument("graph_distance: negative mass");
    if (rho[i] < 1e-12) continue;
    total += rho[i] * fourier_distance(F[i], G[i], s).value;
  }
  return total;
}

double l2_histogram_norm(const Histogram& h) {
  double s = 0.0;
  for (std::size_t b = 0; b < h.bins(); ++b) s += h.density[b] * h.density[b] * (h.edges[b + 1] - h.edges[b]);
  return std::sqrt(s);
}

SlopeFit fit_log_slope(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("fit_log_slope: size mismatch");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (values[i] > 0) {
      x.push_back(times[i]);
      y.push_back(std::log(values[i]));
    }
  }
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("fit_log_slope: need at least 3 positive values");
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

}  // namespace kinetic
