#include "kinetic/moments.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

std::uint64_t rk4_steps(double T, double dt) {
  if (!(T >= 0)) throw std::invalid_argument("T must be >= 0");
  if (!(dt > 0)) throw std::invalid_argument("dt_ode must be > 0");
  return static_cast<std::uint64_t>(std::ceil(T / dt - 1e-9));
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

template <class Rhs>
void rk4_advance(std::vector<double>& y, double h, const Rhs& rhs) {
  const std::size_t n = y.size();
  std::vector<double> tmp(n);
  const auto k1 = rhs(y);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  const auto k2 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  const auto k3 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  const auto k4 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

double mean_closed_form(double M10, const InteractionLaw& law, double t) {
  return M10 * std::exp((law_statistics(law).mean_sum - 1.0) * t);
}

double energy_closed_form(double M10, double M20, const InteractionLaw& law, double t) {
  const auto st = law_statistics(law);
  if (!st.mean_conserving) throw std::invalid_argument("energy_closed_form needs <p+q> = 1");
  const double a = st.energy_sum - 1.0;
  if (std::abs(a) <= kStatisticTolerance) throw std::invalid_argument("energy_closed_form needs <p^2+q^2> != 1");
  const double decay = std::exp(a * t);
  return decay * M20 + 2.0 * (1.0 - decay) * st.pq_mean / (-a) * M10 * M10;
}

double energy_bound(double M10, double M20, const InteractionLaw& law) {
  const auto st = law_statistics(law);
  if (!st.energy_dissipative) throw std::invalid_argument("energy_bound needs <p^2+q^2> < 1");
  return M20 + 2.0 * st.pq_mean * M10 * M10 / (1.0 - st.energy_sum);
}

double energy_limit(double M1, const InteractionLaw& law) {
  const auto st = law_statistics(law);
  if (!st.energy_dissipative) throw std::invalid_argument("energy_limit needs <p^2+q^2> < 1");
  return 2.0 * st.pq_mean * M1 * M1 / (1.0 - st.energy_sum);
}

MomentSeries integrate_moment_system(const InteractionLaw& law, std::vector<double> initial, double T, double dt) {
  if (initial.empty() || initial.size() > 9) throw std::invalid_argument("need M_0..M_n with n <= 8");
  law.validate();
  const int order = static_cast<int>(initial.size()) - 1;
  std::vector<double> S(initial.size(), 0.0);
  // mix[n][k] = C(n,k) <p^k q^(n-k)>, used for 1 <= k <= n-1.
  std::vector<std::vector<double>> mix(initial.size());
  for (int n = 1; n <= order; ++n) {
    S[n] = law.p.raw_moment(n) + law.q.raw_moment(n) - 1.0;
    if (dt * std::abs(S[n]) > 0.5)
      throw StepRejected("dt_ode |S(" + std::to_string(n) + ")| = " + std::to_string(dt * std::abs(S[n])) +
                         " exceeds 0.5");
    mix[n].assign(n, 0.0);
    for (int k = 1; k < n; ++k) mix[n][k] = binomial(n, k) * mixed_moment(law, k, n - k);
  }
  initial[0] = 1.0;
  auto rhs = [&](const std::vector<double>& M) {
    std::vector<double> d(M.size(), 0.0);
    for (int n = 1; n <= order; ++n) {
      double s = S[n] * M[n];
      for (int k = 1; k < n; ++k) s += mix[n][k] * M[k] * M[n - k];
      d[n] = s;
    }
    return d;
  };
  const std::uint64_t steps = rk4_steps(T, dt);
  const double h = steps ? T / static_cast<double>(steps) : 0.0;
  MomentSeries out;
  out.times.push_back(0.0);
  out.values.push_back(initial);
  std::vector<double> M = std::move(initial);
  for (std::uint64_t s = 0; s < steps; ++s) {
    rk4_advance(M, h, rhs);
    M[0] = 1.0;
    out.times.push_back(h * static_cast<double>(s + 1));
    out.values.push_back(M);
  }
  return out;
}

double steady_third_bound(const InteractionLaw& law, double M1_inf) {
  const auto st = law_statistics(law);
  if (!(st.cubic_sum < 1.0)) throw std::invalid_argument("steady_third_bound needs <p^3+q^3> < 1");
  const double m2 = energy_limit(M1_inf, law);
  const double cross = mixed_moment(law, 2, 1) + mixed_moment(law, 1, 2);
  return 3.0 * cross / (1.0 - st.cubic_sum) * std::pow(m2, 1.5);
}

std::vector<MomentSeries> graph_moment_systems(const GraphModel& g, const std::vector<double>& rho0,
                                               const std::vector<double>& M1_0, const std::vector<double>& M2_0,
                                               double T, double dt) {
  g.validate();
  const std::size_t n = g.size();
  if (rho0.size() != n || M1_0.size() != n || M2_0.size() != n)
    throw std::invalid_argument("one initial value per vertex is required");
  for (double r : rho0)
    if (!(r >= 0)) throw std::invalid_argument("rho0 must be componentwise >= 0");
  constexpr double kRhoFloor = 1e-12;
  std::vector<double> a(n);
  std::vector<double> b(n);
  std::vector<double> pq(n);
  double fastest = g.chi;
  for (std::size_t i = 0; i < n; ++i) {
    const auto st = law_statistics(g.laws[i]);
    a[i] = st.mean_sum - 1.0;
    b[i] = st.energy_sum - 1.0;
    pq[i] = st.pq_mean;
    const double mu = effective_interaction_rate(g, i, 1.0, kRhoFloor);
    fastest = std::max({fastest, mu * std::abs(a[i]), mu * std::abs(b[i])});
  }
  fastest *= g.rate_scale;
  if (dt * fastest > 0.5) throw StepRejected("dt_ode times the fastest rate exceeds 0.5");
  const double chi = g.chi * g.rate_scale;

  // Layout: rho_i, m1_i = rho_i M1_i, m2_i = rho_i M2_i.
  auto rhs = [&](const std::vector<double>& y) {
    std::vector<double> d(3 * n, 0.0);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        double in = 0.0;
        for (std::size_t j = 0; j < n; ++j) in += g.P(i, j) * y[c * n + j];
        d[c * n + i] = chi * (in - y[c * n + i]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double rho = std::max(y[i], kRhoFloor);
      const double rate = effective_interaction_rate(g, i, rho, kRhoFloor) * g.rate_scale;
      const double m1 = y[n + i];
      const double m2 = y[2 * n + i];
      d[n + i] += rate * a[i] * m1;
      d[2 * n + i] += rate * (b[i] * m2 + 2.0 * pq[i] * m1 * m1 / rho);
    }
    return d;
  };

  std::vector<double> y(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rho0[i];
    y[n + i] = rho0[i] * M1_0[i];
    y[2 * n + i] = rho0[i] * M2_0[i];
  }
  std::vector<MomentSeries> out(n);
  auto record = [&](double t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double rho = std::max(y[i], kRhoFloor);
      out[i].times.push_back(t);
      out[i].values.push_back({y[i], y[n + i] / rho, y[2 * n + i] / rho});
    }
  };
  record(0.0);
  const std::uint64_t steps = rk4_steps(T, dt);
  const double h = steps ? T / static_cast<double>(steps) : 0.0;
  for (std::uint64_t s = 0; s < steps; ++s) {
    rk4_advance(y, h, rhs);
    record(h * static_cast<double>(s + 1));
  }
  return out;
}

}  // namespace kinetic
