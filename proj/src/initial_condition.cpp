#include "kinetic/initial_condition.hpp"

#include <algorithm>
#include <stdexcept>

namespace kinetic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::vector<double> sample_initial_values(RngStream& rng, const InitialCondition& f0, std::size_t n) {
  std::vector<double> out(n);
  std::visit(overloaded{
                 [&](const UniformInterval& u) {
                   if (!(u.a < u.b)) throw std::invalid_argument("UniformInterval: need a < b");
                   for (auto& x : out) x = std::clamp(u.a + (u.b - u.a) * rng.uniform(), u.a, u.b);
                 },
                 [&](const TwoPointSym& t) {
                   for (auto& x : out) x = rng.uniform() < 0.5 ? -t.x : t.x;
                 },
                 [&](const AnalyticDistribution& d) { out = sample(d, rng, n); },
                 [&](const EmpiricalHistogram& e) {
                   const Histogram& h = e.h;
                   std::vector<double> cumulative(h.bins());
                   double acc = 0.0;
                   for (std::size_t b = 0; b < h.bins(); ++b) {
                     acc += h.density[b] * (h.edges[b + 1] - h.edges[b]);
                     cumulative[b] = acc;
                   }
                   if (!(acc > 0)) throw std::invalid_argument("EmpiricalHistogram carries no mass");
                   for (auto& x : out) {
                     const double u = rng.uniform() * acc;
                     auto b = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                                       cumulative.begin());
                     b = std::min(b, h.bins() - 1);
                     x = h.edges[b] + (h.edges[b + 1] - h.edges[b]) * rng.uniform();
                   }
                 },
             },
             f0);
  return out;
}

std::vector<double> sample_initial_condition(RngStream& rng, const InitialCondition& f0, std::size_t n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("particle count must be even and >= 2, got " + std::to_string(n));
  return sample_initial_values(rng, f0, n);
}

}  // namespace kinetic
