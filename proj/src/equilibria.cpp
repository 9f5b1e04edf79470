#include "kinetic/equilibria.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kinetic/errors.hpp"
#include "kinetic/kinetics.hpp"
#include "kinetic/sampling.hpp"

namespace kinetic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Complex = std::complex<double>;

double normal_cdf(double x, double mean, double variance) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double gaussian_pdf(const Gaussian& g, double v) {
  const double z = v - g.mean;
  return std::exp(-0.5 * z * z / g.variance) / std::sqrt(2.0 * std::numbers::pi * g.variance);
}

double inverse_gamma_pdf(const InverseGamma& d, double v) {
  const double x = d.reflected ? -v : v;
  if (x <= 0) return 0.0;
  const double log_pdf =
      d.shape * std::log(d.scale) - boost::math::lgamma(d.shape) - (d.shape + 1.0) * std::log(x) - d.scale / x;
  return std::exp(log_pdf);
}

double inverse_gamma_cdf(const InverseGamma& d, double v) {
  auto upright = [&](double x) { return x <= 0 ? 0.0 : boost::math::gamma_q(d.shape, d.scale / x); };
  if (!d.reflected) return upright(v);
  return 1.0 - upright(-v);
}

InverseGamma graph_profile(const GraphTwoVertexPair& g) {
  const double k = 2.0 * g.lambda1 / (g.sigma1 * g.sigma1);
  return InverseGamma{1.0 + k, k * g.M110, false};
}

double base_pdf(const BaseDensity& f0, double x) {
  return std::visit(overloaded{
                        [x](const UniformDensity& u) { return (x >= u.a && x <= u.b) ? 1.0 / (u.b - u.a) : 0.0; },
                        [x](const Gaussian& g) { return gaussian_pdf(g, x); },
                    },
                    f0);
}

double base_cdf(const BaseDensity& f0, double x) {
  return std::visit(overloaded{
                        [x](const UniformDensity& u) { return std::clamp((x - u.a) / (u.b - u.a), 0.0, 1.0); },
                        [x](const Gaussian& g) { return normal_cdf(x, g.mean, g.variance); },
                    },
                    f0);
}

double fat_tail_pdf(const ConservedEnergyFatTail& d, double v) {
  const double a = 0.5 * d.sigma * d.sigma;
  const double b = (d.lambda - a) * d.M20;
  const double k = 1.0 + d.lambda / (d.sigma * d.sigma);
  return std::exp(conserved_energy_log_constant(d.lambda, d.sigma, d.M20) - k * std::log(a * v * v + b));
}

double fat_tail_cdf(const ConservedEnergyFatTail& d, double v) {
  if (v == 0) return 0.5;
  using boost::math::quadrature::gauss_kronrod;
  const double x = std::abs(v);
  const double half = gauss_kronrod<double, 31>::integrate([&](double u) { return fat_tail_pdf(d, u); }, 0.0, x, 20,
                                                           1e-13);
  return v > 0 ? 0.5 + half : 0.5 - half;
}

}  // namespace

AnalyticDistribution advection_diffusion_equilibrium(double lambda, double sigma, double M10) {
  if (!(lambda > 0 && sigma > 0)) throw std::invalid_argument("equilibrium needs lambda, sigma > 0");
  if (M10 == 0.0) return DiracAtom{0.0};
  const double k = 2.0 * lambda / (sigma * sigma);
  return InverseGamma{1.0 + k, k * std::abs(M10), M10 < 0};
}

double conserved_energy_log_constant(double lambda, double sigma, double M20) {
  const double a = 0.5 * sigma * sigma;
  const double b = (lambda - a) * M20;
  const double k = 1.0 + lambda / (sigma * sigma);
  // 1 / C = integral of (a v^2 + b)^{-k} = b^{1/2 - k} a^{-1/2} sqrt(pi) Gamma(k - 1/2) / Gamma(k).
  return boost::math::lgamma(k) + 0.5 * std::log(a) + (k - 0.5) * std::log(b) - 0.5 * std::log(std::numbers::pi) -
         boost::math::lgamma(k - 0.5);
}

void validate(const AnalyticDistribution& d) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  std::visit(overloaded{
                 [&](const InverseGamma& g) { require(g.shape > 0 && g.scale > 0, "InverseGamma: shape, scale > 0"); },
                 [&](const Gaussian& g) { require(g.variance > 0, "Gaussian: variance > 0"); },
                 [&](const DiracAtom& a) { require(std::isfinite(a.location), "DiracAtom: finite location"); },
                 [&](const TransportSelfSimilar& s) {
                   require(s.lambda > 0 && s.t >= 0, "TransportSelfSimilar: lambda > 0, t >= 0");
                   std::visit(overloaded{
                                  [&](const UniformDensity& u) { require(u.a < u.b, "UniformDensity: a < b"); },
                                  [&](const Gaussian& g) { require(g.variance > 0, "Gaussian: variance > 0"); },
                              },
                              s.f0);
                 },
                 [&](const ConservedEnergyFatTail& f) {
                   require(f.lambda > 0 && f.sigma > 0 && f.M20 > 0, "ConservedEnergyFatTail: lambda, sigma, M20 > 0");
                   require(f.sigma * f.sigma < 2.0 * f.lambda, "ConservedEnergyFatTail: sigma^2 < 2 lambda");
                 },
                 [&](const GraphTwoVertexPair& g) {
                   if (!(g.M110 > 0)) throw std::invalid_argument("GraphTwoVertexPair: M110 must be > 0");
                   require(g.beta > 0 && g.beta < 1, "GraphTwoVertexPair: beta in (0, 1)");
                   require(g.rho10 >= 0 && g.rho10 <= 1, "GraphTwoVertexPair: rho10 in [0, 1]");
                   require(g.lambda1 > 0 && g.sigma1 > 0 && g.sigma1 * g.sigma1 < 2.0 * g.lambda1,
                           "GraphTwoVertexPair: need 0 < sigma1^2 < 2 lambda1");
                   require(g.g20_profile.variance > 0, "GraphTwoVertexPair: g20 variance > 0");
                   require(g.t >= 0, "GraphTwoVertexPair: t >= 0");
                 },
             },
             d);
}

double pdf(const AnalyticDistribution& d, double v) {
  validate(d);
  return std::visit(overloaded{
                        [v](const InverseGamma& g) { return inverse_gamma_pdf(g, v); },
                        [v](const Gaussian& g) { return gaussian_pdf(g, v); },
                        [](const DiracAtom&) -> double { throw PdfUndefined("a Dirac atom has no density"); },
                        [v](const TransportSelfSimilar& s) {
                          const double grow = std::exp(s.lambda * s.t);
                          return grow * base_pdf(s.f0, s.M10 + grow * (v - s.M10));
                        },
                        [v](const ConservedEnergyFatTail& f) { return fat_tail_pdf(f, v); },
                        [v](const GraphTwoVertexPair& g) { return graph_two_vertex_solution(g, v, g.t).g1; },
                    },
                    d);
}

double cdf(const AnalyticDistribution& d, double v) {
  validate(d);
  return std::visit(overloaded{
                        [v](const InverseGamma& g) { return inverse_gamma_cdf(g, v); },
                        [v](const Gaussian& g) { return normal_cdf(v, g.mean, g.variance); },
                        [v](const DiracAtom& a) { return v >= a.location ? 1.0 : 0.0; },
                        [v](const TransportSelfSimilar& s) {
                          return base_cdf(s.f0, s.M10 + std::exp(s.lambda * s.t) * (v - s.M10));
                        },
                        [v](const ConservedEnergyFatTail& f) { return fat_tail_cdf(f, v); },
                        [v](const GraphTwoVertexPair& g) {
                          return g.rho10 * std::exp(-g.beta * g.t) * inverse_gamma_cdf(graph_profile(g), v);
                        },
                    },
                    d);
}

double bin_mass(const AnalyticDistribution& d, double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("bin_mass: need a <= b");
  if (const auto* atom = std::get_if<DiracAtom>(&d)) return (atom->location >= a && atom->location <= b) ? 1.0 : 0.0;
  if (const auto* f = std::get_if<ConservedEnergyFatTail>(&d)) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate([&](double u) { return fat_tail_pdf(*f, u); }, a, b, 20, 1e-13);
  }
  return cdf(d, b) - cdf(d, a);
}

double total_mass(const AnalyticDistribution& d) {
  if (const auto* g = std::get_if<GraphTwoVertexPair>(&d)) return g->rho10 * std::exp(-g->beta * g->t);
  return 1.0;
}

std::optional<double> mean(const AnalyticDistribution& d) {
  return std::visit(overloaded{
                        [](const InverseGamma& g) -> std::optional<double> {
                          if (g.shape <= 1) return std::nullopt;
                          const double m = g.scale / (g.shape - 1.0);
                          return g.reflected ? -m : m;
                        },
                        [](const Gaussian& g) -> std::optional<double> { return g.mean; },
                        [](const DiracAtom& a) -> std::optional<double> { return a.location; },
                        [](const TransportSelfSimilar& s) -> std::optional<double> {
                          const double m0 = std::visit(overloaded{
                                                           [](const UniformDensity& u) { return 0.5 * (u.a + u.b); },
                                                           [](const Gaussian& g) { return g.mean; },
                                                       },
                                                       s.f0);
                          return s.M10 + std::exp(-s.lambda * s.t) * (m0 - s.M10);
                        },
                        [](const ConservedEnergyFatTail&) -> std::optional<double> { return 0.0; },
                        [](const GraphTwoVertexPair& g) -> std::optional<double> { return g.M110; },
                    },
                    d);
}

std::optional<double> tail_exponent(const AnalyticDistribution& d) {
  if (const auto* g = std::get_if<InverseGamma>(&d)) return g->shape;
  if (const auto* f = std::get_if<ConservedEnergyFatTail>(&d)) return 1.0 + 2.0 * f->lambda / (f->sigma * f->sigma);
  if (const auto* g = std::get_if<GraphTwoVertexPair>(&d)) return graph_profile(*g).shape;
  return std::nullopt;
}

std::string describe(const AnalyticDistribution& d) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const InverseGamma& g) {
                   os << "InverseGamma(shape=" << g.shape << ", scale=" << g.scale << (g.reflected ? ", reflected" : "")
                      << ")";
                 },
                 [&](const Gaussian& g) { os << "Gaussian(mean=" << g.mean << ", variance=" << g.variance << ")"; },
                 [&](const DiracAtom& a) { os << "DiracAtom(" << a.location << ")"; },
                 [&](const TransportSelfSimilar& s) {
                   os << "TransportSelfSimilar(lambda=" << s.lambda << ", M10=" << s.M10 << ", t=" << s.t << ")";
                 },
                 [&](const ConservedEnergyFatTail& f) {
                   os << "ConservedEnergyFatTail(lambda=" << f.lambda << ", sigma=" << f.sigma << ", M20=" << f.M20
                      << ")";
                 },
                 [&](const GraphTwoVertexPair& g) {
                   os << "GraphTwoVertexPair(rho10=" << g.rho10 << ", beta=" << g.beta << ", t=" << g.t << ")";
                 },
             },
             d);
  return os.str();
}

double sample_one(const AnalyticDistribution& d, RngStream& rng) {
  return std::visit(
      overloaded{
          [&](const InverseGamma& g) {
            const double x = draw_inverse_gamma(rng, g.shape, g.scale);
            return g.reflected ? -x : x;
          },
          [&](const Gaussian& g) { return g.mean + std::sqrt(g.variance) * rng.normal(); },
          [](const DiracAtom& a) { return a.location; },
          [&](const TransportSelfSimilar& s) {
            const double x = std::visit(overloaded{
                                            [&](const UniformDensity& u) { return u.a + (u.b - u.a) * rng.uniform(); },
                                            [&](const Gaussian& g) { return g.mean + std::sqrt(g.variance) * rng.normal(); },
                                        },
                                        s.f0);
            return s.M10 + std::exp(-s.lambda * s.t) * (x - s.M10);
          },
          [&](const ConservedEnergyFatTail& f) {
            // Scaled Student t with nu = 2k - 1 degrees of freedom.
            const double a = 0.5 * f.sigma * f.sigma;
            const double b = (f.lambda - a) * f.M20;
            const double nu = 1.0 + 2.0 * f.lambda / (f.sigma * f.sigma);
            const double z = rng.normal();
            const double chi2 = 2.0 * draw_standard_gamma(rng, 0.5 * nu);
            return std::sqrt(b / (a * nu)) * z / std::sqrt(chi2 / nu);
          },
          [](const GraphTwoVertexPair&) -> double {
            throw SampleUndefined("g1 is a sub-probability density; sample the h profile instead");
          },
      },
      d);
}

std::vector<double> sample(const AnalyticDistribution& d, RngStream& rng, std::size_t n) {
  validate(d);
  std::vector<double> out(n);
  for (auto& x : out) x = sample_one(d, rng);
  return out;
}

std::complex<double> characteristic_function(const AnalyticDistribution& d, double xi) {
  auto uniform_cf = [](double a, double b, double x) -> Complex {
    if (x == 0.0) return 1.0;
    const double half = 0.5 * x * (b - a);
    const double sinc = std::sin(half) / half;
    return std::polar(sinc, -x * 0.5 * (a + b));
  };
  return std::visit(
      overloaded{
          [&](const Gaussian& g) { return std::polar(std::exp(-0.5 * g.variance * xi * xi), -xi * g.mean); },
          [&](const DiracAtom& a) { return std::polar(1.0, -xi * a.location); },
          [&](const TransportSelfSimilar& s) -> Complex {
            const double shrink = std::exp(-s.lambda * s.t);
            const Complex shift = std::polar(1.0, -xi * s.M10 * (1.0 - shrink));
            const double x = xi * shrink;
            return shift * std::visit(overloaded{
                                          [&](const UniformDensity& u) { return uniform_cf(u.a, u.b, x); },
                                          [&](const Gaussian& g) {
                                            return std::polar(std::exp(-0.5 * g.variance * x * x), -x * g.mean);
                                          },
                                      },
                                      s.f0);
          },
          [](const auto&) -> Complex { throw std::invalid_argument("no closed-form characteristic function"); },
      },
      d);
}

double gaussian_fixed_point_residual_pq(double p, double q, double M20, const std::vector<double>& xi_grid) {
  auto g = [M20](double x) { return std::exp(-0.5 * M20 * x * x); };
  double worst = 0.0;
  for (double xi : xi_grid) worst = std::max(worst, std::abs(g(xi) - g(p * xi) * g(q * xi)));
  return worst;
}

double gaussian_fixed_point_residual(double lambda, double eps, double M20, const std::vector<double>& xi_grid) {
  const auto m = materialize(ConservedEnergy{lambda, 0.0, RandomCoefficient::constant(0.0)}, eps);
  return gaussian_fixed_point_residual_pq(m.law.p.mean(), m.law.q.mean(), M20, xi_grid);
}

TwoVertexValues graph_two_vertex_solution(const GraphTwoVertexPair& params, double v, double t) {
  GraphTwoVertexPair at = params;
  at.t = t;
  validate(at);
  const double h = inverse_gamma_pdf(graph_profile(at), v);
  const double stay = std::exp(-at.beta * t);
  return {at.rho10 * stay * h, (1.0 - at.rho10) * gaussian_pdf(at.g20_profile, v) + at.rho10 * (1.0 - stay) * h};
}

TwoVertexValues graph_two_vertex_bin_mass(const GraphTwoVertexPair& params, double a, double b, double t) {
  GraphTwoVertexPair at = params;
  at.t = t;
  validate(at);
  const InverseGamma prof = graph_profile(at);
  const double h = inverse_gamma_cdf(prof, b) - inverse_gamma_cdf(prof, a);
  const double gauss = normal_cdf(b, at.g20_profile.mean, at.g20_profile.variance) -
                       normal_cdf(a, at.g20_profile.mean, at.g20_profile.variance);
  const double stay = std::exp(-at.beta * t);
  return {at.rho10 * stay * h, (1.0 - at.rho10) * gauss + at.rho10 * (1.0 - stay) * h};
}

}  // namespace kinetic
