#include "kinetic/kinetics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kEtaMomentTolerance = 1e-12;
// eta_min_required can coincide with the support of a natural choice of eta
// (Uniform(-sqrt 3, sqrt 3) for sigma^2/(2 lambda) = 6/7), so compare with a
// relative slack instead of exactly.
constexpr double kEtaSupportSlack = 1e-12;

void check_lambda_sigma(double lambda, double sigma, bool sigma_may_vanish) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be > 0");
  if (!(sigma > 0 || (sigma_may_vanish && sigma == 0)))
    throw std::invalid_argument(sigma_may_vanish ? "sigma must be >= 0" : "sigma must be > 0");
}

void check_eta_moments(const RandomCoefficient& eta) {
  const double m1 = eta.raw_moment(1);
  const double m2 = eta.raw_moment(2);
  if (std::abs(m1) > kEtaMomentTolerance || std::abs(m2 - 1.0) > kEtaMomentTolerance)
    throw EtaMomentsInvalid("eta needs <eta> = 0 and <eta^2> = 1, got " + std::to_string(m1) + " and " +
                            std::to_string(m2));
}

void check_eta_support(const RandomCoefficient& eta, double eta_min) {
  if (!std::isfinite(eta_min)) return;
  const double lo = eta.support_min();
  if (lo < eta_min - kEtaSupportSlack * std::max(1.0, std::abs(eta_min)))
    throw EtaSupportInvalid("eta support starts at " + std::to_string(lo) + ", below the required " +
                            std::to_string(eta_min));
}

double diffusion_eta_min(double lambda, double sigma) {
  const double r = sigma * sigma / (2.0 * lambda);
  return -std::sqrt(r / (2.0 * (1.0 - r)));
}

}  // namespace

void InteractionLaw::validate() const {
  if (p.support_min() < 0) throw std::invalid_argument("p can be negative: " + p.describe());
  if (q.support_min() < 0) throw std::invalid_argument("q can be negative: " + q.describe());
}

double mixed_moment(const InteractionLaw& law, int k, int m) { return law.p.raw_moment(k) * law.q.raw_moment(m); }

AdmissibilityReport law_statistics(const InteractionLaw& law) {
  AdmissibilityReport r;
  r.mean_sum = law.p.raw_moment(1) + law.q.raw_moment(1);
  r.energy_sum = law.p.raw_moment(2) + law.q.raw_moment(2);
  r.cubic_sum = law.p.raw_moment(3) + law.q.raw_moment(3);
  r.pq_mean = mixed_moment(law, 1, 1);
  r.mean_conserving = std::abs(r.mean_sum - 1.0) <= kStatisticTolerance;
  r.energy_dissipative = r.energy_sum < 1.0 - kStatisticTolerance;
  r.cubic_contractive = r.cubic_sum < 1.0 - kStatisticTolerance;
  return r;
}

double regime_eps_max(const ScalingRegime& regime) {
  return std::visit(overloaded{
                        [](const AdvectionDiffusion& r) {
                          check_lambda_sigma(r.lambda, r.sigma, false);
                          const double ratio = r.sigma * r.sigma / (2.0 * r.lambda);
                          if (!(ratio < 1.0)) throw std::invalid_argument("need sigma^2 < 2 lambda");
                          return (1.0 - ratio) / r.lambda;
                        },
                        [](const AdvectionDominated& r) {
                          check_lambda_sigma(r.lambda, r.sigma, false);
                          if (!(r.delta > 0)) throw std::invalid_argument("delta must be > 0");
                          const double s2 = r.sigma * r.sigma;
                          if (!(s2 > 2.0 * r.lambda * (1.0 - r.lambda)))
                            throw std::invalid_argument("need sigma^2 > 2 lambda (1 - lambda)");
                          return std::pow(2.0 * r.lambda / (2.0 * r.lambda * r.lambda + s2),
                                          1.0 / std::min(r.delta, 1.0));
                        },
                        [](const ConservedEnergy& r) {
                          check_lambda_sigma(r.lambda, r.sigma, true);
                          const double ratio = r.sigma * r.sigma / (2.0 * r.lambda);
                          if (!(ratio < 1.0)) throw std::invalid_argument("need sigma^2 < 2 lambda");
                          return (1.0 - ratio) / r.lambda;
                        },
                    },
                    regime);
}

double regime_eta_min(const ScalingRegime& regime) {
  constexpr double none = -std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const AdvectionDiffusion& r) { return diffusion_eta_min(r.lambda, r.sigma); },
                        [none](const AdvectionDominated&) { return none; },
                        [none](const ConservedEnergy& r) {
                          return r.sigma > 0 ? diffusion_eta_min(r.lambda, r.sigma) : none;
                        },
                    },
                    regime);
}

MaterializedLaw materialize(const ScalingRegime& regime, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be > 0");
  const double eps_max = regime_eps_max(regime);
  if (!(eps < eps_max)) throw EpsilonTooLarge(eps, eps_max);
  const double eta_min = regime_eta_min(regime);

  InteractionLaw law = std::visit(
      overloaded{
          [&](const AdvectionDiffusion& r) {
            check_eta_moments(r.eta);
            check_eta_support(r.eta, eta_min);
            return InteractionLaw{RandomCoefficient::affine(1.0 - eps * r.lambda, std::sqrt(eps) * r.sigma, r.eta),
                                  RandomCoefficient::constant(eps * r.lambda)};
          },
          [&](const AdvectionDominated& r) {
            check_eta_moments(r.eta);
            const double noise = std::pow(eps, 0.5 * (1.0 + r.delta)) * r.sigma;
            return InteractionLaw{RandomCoefficient::affine(1.0 - eps * r.lambda, noise, r.eta),
                                  RandomCoefficient::constant(eps * r.lambda)};
          },
          [&](const ConservedEnergy& r) {
            const double ratio = r.sigma * r.sigma / (2.0 * r.lambda);
            const double q = std::sqrt(2.0 * r.lambda * eps) * std::sqrt(1.0 - ratio - 0.5 * eps * r.lambda);
            if (r.sigma == 0.0)
              return InteractionLaw{RandomCoefficient::constant(1.0 - eps * r.lambda), RandomCoefficient::constant(q)};
            check_eta_moments(r.eta);
            check_eta_support(r.eta, eta_min);
            return InteractionLaw{RandomCoefficient::affine(1.0 - eps * r.lambda, std::sqrt(eps) * r.sigma, r.eta),
                                  RandomCoefficient::constant(q)};
          },
      },
      regime);

  if (law.p.support_min() < 0)
    throw EtaSupportInvalid("p_eps can be negative at eps = " + std::to_string(eps) + ": " + law.p.describe());
  law.validate();

  MaterializedLaw out{law, law_statistics(law)};
  out.report.eps_max = eps_max;
  out.report.eta_min_required = eta_min;
  return out;
}

double spectral_S(const InteractionLaw& law, double s) {
  if (!(s >= 0)) throw std::invalid_argument("spectral_S: s must be >= 0");
  return law.p.moment(s) + law.q.moment(s) - 1.0;
}

TailClass classify_tail(const InteractionLaw& law, double s_max) {
  if (!(s_max > 1)) throw std::invalid_argument("classify_tail: s_max must exceed 1");
  // S is convex with S(1) = 0 for mean-conserving laws, so it has at most one
  // further root. Scan for the first positive value, then bisect.
  constexpr int kScan = 1100;
  double prev_s = 1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double s = 1.0 + (s_max - 1.0) * i / kScan;
    if (spectral_S(law, s) > 0) {
      double lo = prev_s;
      double hi = s;
      for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (spectral_S(law, mid) > 0 ? hi : lo) = mid;
      }
      const double s_bar = 0.5 * (lo + hi);
      return FatTails{s_bar, static_cast<int>(std::floor(s_bar)) + 1};
    }
    prev_s = s;
  }
  return SlimTails{s_max};
}

}  // namespace kinetic
