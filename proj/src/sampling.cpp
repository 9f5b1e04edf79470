#include "kinetic/sampling.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kinetic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void validate(const RandomCoefficient::Family& f) {
  std::visit(overloaded{
                 [](const Deterministic& d) {
                   if (!std::isfinite(d.c)) throw std::invalid_argument("Deterministic: non-finite value");
                 },
                 [](const Uniform& u) {
                   if (!(std::isfinite(u.a) && std::isfinite(u.b) && u.a < u.b))
                     throw std::invalid_argument("Uniform: need finite a < b");
                 },
                 [](const TwoPoint& t) {
                   if (!(std::isfinite(t.x1) && std::isfinite(t.x2)))
                     throw std::invalid_argument("TwoPoint: non-finite atom");
                   if (t.p1 < 0 || t.p2 < 0 || std::abs(t.p1 + t.p2 - 1.0) > 1e-12)
                     throw std::invalid_argument("TwoPoint: weights must be >= 0 and sum to 1");
                 },
                 [](const AffineOfBase& a) {
                   if (!a.base) throw std::invalid_argument("AffineOfBase: missing base");
                   if (!(std::isfinite(a.offset) && std::isfinite(a.scale)))
                     throw std::invalid_argument("AffineOfBase: non-finite offset/scale");
                 },
             },
             f);
}

}  // namespace

RandomCoefficient::RandomCoefficient(Family f) : family_(std::move(f)) { validate(family_); }

RandomCoefficient RandomCoefficient::centered_uniform(double variance) {
  if (!(variance > 0)) throw std::invalid_argument("centered_uniform: variance must be > 0");
  const double h = std::sqrt(3.0 * variance);
  return uniform(-h, h);
}

RandomCoefficient RandomCoefficient::affine(double offset, double scale, RandomCoefficient base) {
  return {AffineOfBase{offset, scale, std::make_shared<const RandomCoefficient>(std::move(base))}};
}

RandomCoefficient::Family RandomCoefficient::canonical() const {
  return std::visit(
      overloaded{
          [](const Deterministic& d) -> Family { return d; },
          [](const Uniform& u) -> Family { return u; },
          [](const TwoPoint& t) -> Family { return t; },
          [](const AffineOfBase& a) -> Family {
            const Family inner = a.base->canonical();
            return std::visit(
                overloaded{
                    [&](const Deterministic& d) -> Family { return Deterministic{a.offset + a.scale * d.c}; },
                    [&](const Uniform& u) -> Family {
                      if (a.scale == 0.0) return Deterministic{a.offset};
                      double lo = a.offset + a.scale * u.a;
                      double hi = a.offset + a.scale * u.b;
                      if (lo > hi) std::swap(lo, hi);
                      return Uniform{lo, hi};
                    },
                    [&](const TwoPoint& t) -> Family {
                      return TwoPoint{a.offset + a.scale * t.x1, t.p1, a.offset + a.scale * t.x2, t.p2};
                    },
                    [](const AffineOfBase&) -> Family { throw std::logic_error("canonical form is never affine"); },
                },
                inner);
          },
      },
      family_);
}

double RandomCoefficient::raw_moment(int k) const {
  if (k < 0 || k > 8) throw std::invalid_argument("raw_moment: order must be in [0, 8]");
  if (k == 0) return 1.0;
  return std::visit(overloaded{
                        [k](const Deterministic& d) { return std::pow(d.c, k); },
                        [k](const Uniform& u) {
                          // Expand around the midpoint: avoids b^{k+1} - a^{k+1} cancellation.
                          const double m = 0.5 * (u.a + u.b);
                          const double h = 0.5 * (u.b - u.a);
                          double s = 0.0;
                          for (int j = 0; j <= k; j += 2)
                            s += binomial(k, j) * std::pow(m, k - j) * std::pow(h, j) / (j + 1);
                          return s;
                        },
                        [k](const TwoPoint& t) { return t.p1 * std::pow(t.x1, k) + t.p2 * std::pow(t.x2, k); },
                        [k](const AffineOfBase& a) {
                          double s = 0.0;
                          for (int j = 0; j <= k; ++j) {
                            if (a.scale == 0.0 && j > 0) break;
                            s += binomial(k, j) * std::pow(a.offset, k - j) * std::pow(a.scale, j) *
                                 a.base->raw_moment(j);
                          }
                          return s;
                        },
                    },
                    family_);
}

double RandomCoefficient::variance() const {
  const double m = mean();
  return std::max(0.0, raw_moment(2) - m * m);
}

double RandomCoefficient::moment(double s) const {
  if (s == 0.0) return 1.0;
  if (s > 0 && s <= 8 && s == std::floor(s)) return raw_moment(static_cast<int>(s));
  auto power = [s](double x) {
    if (x < 0 || (s < 0 && x == 0)) throw std::domain_error("fractional moment needs positive support");
    return x == 0.0 ? 0.0 : std::pow(x, s);
  };
  return std::visit(
      overloaded{
          [&](const Deterministic& d) { return power(d.c); },
          [&](const TwoPoint& t) {
            double r = 0.0;
            if (t.p1 > 0) r += t.p1 * power(t.x1);
            if (t.p2 > 0) r += t.p2 * power(t.x2);
            return r;
          },
          [&](const Uniform& u) {
            if (u.a < 0 || (s < 0 && u.a == 0))
              throw std::domain_error("fractional moment needs positive support");
            if (u.a == 0.0) {
              if (s <= -1) throw std::domain_error("moment diverges");
              return std::pow(u.b, s) / (s + 1.0);
            }
            using boost::math::quadrature::gauss_kronrod;
            const double integral =
                gauss_kronrod<double, 31>::integrate([s](double x) { return std::pow(x, s); }, u.a, u.b, 15, 1e-14);
            return integral / (u.b - u.a);
          },
          [](const AffineOfBase&) -> double { throw std::logic_error("unreachable"); },
      },
      canonical());
}

double RandomCoefficient::cdf(double x) const {
  return std::visit(overloaded{
                        [x](const Deterministic& d) { return x >= d.c ? 1.0 : 0.0; },
                        [x](const Uniform& u) { return std::clamp((x - u.a) / (u.b - u.a), 0.0, 1.0); },
                        [x](const TwoPoint& t) {
                          double r = 0.0;
                          if (x >= t.x1) r += t.p1;
                          if (x >= t.x2) r += t.p2;
                          return std::min(r, 1.0);
                        },
                        [](const AffineOfBase&) -> double { throw std::logic_error("unreachable"); },
                    },
                    canonical());
}

double RandomCoefficient::support_min() const {
  return std::visit(overloaded{
                        [](const Deterministic& d) { return d.c; },
                        [](const Uniform& u) { return u.a; },
                        [](const TwoPoint& t) {
                          if (t.p1 == 0) return t.x2;
                          if (t.p2 == 0) return t.x1;
                          return std::min(t.x1, t.x2);
                        },
                        [](const AffineOfBase& a) {
                          if (a.scale >= 0) return a.offset + a.scale * a.base->support_min();
                          return a.offset + a.scale * a.base->support_max();
                        },
                    },
                    family_);
}

double RandomCoefficient::support_max() const {
  return std::visit(overloaded{
                        [](const Deterministic& d) { return d.c; },
                        [](const Uniform& u) { return u.b; },
                        [](const TwoPoint& t) {
                          if (t.p1 == 0) return t.x2;
                          if (t.p2 == 0) return t.x1;
                          return std::max(t.x1, t.x2);
                        },
                        [](const AffineOfBase& a) {
                          if (a.scale >= 0) return a.offset + a.scale * a.base->support_max();
                          return a.offset + a.scale * a.base->support_min();
                        },
                    },
                    family_);
}

bool RandomCoefficient::is_deterministic() const {
  return std::holds_alternative<Deterministic>(canonical());
}

double RandomCoefficient::draw(RngStream& rng) const {
  return std::visit(overloaded{
                        [](const Deterministic& d) { return d.c; },
                        [&rng](const Uniform& u) {
                          const double x = u.a + (u.b - u.a) * rng.uniform();
                          return std::clamp(x, u.a, u.b);
                        },
                        [&rng](const TwoPoint& t) { return rng.uniform() < t.p1 ? t.x1 : t.x2; },
                        [&rng](const AffineOfBase& a) {
                          if (a.scale == 0.0) return a.offset;
                          const double x = a.base->draw(rng);
                          return a.offset + a.scale * x;
                        },
                    },
                    family_);
}

std::string RandomCoefficient::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const Deterministic& d) { os << "Deterministic(" << d.c << ")"; },
                 [&](const Uniform& u) { os << "Uniform(" << u.a << ", " << u.b << ")"; },
                 [&](const TwoPoint& t) {
                   os << "TwoPoint(" << t.x1 << ", " << t.p1 << ", " << t.x2 << ", " << t.p2 << ")";
                 },
                 [&](const AffineOfBase& a) {
                   os << a.offset << " + " << a.scale << " * " << a.base->describe();
                 },
             },
             family_);
  return os.str();
}

bool draw_bernoulli(RngStream& rng, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("draw_bernoulli: r must lie in [0, 1]");
  return rng.uniform() < r;
}

double draw_standard_gamma(RngStream& rng, double shape) {
  if (!(shape > 0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    const double g = draw_standard_gamma(rng, shape + 1.0);
    return g * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double draw_inverse_gamma(RngStream& rng, double shape, double scale) {
  if (!(shape > 0 && scale > 0)) throw std::invalid_argument("inverse gamma: shape and scale must be > 0");
  return scale / draw_standard_gamma(rng, shape);
}

}  // namespace kinetic
