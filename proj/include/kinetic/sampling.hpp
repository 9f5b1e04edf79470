#pragma once

#include <memory>
#include <string>
#include <variant>

#include "kinetic/rng.hpp"

namespace kinetic {

class RandomCoefficient;

struct Deterministic {
  double c = 0.0;
};

struct Uniform {
  double a = 0.0;
  double b = 1.0;
};

struct TwoPoint {
  double x1 = -1.0;
  double p1 = 0.5;
  double x2 = 1.0;
  double p2 = 0.5;
};

struct AffineOfBase {
  double offset = 0.0;
  double scale = 1.0;
  std::shared_ptr<const RandomCoefficient> base;
};

// Scalar random variable with closed-form low-order moments. Used for the
// interaction coefficients p, q and for the noise eta.
class RandomCoefficient {
 public:
  using Family = std::variant<Deterministic, Uniform, TwoPoint, AffineOfBase>;

  RandomCoefficient() : family_(Deterministic{0.0}) {}
  RandomCoefficient(Family f);  // NOLINT(google-explicit-constructor)

  static RandomCoefficient constant(double c) { return {Deterministic{c}}; }
  static RandomCoefficient uniform(double a, double b) { return {Uniform{a, b}}; }
  // Uniform with mean zero and the given variance.
  static RandomCoefficient centered_uniform(double variance);
  static RandomCoefficient two_point(double x1, double p1, double x2, double p2) {
    return {TwoPoint{x1, p1, x2, p2}};
  }
  static RandomCoefficient affine(double offset, double scale, RandomCoefficient base);

  const Family& family() const noexcept { return family_; }

  // Equivalent Deterministic, Uniform or TwoPoint law (affine maps folded in).
  Family canonical() const;

  double mean() const { return raw_moment(1); }
  double variance() const;
  // E[X^k] for integer k in [0, 8].
  double raw_moment(int k) const;
  // E[X^s] for real s; requires a nonnegative support (or strictly positive
  // support when s < 0).
  double moment(double s) const;
  // P(X <= x).
  double cdf(double x) const;

  double support_min() const;
  double support_max() const;
  bool is_deterministic() const;

  double draw(RngStream& rng) const;

  std::string describe() const;

 private:
  Family family_;
};

bool draw_bernoulli(RngStream& rng, double r);

inline double draw_coefficient(RngStream& rng, const RandomCoefficient& c) { return c.draw(rng); }

// Gamma(shape, rate = 1) via Marsaglia-Tsang; shape < 1 boosted by U^{1/shape}.
double draw_standard_gamma(RngStream& rng, double shape);

// 1/X with X ~ Gamma(shape, rate = scale), i.e. density proportional to
// v^{-shape-1} exp(-scale/v).
double draw_inverse_gamma(RngStream& rng, double shape, double scale);

}  // namespace kinetic
