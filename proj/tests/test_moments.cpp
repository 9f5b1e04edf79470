#include <doctest.h>

#include <cmath>

#include "kinetic/errors.hpp"
#include "kinetic/moments.hpp"

using namespace kinetic;

namespace {

InteractionLaw det(double p, double q) { return {RandomCoefficient::constant(p), RandomCoefficient::constant(q)}; }

// p = 0.75 + eta with Var(eta) = 0.1, q = 0.25.
InteractionLaw example_law() {
  return {RandomCoefficient::affine(0.75, 1.0, RandomCoefficient::centered_uniform(0.1)),
          RandomCoefficient::constant(0.25)};
}

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("mean closed form") {
    CHECK(mean_closed_form(2.0, det(0.5, 0.4), 1.0) == doctest::Approx(2.0 * std::exp(-0.1)).epsilon(1e-15));
    CHECK(mean_closed_form(2.0, det(0.5, 0.4), 1.0) == doctest::Approx(1.80967).epsilon(1e-5));
    CHECK(mean_closed_form(0.0, det(0.5, 0.4), 3.0) == 0.0);
    for (double t : {0.0, 1.0, 10.0, 100.0}) CHECK(mean_closed_form(1.7, example_law(), t) == doctest::Approx(1.7));
  }

  TEST_CASE("energy closed form and its bound") {
    const auto law = example_law();
    CHECK(energy_closed_form(1.0, 2.5, law, 0.0) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(energy_limit(1.0, law) == doctest::Approx(0.375 / 0.275).epsilon(1e-13));
    CHECK(energy_limit(1.0, law) == doctest::Approx(1.363636).epsilon(1e-6));
    CHECK(energy_closed_form(1.0, 2.5, law, 200.0) == doctest::Approx(0.375 / 0.275).epsilon(1e-12));
    const double bound = energy_bound(1.0, 2.5, law);
    for (double t = 0; t <= 30; t += 0.25) CHECK(energy_closed_form(1.0, 2.5, law, t) <= bound);

    const InteractionLaw conserving{RandomCoefficient::constant(1.0), RandomCoefficient::constant(0.0)};
    CHECK_THROWS(energy_closed_form(1.0, 2.0, conserving, 1.0));
    CHECK_THROWS(energy_closed_form(1.0, 2.0, det(0.5, 0.4), 1.0));
  }

  TEST_CASE("RK4 reproduces the closed forms") {
    const auto law = example_law();
    const auto s = integrate_moment_system(law, {1.0, 1.3, 2.9}, 10.0, 1e-3);
    for (std::size_t k = 0; k < s.times.size(); k += 500) {
      const double t = s.times[k];
      CHECK(s.values[k][0] == 1.0);
      CHECK(std::abs(s.values[k][1] - mean_closed_form(1.3, law, t)) <= 1e-8);
      CHECK(std::abs(s.values[k][2] - energy_closed_form(1.3, 2.9, law, t)) <= 1e-8);
      CHECK(s.values[k][2] - s.values[k][1] * s.values[k][1] >= -1e-10);
      CHECK(s.values[k][2] <= energy_bound(1.3, 2.9, law) + 1e-12);
    }
    const auto nm = integrate_moment_system(det(0.5, 0.4), {1.0, 2.0}, 1.0, 1e-3);
    CHECK(std::abs(nm.values.back()[1] - mean_closed_form(2.0, det(0.5, 0.4), 1.0)) <= 1e-8);
    for (std::size_t k = 1; k < s.times.size(); ++k) REQUIRE(s.times[k] > s.times[k - 1]);
  }

  TEST_CASE("Dirac at zero is a fixed point") {
    const auto s = integrate_moment_system(example_law(), {1, 0, 0, 0, 0, 0}, 5.0, 1e-2);
    for (const auto& v : s.values)
      for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] == 0.0);
  }

  TEST_CASE("third moment grows under a fat-tail law") {
    const auto m = materialize(AdvectionDiffusion{3.5, std::sqrt(6.0), RandomCoefficient::two_point(-1, 0.5, 1, 0.5)}, 1e-3);
    const double S3 = spectral_S(m.law, 3.0);
    REQUIRE(S3 > 0);
    const auto s = integrate_moment_system(m.law, {1.0, 1.0, 2.0, 5.0}, 400.0, 0.05);
    // Past the transient M3 increases monotonically and dominates M30 e^{S(3) t}.
    for (std::size_t k = s.times.size() / 2; k < s.times.size(); ++k) CHECK(s.values[k][3] > s.values[k - 1][3]);
    for (std::size_t k = 0; k < s.times.size(); k += 100)
      CHECK(s.values[k][3] >= 5.0 * std::exp(S3 * s.times[k]) * (1 - 1e-12));
    CHECK(s.values.back()[3] > 10 * 5.0);
  }

  TEST_CASE("step-size guard") {
    CHECK_THROWS_AS(integrate_moment_system(det(3.0, 3.0), {1, 1, 1}, 1.0, 0.1), StepRejected);
    CHECK_THROWS(integrate_moment_system(det(0.5, 0.5), std::vector<double>(10, 1.0), 1.0, 0.01));
  }

  TEST_CASE("steady third bound") {
    CHECK(steady_third_bound(det(0.5, 0.5), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(steady_third_bound(det(0.5, 0.5), 0.0) == 0.0);
    const auto m = materialize(AdvectionDiffusion{3.5, std::sqrt(6.0), RandomCoefficient::centered_uniform(1.0)}, 1e-3);
    CHECK(law_statistics(m.law).cubic_sum > 1.0);
    CHECK_THROWS(steady_third_bound(m.law, 1.0));
  }

  TEST_CASE("graph: single vertex reduces to the scalar system") {
    GraphModel g = make_graph(Matrix::identity(1), 1.0, NormalizedRate{1.0}, {example_law()});
    const auto s = graph_moment_systems(g, {1.0}, {1.2}, {2.0}, 5.0, 1e-3);
    REQUIRE(s.size() == 1);
    for (std::size_t k = 0; k < s[0].times.size(); k += 250) {
      const double t = s[0].times[k];
      CHECK(s[0].values[k][0] == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(s[0].values[k][1] - 1.2) <= 1e-12);
      CHECK(std::abs(s[0].values[k][2] - energy_closed_form(1.2, 2.0, example_law(), t)) <= 1e-8);
    }
  }

  TEST_CASE("graph: two-vertex solvable mass") {
    const double beta = 0.3;
    const Matrix P = Matrix::from_rows({{1 - beta, 0}, {beta, 1}});
    GraphModel g = make_graph(P, 1.0, PerVertexRates{{1.0, 0.0}}, {example_law(), example_law()});
    const auto s = graph_moment_systems(g, {0.6, 0.4}, {1.0, 0.0}, {2.0, 0.25}, 5.0, 1e-3);
    for (std::size_t k = 0; k < s[0].times.size(); ++k) {
      const double t = s[0].times[k];
      CHECK(std::abs(s[0].values[k][0] - 0.6 * std::exp(-beta * t)) <= 1e-8);
      CHECK(std::abs(s[0].values[k][0] + s[1].values[k][0] - 1.0) <= 1e-12 * (1 + t));
      CHECK(s[1].values[k][0] >= 0);
    }
  }

  TEST_CASE("graph: equal means stay put") {
    const Matrix P = Matrix::from_rows({{0.2, 0.5, 0.3}, {0.5, 0.2, 0.3}, {0.3, 0.3, 0.4}});
    const InteractionLaw other{RandomCoefficient::uniform(0.3, 0.7), RandomCoefficient::constant(0.5)};
    GraphModel g = make_graph(P, 0.7, NormalizedRate{1.5}, {example_law(), det(0.5, 0.5), other});
    const auto s = graph_moment_systems(g, {0.2, 0.5, 0.3}, {1.4, 1.4, 1.4}, {3.0, 2.0, 4.0}, 10.0, 1e-3);
    for (std::size_t k = 0; k < s[0].times.size(); k += 100) {
      double mass = 0;
      for (const auto& v : s) {
        CHECK(std::abs(v.values[k][1] - 1.4) <= 1e-10);
        CHECK(v.values[k][2] - v.values[k][1] * v.values[k][1] >= -1e-10);
        mass += v.values[k][0];
      }
      CHECK(std::abs(mass - 1.0) <= 1e-12 * (1 + s[0].times[k]));
    }
  }
}
