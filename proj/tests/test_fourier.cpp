#include <doctest.h>

#include <cmath>
#include <complex>

#include "kinetic/fourier.hpp"
#include "kinetic/montecarlo.hpp"
#include "kinetic/rng.hpp"

using namespace kinetic;

namespace {

CfFunction dirac(double a) {
  return [a](double xi) { return std::exp(std::complex<double>(0, -xi * a)); };
}

CfFunction gaussian_cf(double m, double v) {
  return [m, v](double xi) { return std::exp(std::complex<double>(-0.5 * v * xi * xi, -xi * m)); };
}

std::vector<double> normal_draws(std::uint64_t seed, std::size_t n, double mean, double sd) {
  RngStream r(seed, {run_id(StreamTag::Generic, 0), 0, 0});
  std::vector<double> out(n);
  for (auto& x : out) x = mean + sd * r.normal();
  return out;
}

}  // namespace

TEST_SUITE("fourier_metrics") {
  TEST_CASE("empirical CF basics") {
    const auto grid = make_xi_grid();
    REQUIRE(grid.xi.size() == 1024);
    for (double x : grid.xi) REQUIRE(x != 0.0);

    const std::vector<double> zeros(10, 0.0);
    for (const auto& v : empirical_cf(zeros, grid).values) CHECK(v == std::complex<double>(1.0, 0.0));

    const std::vector<double> pm{-1.0, 1.0, 1.0, -1.0};
    const auto cf = empirical_cf(pm, grid);
    for (std::size_t j = 0; j < grid.xi.size(); ++j) {
      CHECK(std::abs(cf.values[j].real() - std::cos(grid.xi[j])) <= 1e-15);
      CHECK(std::abs(cf.values[j].imag()) <= 1e-15);
    }
  }

  TEST_CASE("Gaussian samples within 4/sqrt(n)") {
    const double M20 = 1.7;
    const std::size_t n = 200000;
    const auto s = normal_draws(5, n, 0.0, std::sqrt(M20));
    const auto grid = make_xi_grid(1e-4, 1e2, 128);
    const auto cf = empirical_cf(s, grid, 2);
    for (std::size_t j = 0; j < grid.xi.size(); ++j) {
      const double xi = grid.xi[j];
      CHECK(std::abs(cf.values[j] - std::exp(-M20 * xi * xi / 2)) <= 4.0 / std::sqrt(double(n)));
      CHECK(std::abs(cf.values[j]) <= 1.0);
    }
    // conjugate symmetry, exact
    const std::size_t h = grid.per_side;
    for (std::size_t j = 0; j < h; ++j) {
      REQUIRE(grid.xi[h - 1 - j] == -grid.xi[h + j]);
      CHECK(cf.values[h - 1 - j] == std::conj(cf.values[h + j]));
    }
    // worker count does not matter
    const auto cf1 = empirical_cf(s, grid, 1);
    CHECK(cf1.values == cf.values);
  }

  TEST_CASE("metric identity and Dirac d1") {
    const auto grid = make_xi_grid();
    const auto a = analytic_cf(dirac(0.0), grid, {0.0});
    CHECK(fourier_distance(a, a, 1.0).value == 0.0);
    const auto b = analytic_cf(dirac(0.7), grid, {0.7});
    CHECK(std::abs(fourier_distance(a, b, 1.0).value - 0.7) <= 1e-6);
    CHECK(fourier_distance(a, b, 1.0).value == fourier_distance(b, a, 1.0).value);
  }

  TEST_CASE("triangle inequality on analytic inputs") {
    const auto grid = make_xi_grid();
    const std::vector<CharacteristicFunction> cfs{
        analytic_cf(gaussian_cf(1, 1), grid, {1, 2}), analytic_cf(gaussian_cf(1, 0.3), grid, {1, 1.3}),
        analytic_cf(dirac(1.0), grid, {1, 1}), analytic_cf(gaussian_cf(1, 2.5), grid, {1, 3.5})};
    for (double s : {1.0, 1.5, 2.0})
      for (const auto& x : cfs)
        for (const auto& y : cfs)
          for (const auto& z : cfs)
            CHECK(fourier_distance(x, z, s).value <=
                  fourier_distance(x, y, s).value + fourier_distance(y, z, s).value + 1e-12);
  }

  TEST_CASE("moment mismatch is a warning") {
    const auto grid = make_xi_grid();
    const auto a = analytic_cf(gaussian_cf(0, 1), grid, {0, 1});
    const auto b = analytic_cf(gaussian_cf(1, 1), grid, {1, 2});
    const auto r = fourier_distance(a, b, 2.0);
    CHECK(r.moment_mismatch_warning);
    CHECK(std::isfinite(r.value));
    CHECK(r.value > 1e3);  // ~ 1/xi_min near the origin
    CHECK_FALSE(fourier_distance(a, b, 1.0).moment_mismatch_warning);
    const auto c = analytic_cf(gaussian_cf(0, 2), grid, {0, 2});
    CHECK_FALSE(fourier_distance(a, c, 2.0).moment_mismatch_warning);
  }

  TEST_CASE("refining the grid never loses more than the tolerance") {
    const auto s1 = normal_draws(8, 4000, 1.0, 1.0);
    auto s2 = normal_draws(9, 4000, 1.0, 1.3);
    const auto coarse = make_xi_grid(1e-4, 1e2, 129);
    const auto fine = make_xi_grid(1e-4, 1e2, 513);
    for (double s : {1.0, 2.0}) {
      const double dc = fourier_distance(empirical_cf(s1, coarse, 1, 1.0), empirical_cf(s2, coarse, 1, 1.0), s).value;
      const double df = fourier_distance(empirical_cf(s1, fine, 1, 1.0), empirical_cf(s2, fine, 1, 1.0), s).value;
      CHECK(df >= dc - 1e-9);
    }
  }

  TEST_CASE("interpolation d1 <= 2 sqrt2 d2^(1/2)") {
    const auto grid = make_xi_grid(1e-4, 1e2, 256);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const auto a = normal_draws(20 + k, 20000, 0.5, 1.0 + 0.2 * k);
      RngStream r(30 + k, {0, 0, 0});
      std::vector<double> b(20000);
      for (auto& x : b) x = -1.0 + 3.0 * r.uniform();
      const auto fa = empirical_cf(a, grid, 1, 0.5);
      const auto fb = empirical_cf(b, grid, 1, 0.5);
      const double d1 = fourier_distance(fa, fb, 1.0).value;
      const double d2 = fourier_distance(fa, fb, 2.0).value;
      CHECK(d1 <= 2 * std::sqrt(2.0) * std::sqrt(d2));
    }
  }

  TEST_CASE("dilation scaling") {
    const auto grid = make_xi_grid();
    const auto a = dirac(0.0);
    const auto b = dirac(0.7);
    const auto one = dilation_scaling_check(a, b, grid, 1.0, 1.0);
    CHECK(one.lhs == one.rhs);
    const auto two = dilation_scaling_check(a, b, grid, 2.0, 2.0);
    CHECK(std::abs(two.lhs - two.rhs) <= 1e-10 * two.rhs);
    CHECK(two.rhs == doctest::Approx(4.0 * two.ds).epsilon(1e-15));
    const auto half = dilation_scaling_check(a, b, grid, 1.0, 0.5);
    CHECK(std::abs(half.lhs - half.rhs) <= 1e-10 * half.rhs);
    CHECK(half.rhs == doctest::Approx(0.5 * half.ds).epsilon(1e-15));
  }

  TEST_CASE("graph distance") {
    const auto grid = make_xi_grid();
    const std::vector<CharacteristicFunction> F{analytic_cf(dirac(0), grid), analytic_cf(dirac(0), grid)};
    const std::vector<CharacteristicFunction> G{analytic_cf(dirac(1), grid), analytic_cf(dirac(2), grid)};
    const std::vector<double> rho{0.5, 0.5};
    CHECK(std::abs(graph_distance(rho, F, G, 1.0) - 1.5) <= 2e-6);
    CHECK(graph_distance(rho, F, F, 1.0) == 0.0);
    const std::vector<double> one{1.0};
    CHECK(graph_distance(one, std::span(F).first(1), std::span(G).first(1), 1.0) ==
          fourier_distance(F[0], G[0], 1.0).value);
    const std::vector<double> empty_vertex{1.0, 1e-13};
    CHECK(graph_distance(empty_vertex, F, G, 1.0) == fourier_distance(F[0], G[0], 1.0).value);
  }

  TEST_CASE("L2 histogram norm") {
    Histogram h;
    h.edges = {0, 1, 2, 3, 4};
    h.density = {0.25, 0.25, 0.25, 0.25};
    CHECK(l2_histogram_norm(h) == doctest::Approx(0.5).epsilon(1e-15));
    Histogram one;
    one.edges = {0, 0.3};
    one.density = {1 / 0.3};
    CHECK(l2_histogram_norm(one) == doctest::Approx(1 / std::sqrt(0.3)).epsilon(1e-14));
  }

  TEST_CASE("log slope fit") {
    std::vector<double> t, v;
    for (int k = 0; k < 10; ++k) {
      t.push_back(0.5 * k);
      v.push_back(3.0 * std::exp(-0.4 * 0.5 * k));
    }
    const auto f = fit_log_slope(t, v);
    CHECK(f.slope == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.slope_stderr <= 1e-12);
  }
}
