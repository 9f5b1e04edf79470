#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace kinetic {

struct Histogram {
  std::vector<double> edges;    // B + 1 increasing values
  std::vector<double> density;  // B values
  std::size_t n_samples = 0;
  std::size_t overflow = 0;  // samples outside [edges.front(), edges.back()]

  std::size_t bins() const { return density.size(); }
  double covered_fraction() const;
};

struct ExplicitEdges {
  std::vector<double> edges;
};

struct UniformBins {
  double lo = 0;
  double hi = 1;
  std::size_t bins = 100;
};

using HistogramSpec = std::variant<ExplicitEdges, UniformBins>;

Histogram histogram(std::span<const double> states, const HistogramSpec& spec);

// 100 bins over [min, max]; clipped to the 0.1%-99.9% quantiles when
// `fat_tails` is set.
UniformBins default_histogram_spec(std::span<const double> states, bool fat_tails, std::size_t bins = 100);

// Sum over bins of |h_b - m_b / w_b| w_b, where m_b is the reference mass in
// the bin divided by `reference_mass`. Only the histogram range is compared.
double l1_distance(const Histogram& h, const std::function<double(double, double)>& bin_mass,
                   double reference_mass = 1.0);

}  // namespace kinetic
