#include "kinetic/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinetic {

double Histogram::covered_fraction() const {
  double s = 0.0;
  for (std::size_t b = 0; b < density.size(); ++b) s += density[b] * (edges[b + 1] - edges[b]);
  return s;
}

namespace {

std::vector<double> resolve_edges(const HistogramSpec& spec) {
  if (const auto* ex = std::get_if<ExplicitEdges>(&spec)) {
    if (ex->edges.size() < 2) throw std::invalid_argument("histogram needs at least one bin");
    for (std::size_t i = 1; i < ex->edges.size(); ++i)
      if (!(ex->edges[i] > ex->edges[i - 1])) throw std::invalid_argument("histogram edges must increase");
    return ex->edges;
  }
  const auto& u = std::get<UniformBins>(spec);
  if (u.bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(u.hi > u.lo) || !std::isfinite(u.lo) || !std::isfinite(u.hi))
    throw std::invalid_argument("histogram range is degenerate");
  std::vector<double> edges(u.bins + 1);
  const double w = (u.hi - u.lo) / static_cast<double>(u.bins);
  for (std::size_t i = 0; i < u.bins; ++i) edges[i] = u.lo + w * static_cast<double>(i);
  edges[u.bins] = u.hi;
  return edges;
}

}  // namespace

Histogram histogram(std::span<const double> states, const HistogramSpec& spec) {
  if (states.empty()) throw std::invalid_argument("histogram of an empty state array");
  Histogram h;
  h.edges = resolve_edges(spec);
  const std::size_t bins = h.edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  const double lo = h.edges.front();
  const double hi = h.edges.back();
  const auto* uniform = std::get_if<UniformBins>(&spec);
  for (double x : states) {
    if (!(x >= lo && x <= hi)) {
      ++h.overflow;
      continue;
    }
    std::size_t b;
    if (uniform) {
      const double pos = (x - lo) / (hi - lo) * static_cast<double>(bins);
      b = std::min(static_cast<std::size_t>(pos), bins - 1);
      // Make the bin agree with the stored edges despite rounding.
      if (b > 0 && x < h.edges[b]) --b;
      if (b + 1 < bins && x >= h.edges[b + 1]) ++b;
    } else {
      b = static_cast<std::size_t>(std::upper_bound(h.edges.begin(), h.edges.end(), x) - h.edges.begin()) - 1;
      b = std::min(b, bins - 1);
    }
    ++counts[b];
  }
  h.n_samples = states.size();
  h.density.resize(bins);
  const double n = static_cast<double>(states.size());
  for (std::size_t b = 0; b < bins; ++b)
    h.density[b] = static_cast<double>(counts[b]) / (n * (h.edges[b + 1] - h.edges[b]));
  return h;
}

UniformBins default_histogram_spec(std::span<const double> states, bool fat_tails, std::size_t bins) {
  if (states.empty()) throw std::invalid_argument("histogram of an empty state array");
  double lo;
  double hi;
  if (fat_tails) {
    std::vector<double> copy(states.begin(), states.end());
    const auto at = [&](double q) {
      const auto k = static_cast<std::size_t>(q * static_cast<double>(copy.size() - 1));
      std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k), copy.end());
      return copy[k];
    };
    lo = at(0.001);
    hi = at(0.999);
  } else {
    const auto [mn, mx] = std::minmax_element(states.begin(), states.end());
    lo = *mn;
    hi = *mx;
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  return UniformBins{lo, hi, bins};
}

double l1_distance(const Histogram& h, const std::function<double(double, double)>& bin_mass, double reference_mass) {
  if (!(reference_mass > 0)) throw std::invalid_argument("reference mass must be > 0");
  double s = 0.0;
  for (std::size_t b = 0; b < h.bins(); ++b) {
    const double w = h.edges[b + 1] - h.edges[b];
    s += std::abs(h.density[b] * w - bin_mass(h.edges[b], h.edges[b + 1]) / reference_mass);
  }
  return s;
}

}  // namespace kinetic
