#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kinetic/fourier.hpp"
#include "kinetic/graph.hpp"
#include "kinetic/histogram.hpp"
#include "kinetic/initial_condition.hpp"
#include "kinetic/kinetics.hpp"

namespace kinetic {

enum class LawKind { AdvectionDiffusion, AdvectionDominated, ConservedEnergy, Explicit };
enum class EtaKind { Uniform, TwoPoint };

struct LawSpec {
  LawKind kind = LawKind::AdvectionDiffusion;
  double lambda = 3.5;
  double sigma_sq = 6.0;
  double delta = 1.0;
  EtaKind eta = EtaKind::Uniform;
  // Explicit law: p = p_mean + centred uniform noise of variance p_var, q constant.
  double p_mean = 0.75;
  double p_var = 0.0;
  double q = 0.25;
};

struct InitialSpec {
  std::string kind = "uniform";  // uniform | two_point | gaussian
  double a = -1;
  double b = 3;
  double x = 1;
  double mean = 0;
  double variance = 1;
};

struct GraphSpec {
  double beta = 0.3;
  double chi = 1.0;
  double mu = 1.0;  // normalized rate (d2_contraction)
  double mu1 = 1.0;
  double mu2 = 0.0;
  double rho10 = 0.6;
  double M110 = 1.0;
  double lambda1 = 3.5;
  double sigma1_sq = 6.0;
  double g20_mean = 0.0;
  double g20_variance = 0.25;
  std::size_t n_vertices = 5;
  double edge_prob = 0.6;
  std::size_t trials = 5;
  std::size_t samples = 20;
};

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  bool seed_from_env = false;
  std::size_t n_particles = 200000;
  double T = 10;
  std::optional<double> dt;  // absolute step; otherwise dt_over_eps * eps
  // One ratio for every eps, or one per eps entry.
  std::vector<double> dt_over_eps{1.0};
  std::vector<double> eps{1e-3};
  std::vector<double> snapshots;
  LawSpec law;
  InitialSpec initial;
  InitialSpec initial2{"uniform", 0, 2, 1, 0, 1};
  std::optional<UniformBins> bins;
  std::size_t bin_count = 100;
  double xi_min = 1e-4;
  double xi_max = 1e2;
  std::size_t xi_per_side = 128;
  GraphSpec graph;
  std::filesystem::path out_dir = "out";

  // Every key = value pair as read, for the manifest.
  std::vector<std::pair<std::string, std::string>> echo;
};

const std::vector<std::string>& experiment_names();

// Parses, applies KINETIC_MC_SEED, then validates. ParseError for syntax and
// unknown keys, ValidationError for values (all of them in one message).
RunConfig load_config(const std::filesystem::path& path);
// Syntax and per-key conversion only; call validate_config afterwards.
RunConfig parse_config(const std::string& text);

void validate_config(const RunConfig& cfg);

ScalingRegime make_regime(const LawSpec& spec);
InteractionLaw make_explicit_law(const LawSpec& spec);
InitialCondition make_initial(const InitialSpec& spec);
XiGrid make_grid(const RunConfig& cfg);
double step_for(const RunConfig& cfg, double eps);

}  // namespace kinetic
