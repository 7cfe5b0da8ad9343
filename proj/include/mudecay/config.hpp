#pragma once

#include "mudecay/asymptotics.hpp"
#include "mudecay/grids.hpp"
#include "mudecay/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mudecay {

struct SpectralSettings {
  SolverKind solver = SolverKind::Dense;
  int k_low = 16;
  std::vector<double> couplings_over_g0{0.025, 0.05, 0.1};  // perturbation fit
};

struct DecaySettings {
  TestModeFunction test;
  QuadratureOrders orders;
  double t_min = 10.0;
  double t_max = 100.0;
  int per_decade = 12;
  bool negative_control = true;  // also fit the support-across-the-excluded-set variant
};

struct RunSettings {
  std::uint64_t seed = 1;
  int samples = 1000;                      // relative-bound vectors
  std::vector<double> times{0.0, 1.0, 10.0};  // number-bound evolution times
  Eigen::Index dense_limit = 1024;         // dense field evolution
};

struct RunConfig {
  ModelConfig model;
  std::optional<double> g_over_g0;  // when set, g = g_over_g0 * g0 of the model
  SpectralSettings spectral;
  DecaySettings decay;
  RunSettings run;
};

// Grammar (one entry per line):
//   [section]          sections: model, kernel.F, kernel.G, grid.e, grid.mu-, grid.mu+,
//                      grid.nubar-e, grid.nu-mu, quadrature, spectral, decay, run
//   key = value        numbers, true/false, names, comma-separated lists
//   # or ; comment     whole-line comments; blank lines ignored
// Unknown sections or keys, duplicates and malformed values raise ConfigError.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

// Every key with its value, sorted by section then key. Stable under reordering
// of the input file; the digest hashes this text.
std::string canonical_config(const RunConfig& config);
std::string config_digest(const RunConfig& config);

void validate(const RunConfig& config);

}  // namespace mudecay
