#pragma once

#include "mudecay/kernels.hpp"
#include "mudecay/landau.hpp"
#include "mudecay/neutrino.hpp"

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mudecay {

enum class Species { Electron, MuonMinus, MuonPlus, AntiNuE, NuMu };

inline constexpr std::array<Species, 5> kAllSpecies{Species::Electron, Species::MuonMinus, Species::MuonPlus,
                                                    Species::AntiNuE, Species::NuMu};

std::string_view species_name(Species s);
Species species_from_string(std::string_view name);
bool is_landau(Species s);
inline int species_slot(Species s) { return static_cast<int>(s); }

struct Mode {
  std::variant<LandauQN, MomentumQN> qn;
  double weight = 1;

  const LandauQN& landau() const { return std::get<LandauQN>(qn); }
  const MomentumQN& momentum() const { return std::get<MomentumQN>(qn); }
};

struct ModeGrid {
  Species species = Species::Electron;
  std::vector<Mode> modes;

  int size() const { return static_cast<int>(modes.size()); }
  double weight_sum() const;
};

// Landau grid: s in spins, n < n_levels, Gauss-Legendre in p1 and p3 on [-p_range, p_range].
struct LandauGridSpec {
  int n_levels = 1;
  int p1_nodes = 1;
  int p3_nodes = 2;
  double p_range = 1.0;
  std::vector<int> spins{-1, 1};
  bool keep_null_modes = false;  // keep modes whose spinor vanishes identically
};

// Neutrino grid: product Gauss-Legendre on the box center + [-p_range, p_range]^3.
struct MomentumGridSpec {
  std::array<int, 3> nodes{3, 1, 1};
  double p_range = 1.0;
  Momentum center = Momentum(0.0, 0.5, 0.5);
};

ModeGrid build_landau_grid(Species species, const LandauGridSpec& spec);
ModeGrid build_momentum_grid(Species species, const MomentumGridSpec& spec);

// Isotropic convenience form: p_nodes per axis, box centred at the origin.
ModeGrid build_grid(Species species, int n_levels, int p_nodes, double p_range);

struct GridSet {
  std::array<ModeGrid, 5> grids;

  const ModeGrid& operator[](Species s) const { return grids[species_slot(s)]; }
  ModeGrid& operator[](Species s) { return grids[species_slot(s)]; }
  int total_modes() const;
};

struct Tolerances {
  int hermite_nodes = 96;       // vertex x2-quadrature start
  double vertex_rel_tol = 1e-8;  // node-doubling criterion
  double hermitian_tol = 1e-12;
  double residual_tol = 1e-9;
};

struct ModelConfig {
  double m_e = 1.0;
  double m_mu = 2.0;
  double eB = 1.0;
  double g = 0.0;
  KernelSpec spec_F;
  KernelSpec spec_G;
  LandauGridSpec grid_e;
  LandauGridSpec grid_mu_minus;
  LandauGridSpec grid_mu_plus;
  MomentumGridSpec grid_nubar_e;
  MomentumGridSpec grid_nu_mu;
  Tolerances tol;

  ParticleParams electron() const { return {m_e, eB}; }
  ParticleParams muon() const { return {m_mu, eB}; }
  void validate() const;
};

GridSet build_grids(const ModelConfig& config);

// One-particle energy of a mode.
double mode_energy(const ModelConfig& config, Species species, const Mode& mode);

}  // namespace mudecay
