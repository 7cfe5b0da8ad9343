#include "mudecay/grids.hpp"

#include "mudecay/errors.hpp"
#include "mudecay/quadrature.hpp"

#include <numeric>

namespace mudecay {

std::string_view species_name(Species s) {
  switch (s) {
    case Species::Electron: return "e";
    case Species::MuonMinus: return "mu-";
    case Species::MuonPlus: return "mu+";
    case Species::AntiNuE: return "nubar-e";
    case Species::NuMu: return "nu-mu";
  }
  return "?";
}

Species species_from_string(std::string_view name) {
  for (Species s : kAllSpecies)
    if (species_name(s) == name) return s;
  throw ConfigError("unknown species '" + std::string(name) + "'");
}

bool is_landau(Species s) { return s == Species::Electron || s == Species::MuonMinus || s == Species::MuonPlus; }

double ModeGrid::weight_sum() const {
  return std::accumulate(modes.begin(), modes.end(), 0.0, [](double acc, const Mode& m) { return acc + m.weight; });
}

int GridSet::total_modes() const {
  int n = 0;
  for (const auto& g : grids) n += g.size();
  return n;
}

ModeGrid build_landau_grid(Species species, const LandauGridSpec& spec) {
  if (!is_landau(species)) throw ConfigError("Landau grid requested for a neutrino species");
  if (spec.n_levels < 1) throw ConfigError("n_levels must be >= 1");
  if (spec.p1_nodes < 1 || spec.p3_nodes < 1) throw ConfigError("p_nodes must be >= 1");
  if (!(spec.p_range > 0)) throw ConfigError("p_range must be positive");
  for (int s : spec.spins)
    if (s != 1 && s != -1) throw ConfigError("spins must be +1 or -1");
  const auto r1 = gauss_legendre<double>(spec.p1_nodes, -spec.p_range, spec.p_range);
  const auto r3 = gauss_legendre<double>(spec.p3_nodes, -spec.p_range, spec.p_range);
  ModeGrid grid{species, {}};
  for (int s : spec.spins)
    for (int n = 0; n < spec.n_levels; ++n) {
      const LandauQN probe{s, n, 0, 0};
      const bool null = species == Species::MuonPlus ? w_is_null(probe) : u_is_null(probe);
      if (null && !spec.keep_null_modes) continue;
      for (int i = 0; i < r1.size(); ++i)
        for (int j = 0; j < r3.size(); ++j)
          grid.modes.push_back({LandauQN{s, n, r1.nodes(i), r3.nodes(j)}, r1.weights(i) * r3.weights(j)});
    }
  if (grid.modes.empty()) throw ConfigError("grid for " + std::string(species_name(species)) + " is empty");
  return grid;
}

ModeGrid build_momentum_grid(Species species, const MomentumGridSpec& spec) {
  if (is_landau(species)) throw ConfigError("momentum grid requested for a Landau species");
  if (!(spec.p_range > 0)) throw ConfigError("p_range must be positive");
  std::array<QuadratureRule<double>, 3> rules;
  for (int a = 0; a < 3; ++a) {
    if (spec.nodes[a] < 1) throw ConfigError("neutrino nodes must be >= 1");
    rules[a] = gauss_legendre<double>(spec.nodes[a], spec.center(a) - spec.p_range, spec.center(a) + spec.p_range);
  }
  const double helicity = species == Species::AntiNuE ? 0.5 : -0.5;
  ModeGrid grid{species, {}};
  for (int i = 0; i < rules[0].size(); ++i)
    for (int j = 0; j < rules[1].size(); ++j)
      for (int k = 0; k < rules[2].size(); ++k) {
        const Momentum p(rules[0].nodes(i), rules[1].nodes(j), rules[2].nodes(k));
        if (p.norm() < 1e-12)
          throw ConfigError("neutrino grid for " + std::string(species_name(species)) +
                            " contains p = 0 where helicity is undefined; shift the center or use an even node count");
        grid.modes.push_back({MomentumQN{p, helicity}, rules[0].weights(i) * rules[1].weights(j) * rules[2].weights(k)});
      }
  return grid;
}

ModeGrid build_grid(Species species, int n_levels, int p_nodes, double p_range) {
  if (is_landau(species)) {
    LandauGridSpec spec;
    spec.n_levels = n_levels;
    spec.p1_nodes = spec.p3_nodes = p_nodes;
    spec.p_range = p_range;
    return build_landau_grid(species, spec);
  }
  MomentumGridSpec spec;
  spec.nodes = {p_nodes, p_nodes, p_nodes};
  spec.p_range = p_range;
  spec.center = Momentum::Zero();
  return build_momentum_grid(species, spec);
}

void ModelConfig::validate() const {
  if (!(m_e > 0) || !(m_mu > 0)) throw ConfigError("masses must be positive");
  if (!(m_e < m_mu)) throw ConfigError("m_e must be smaller than m_mu");
  if (!(eB > 0)) throw ConfigError("eB must be positive");
  if (!(g >= 0) || !std::isfinite(g)) throw ConfigError("coupling g must be finite and non-negative");
  mudecay::validate(spec_F);
  mudecay::validate(spec_G);
  if (tol.hermite_nodes < 8) throw ConfigError("hermite_nodes must be >= 8");
  if (!(tol.vertex_rel_tol > 0)) throw ConfigError("vertex_rel_tol must be positive");
}

GridSet build_grids(const ModelConfig& config) {
  config.validate();
  GridSet set;
  set[Species::Electron] = build_landau_grid(Species::Electron, config.grid_e);
  set[Species::MuonMinus] = build_landau_grid(Species::MuonMinus, config.grid_mu_minus);
  set[Species::MuonPlus] = build_landau_grid(Species::MuonPlus, config.grid_mu_plus);
  set[Species::AntiNuE] = build_momentum_grid(Species::AntiNuE, config.grid_nubar_e);
  set[Species::NuMu] = build_momentum_grid(Species::NuMu, config.grid_nu_mu);
  if (set.total_modes() > 30) throw ConfigError("more than 30 modes; the Fock space would not fit in memory");
  return set;
}

double mode_energy(const ModelConfig& config, Species species, const Mode& mode) {
  switch (species) {
    case Species::Electron: return energy(config.electron(), mode.landau().n, mode.landau().p3);
    case Species::MuonMinus:
    case Species::MuonPlus: return energy(config.muon(), mode.landau().n, mode.landau().p3);
    default: return mode.momentum().p.norm();
  }
}

}  // namespace mudecay
