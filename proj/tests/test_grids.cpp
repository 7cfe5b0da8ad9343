#include "mudecay/grids.hpp"
#include "mudecay/kernels.hpp"
#include "mudecay/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace mudecay;

TEST_CASE("one-node Landau grids") {
  const ModeGrid e = build_grid(Species::Electron, 1, 1, 0.7);
  REQUIRE(e.size() == 1);
  CHECK(e.modes[0].landau() == LandauQN{-1, 0, 0.0, 0.0});
  CHECK(e.modes[0].weight == doctest::Approx(4 * 0.7 * 0.7).epsilon(1e-15));
  const ModeGrid mm = build_grid(Species::MuonMinus, 1, 1, 0.7);
  REQUIRE(mm.size() == 1);
  CHECK(mm.modes[0].landau().s == -1);
  // the antimuon spinor vanishes at (s=-1, n=0), so (s=+1, n=0) is the surviving mode
  const ModeGrid mp = build_grid(Species::MuonPlus, 1, 1, 0.7);
  REQUIRE(mp.size() == 1);
  CHECK(mp.modes[0].landau().s == 1);
}

TEST_CASE("keep_null_modes retains the vanishing-spinor modes") {
  LandauGridSpec spec;
  spec.keep_null_modes = true;
  spec.p1_nodes = spec.p3_nodes = 1;
  CHECK(build_landau_grid(Species::Electron, spec).size() == 2);
  spec.keep_null_modes = false;
  spec.n_levels = 3;
  CHECK(build_landau_grid(Species::Electron, spec).size() == 5);
}

TEST_CASE("neutrino weights sum to the box volume") {
  for (int nodes : {2, 4, 6}) {
    const ModeGrid g = build_grid(Species::AntiNuE, 1, nodes, 1.3);
    CHECK(g.weight_sum() == doctest::Approx(std::pow(2 * 1.3, 3)).epsilon(1e-13));
    for (const auto& m : g.modes) CHECK(m.momentum().helicity == 0.5);
    CHECK(static_cast<int>(g.modes.size()) == nodes * nodes * nodes);
  }
  for (const auto& m : build_grid(Species::NuMu, 1, 2, 1.0).modes) CHECK(m.momentum().helicity == -0.5);
}

TEST_CASE("a neutrino node at p = 0 is rejected") {
  CHECK_THROWS(build_grid(Species::NuMu, 1, 3, 1.0));
  CHECK_THROWS(build_grid(Species::Electron, 0, 1, 1.0));
  CHECK_THROWS(build_grid(Species::Electron, 1, 0, 1.0));
  CHECK_THROWS(build_grid(Species::Electron, 1, 1, -1.0));
}

TEST_CASE("grid sums approximate smooth integrals") {
  // int over [-1,1]^3 of exp(x + 2y - z) = sinh(1) * sinh(2) * sinh(1) * 8 / 2
  const double exact = (std::exp(1) - std::exp(-1)) * (std::exp(2) - std::exp(-2)) / 2 * (std::exp(1) - std::exp(-1));
  double err_prev = 1e300;
  for (int nodes : {2, 4, 6}) {
    double sum = 0;
    for (const auto& m : build_grid(Species::AntiNuE, 1, nodes, 1.0).modes) {
      const Momentum& p = m.momentum().p;
      sum += m.weight * std::exp(p(0) + 2 * p(1) - p(2));
    }
    const double err = std::abs(sum - exact);
    CHECK(err < err_prev);
    err_prev = err;
  }
  CHECK(err_prev <= 1e-6 * exact);
}

TEST_CASE("mode identity is unique within a grid") {
  LandauGridSpec spec;
  spec.n_levels = 3;
  spec.p1_nodes = 3;
  spec.p3_nodes = 2;
  const ModeGrid g = build_landau_grid(Species::MuonMinus, spec);
  std::set<std::tuple<int, int, double, double>> seen;
  for (const auto& m : g.modes) {
    const auto& q = m.landau();
    CHECK(seen.insert({q.s, q.n, q.p1, q.p3}).second);
    CHECK(m.weight > 0);
  }
}

TEST_CASE("discrete kernel norm converges to the continuum norm") {
  KernelSpec spec;
  spec.width = 0.6;
  const double target = l2_norm(spec, {-1});
  double prev = 1e300;
  for (int nodes : {8, 16, 24}) {
    LandauGridSpec lg;
    lg.spins = {-1};
    lg.p1_nodes = lg.p3_nodes = nodes;
    lg.p_range = 4.0;
    MomentumGridSpec mg;
    mg.nodes = {nodes, nodes, nodes};
    mg.p_range = 4.0;
    mg.center = Momentum::Zero();
    const ModeGrid a = build_landau_grid(Species::MuonMinus, lg);
    const ModeGrid b = build_momentum_grid(Species::NuMu, mg);
    double sum = 0;
    for (const auto& x : a.modes)
      for (const auto& y : b.modes) sum += x.weight * y.weight * std::norm(eval_F(spec, x.landau(), y.momentum()));
    const double err = std::abs(std::sqrt(sum) - target);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-3 * target);
}

TEST_CASE("model configuration invariants") {
  ModelConfig c;
  CHECK_NOTHROW(c.validate());
  c.m_mu = 0.5;
  CHECK_THROWS(c.validate());
  c = ModelConfig{};
  c.g = -0.1;
  CHECK_THROWS(c.validate());
  c = ModelConfig{};
  c.eB = 0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("default grid has twelve modes") {
  const GridSet g = build_grids(ModelConfig{});
  CHECK(g.total_modes() == 12);
  CHECK(g[Species::Electron].size() == 2);
  CHECK(g[Species::MuonMinus].size() == 2);
  CHECK(g[Species::MuonPlus].size() == 2);
  CHECK(g[Species::AntiNuE].size() == 3);
  CHECK(g[Species::NuMu].size() == 3);
}

TEST_CASE("species names round-trip") {
  for (Species s : kAllSpecies) CHECK(species_from_string(species_name(s)) == s);
  CHECK_THROWS(species_from_string("tau"));
}
