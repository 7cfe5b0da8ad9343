#include "mudecay/errors.hpp"
#include "mudecay/bounds.hpp"
#include "mudecay/hamiltonian.hpp"
#include "mudecay/spectral.hpp"
#include "small_models.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace mudecay;

namespace {

struct Fixture {
  Model model;
  VertexTable table;
  explicit Fixture(const ModelConfig& c) : model(make_model(c)), table(build_vertex_table(model)) {}
};

const Fixture& default_fixture() {
  static const Fixture f(ModelConfig{});
  return f;
}

// Trapezoid rule on [c - L, c + L], L = 12 magnetic lengths, evaluated from the spinors directly.
Complex trapezoid_vertex(const ModelConfig& cfg, const LandauQN& xi1, const LandauQN& xi2, const Momentum& p3,
                         const Momentum& p4, bool w_leg) {
  const double eB = cfg.eB;
  const double L = 12.0 / std::sqrt(eB);
  const double c = (xi1.p1 + (w_leg ? -xi2.p1 : xi2.p1)) / (2 * eB);
  const int N = 24000;
  const double h = 2 * L / N;
  const double r2 = p3(1) + p4(1);
  Complex sum = 0;
  for (int k = 0; k <= N; ++k) {
    const double x = c - L + k * h;
    const Spinor4 mu = w_leg ? spinor_w_mu(cfg.muon(), xi2, x) : spinor_u(cfg.muon(), xi2, x);
    const Complex v = std::polar(1.0, -x * r2) *
                      vertex_contract(spinor_u_numu(p4), mu, spinor_u(cfg.electron(), xi1, x), spinor_w_nubar_e(p3));
    sum += (k == 0 || k == N ? 0.5 : 1.0) * v;
  }
  return sum * h;
}

double max_abs(const SparseOp& m) { return max_abs_entry(m); }

}  // namespace

TEST_CASE("free Hamiltonian: vacuum, one-particle energies, lowest excitation") {
  const Model& m = default_fixture().model;
  const FockOperator h0 = assemble_h0(m);
  const Eigen::VectorXcd omega = vacuum(m.fock.dim());
  CHECK((h0.matrix * omega).norm() == 0.0);
  CHECK(h0.hermitian);
  // one electron at (s=-1, n=0, p1=0, p3=0)
  ModelConfig one = six_mode_config();
  const Model small = make_model(one);
  const FockOperator h0s = assemble_h0(small);
  REQUIRE(small.grids[Species::Electron].modes[0].landau() == LandauQN{-1, 0, 0.0, 0.0});
  const Eigen::VectorXcd e = creation(small.fock, Species::Electron, 0).matrix * vacuum(small.fock.dim());
  CHECK((h0s.matrix * e - one.m_e * e).norm() <= 1e-15);
  // smallest nonzero eigenvalue equals the smallest one-mode energy
  double lowest = 1e300;
  for (Species s : kAllSpecies)
    for (const auto& mode : m.grids[s].modes) lowest = std::min(lowest, mode_energy(m.config, s, mode));
  double diag_min = 1e300;
  for (Eigen::Index i = 1; i < m.fock.dim(); ++i) diag_min = std::min(diag_min, h0.matrix.coeff(i, i).real());
  CHECK(diag_min == doctest::Approx(lowest).epsilon(1e-15));
  CHECK(lowest == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("vertex integral: null muon spinor") {
  const ModelConfig cfg;
  const Momentum p3(0, 0.3, 0.2), p4(0.1, -0.2, 0.4);
  CHECK(vertex_integral(cfg, {-1, 0, 0, 0}, {1, 0, 0, 0}, p3, p4, VertexVariant::Decay) == Complex(0));
  CHECK(vertex_integral(cfg, {-1, 0, 0, 0}, {-1, 0, 0, 0}, p3, p4, VertexVariant::PairCreation) == Complex(0));
}

TEST_CASE("vertex integral matches the trapezoid oracle") {
  ModelConfig cfg;
  const Momentum p3(0, 0.3, 0.2), p4(0.1, -0.2, 0.4);
  const LandauQN low{-1, 0, 0.0, 0.0};
  const Complex a = vertex_integral(cfg, low, low, p3, p4, VertexVariant::Decay);
  const Complex ref = trapezoid_vertex(cfg, low, low, p3, p4, false);
  CHECK(std::abs(ref) > 1e-3);
  CHECK(std::abs(a - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));

  cfg.eB = 2.2;
  const LandauQN xi1{1, 2, 0.4, -0.3}, xi2{-1, 3, -0.6, 0.9};
  const Complex b = vertex_integral(cfg, xi1, xi2, p3, p4, VertexVariant::Decay);
  CHECK(std::abs(b - trapezoid_vertex(cfg, xi1, xi2, p3, p4, false)) <= 1e-8);
  const Complex c = vertex_integral(cfg, xi1, xi2, p3, p4, VertexVariant::PairCreation);
  CHECK(std::abs(c - trapezoid_vertex(cfg, xi1, xi2, p3, p4, true)) <= 1e-8);
}

TEST_CASE("conjugate variant is the complex conjugate") {
  const ModelConfig cfg;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 10; ++k) {
    const LandauQN xi1{k % 2 ? 1 : -1, 1 + k % 3, u(rng), u(rng)}, xi2{-1, k % 4, u(rng), u(rng)};
    const Momentum p3(u(rng), u(rng), u(rng) + 2), p4(u(rng), u(rng), u(rng) - 2);
    const Complex d = vertex_integral(cfg, xi1, xi2, p3, p4, VertexVariant::Decay);
    const Complex dc = vertex_integral(cfg, xi1, xi2, p3, p4, VertexVariant::DecayConjugate);
    CHECK(std::abs(dc - std::conj(d)) <= 1e-12 * std::max(1.0, std::abs(d)));
  }
}

TEST_CASE("vertex integral reports non-convergence") {
  ModelConfig cfg;
  const VertexQuadrature tight{8, 1e-300};
  CHECK_THROWS_AS(vertex_integral(cfg, {-1, 0, 0, 0}, {-1, 0, 0, 0}, Momentum(0, 1, 1), Momentum(1, 0, 1),
                                  VertexVariant::Decay, tight),
                  ConvergenceError);
}

TEST_CASE("interaction: vacuum expectation, vacuum image, hermiticity") {
  const auto& fx = default_fixture();
  const FockOperator hi = assemble_hi(fx.model, fx.table);
  const Eigen::VectorXcd omega = vacuum(fx.model.fock.dim());
  CHECK(std::abs(omega.dot(hi.matrix * omega)) == 0.0);
  CHECK((hi.matrix * omega).norm() > 0.0);
  CHECK(is_hermitian(hi.matrix, 1e-12));
  CHECK(max_abs(SparseOp(hi.matrix - SparseOp(hi.matrix.adjoint()))) <= 1e-12);
}

TEST_CASE("single-quadruple matrix element equals the coefficient") {
  ModelConfig cfg = six_mode_config();
  cfg.grid_nubar_e.nodes = {1, 1, 1};
  const Model m = make_model(cfg);
  REQUIRE(m.fock.n_modes() == 5);
  const VertexTable t = build_vertex_table(m);
  REQUIRE(t.coeff1.size() == 1);
  const auto& g = m.grids;
  const Complex expected = t.vertex1[0] * eval_F(cfg.spec_F, g[Species::MuonMinus].modes[0].landau(), g[Species::NuMu].modes[0].momentum()) *
                           eval_G(cfg.spec_G, g[Species::Electron].modes[0].landau(), g[Species::AntiNuE].modes[0].momentum()) *
                           std::sqrt(g[Species::Electron].modes[0].weight * g[Species::MuonMinus].modes[0].weight *
                                     g[Species::AntiNuE].modes[0].weight * g[Species::NuMu].modes[0].weight);
  CHECK(std::abs(t.coeff1[0] - expected) <= 1e-15 * std::abs(expected));
  const InteractionParts parts = assemble_interaction(m, t);
  const Eigen::VectorXcd omega = vacuum(m.fock.dim());
  const Eigen::VectorXcd muon = creation(m.fock, Species::MuonMinus, 0).matrix * omega;
  const Eigen::VectorXcd target = creation(m.fock, Species::NuMu, 0).matrix *
                                  (creation(m.fock, Species::Electron, 0).matrix *
                                   (creation(m.fock, Species::AntiNuE, 0).matrix * omega));
  CHECK(std::abs(target.dot(parts.h1 * muon) - expected) <= 1e-15 * std::abs(expected));
}

TEST_CASE("total Hamiltonian: g = 0, linearity, threshold warning") {
  const auto& fx = default_fixture();
  const TotalHamiltonian h0 = assemble_total(fx.model, fx.table, 0.0);
  CHECK(max_abs(SparseOp(h0.h.matrix - h0.h0.matrix)) == 0.0);
  const TotalHamiltonian h1 = assemble_total(fx.model, fx.table, 1.0);
  const TotalHamiltonian hg = assemble_total(fx.model, fx.table, 3e-4);
  CHECK(max_abs(SparseOp((hg.h.matrix - hg.h0.matrix) - 3e-4 * (h1.h.matrix - h1.h0.matrix))) <= 1e-18);
  CHECK(hg.warnings.empty());
  CHECK_FALSE(h1.warnings.empty());
  CHECK(is_hermitian(h1.h.matrix, 1e-12));
}

TEST_CASE("charges are conserved and H is block diagonal") {
  const auto& fx = default_fixture();
  const TotalHamiltonian h = assemble_total(fx.model, fx.table, 1e-3);
  const ChargeOperators q = charge_operators(fx.model.fock);
  CHECK(max_abs(commutator(h.h.matrix, q.Q.matrix)) <= 1e-12);
  CHECK(max_abs(commutator(h.h.matrix, q.L_e.matrix)) <= 1e-12);
  CHECK(max_abs(commutator(h.h.matrix, q.L_mu.matrix)) <= 1e-12);
  CHECK(sector_eigensystems(fx.model.fock, h.h.matrix, false).off_block_max <= 1e-12);
}

TEST_CASE("commutator table for every channel") {
  const auto& fx = default_fixture();
  const InteractionParts parts = assemble_interaction(fx.model, fx.table);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  int vanishing = 0, nonvanishing = 0;
  for (Species s : kAllSpecies)
    for (bool dagger : {false, true}) {
      Eigen::VectorXcd f(fx.model.fock.count(s));
      for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = Complex(n(rng), n(rng));
      const CommutatorReport rep = commutator_identities(fx.model, fx.table, parts, s, dagger, f);
      CHECK(rep.checks.size() == 4);
      for (const auto& c : rep.checks) {
        INFO(rep.channel_name() << " " << c.name << " deviation " << c.max_deviation);
        CHECK(c.passed);
        if (c.vanishing) {
          ++vanishing;
          CHECK(c.max_deviation == 0.0);
        } else {
          ++nonvanishing;
        }
      }
    }
  CHECK(vanishing == 24);
  CHECK(nonvanishing == 16);
}

TEST_CASE("a corrupted interaction fails the commutator table") {
  const auto& fx = default_fixture();
  InteractionParts parts = assemble_interaction(fx.model, fx.table);
  parts.h1 = 1.5 * parts.h1;
  Eigen::VectorXcd f = Eigen::VectorXcd::Ones(fx.model.fock.count(Species::Electron));
  const CommutatorReport rep = commutator_identities(fx.model, fx.table, parts, Species::Electron, true, f);
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("vertex table cache round-trips and keys on vertex inputs only") {
  const auto& fx = default_fixture();
  std::stringstream io;
  save_vertex_table(io, fx.table);
  VertexTable back = load_vertex_table(io);
  apply_kernels(fx.model, back);
  REQUIRE(back.vertex1.size() == fx.table.vertex1.size());
  for (std::size_t i = 0; i < back.vertex1.size(); ++i) CHECK(back.vertex1[i] == fx.table.vertex1[i]);
  for (std::size_t i = 0; i < back.coeff2.size(); ++i) CHECK(back.coeff2[i] == fx.table.coeff2[i]);
  ModelConfig a, b, c;
  b.spec_F.scale = 3.0;
  c.eB = 1.5;
  CHECK(vertex_cache_key(a) == vertex_cache_key(b));
  CHECK(vertex_cache_key(a) != vertex_cache_key(c));
}
