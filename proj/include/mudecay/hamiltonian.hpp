#pragma once

#include "mudecay/fock.hpp"
#include "mudecay/grids.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace mudecay {

struct Model {
  ModelConfig config;
  GridSet grids;
  FockSpace fock;
};

Model make_model(const ModelConfig& config, std::array<Species, 5> order = kAllSpecies);

// Which spinor sits on the muon leg and whether the conjugated bilinear is formed.
enum class VertexVariant {
  Decay,           // U^(mu): mu- -> e nubar-e nu-mu
  PairCreation,    // W^(mu): creates mu+ e nubar-e nu-mu
  DecayConjugate,  // conjugated bilinears of Decay, independent evaluation
};

struct VertexQuadrature {
  int nodes = 96;
  double rel_tol = 1e-8;
};

// int dx2 exp(-i x2 r2) vertex_contract(U_numu(p4), U-or-W_mu(x2, xi2), U_e(x2, xi1), W_nubar(p3))
// with r2 = p3_y + p4_y (+i for the conjugate variant). Gauss-Hermite in the
// guiding-centre variable, doubled until two successive values agree.
Complex vertex_integral(const ModelConfig& config, const LandauQN& xi1, const LandauQN& xi2, const Momentum& p3,
                        const Momentum& p4, VertexVariant variant, const VertexQuadrature& quad = {});

// Raw vertex integrals and full monomial coefficients, indexed [k1][k2][k3][k4]
// over (e, mu-or-mu+, nubar-e, nu-mu) modes.
struct VertexTable {
  std::array<int, 4> dims1{};  // k2 over mu- modes
  std::array<int, 4> dims2{};  // k2 over mu+ modes
  std::vector<Complex> vertex1, vertex2;
  std::vector<Complex> coeff1, coeff2;

  static std::size_t index(const std::array<int, 4>& d, int k1, int k2, int k3, int k4) {
    return ((static_cast<std::size_t>(k1) * d[1] + k2) * d[2] + k3) * d[3] + k4;
  }
};

// Vertex integrals for every mode quadruple, with coefficients from the model kernels.
VertexTable build_vertex_table(const Model& model);
// Fills coeff1/coeff2 = vertex * F * G * sqrt(w1 w2 w3 w4) from the kernels in model.config.
void apply_kernels(const Model& model, VertexTable& table);

// Cache key over everything the raw vertices depend on.
std::string vertex_cache_key(const ModelConfig& config);
void save_vertex_table(std::ostream& out, const VertexTable& table);
VertexTable load_vertex_table(std::istream& in);

FockOperator assemble_h0(const Model& model);

// H1 = sum c1 b*_nu b*_e b*_nubar b_mu-,  H2 = sum c2 b*_nu b*_mu+ b*_e b*_nubar.
struct InteractionParts {
  SparseOp h1;
  SparseOp h2;

  SparseOp h1_adj() const { return SparseOp(h1.adjoint()); }
  SparseOp h2_adj() const { return SparseOp(h2.adjoint()); }
  FockOperator total() const;
};

InteractionParts assemble_interaction(const Model& model, const VertexTable& table);
FockOperator assemble_hi(const Model& model, const VertexTable& table);

struct TotalHamiltonian {
  FockOperator h0;
  FockOperator hi;
  FockOperator h;
  double g = 0;
  std::vector<std::string> warnings;
};

// H = H0 + g H_I; warns when g exceeds the self-adjointness threshold.
TotalHamiltonian assemble_total(const Model& model, const VertexTable& table);
TotalHamiltonian assemble_total(const Model& model, const VertexTable& table, double g);

struct CommutatorCheck {
  std::string name;
  bool vanishing = false;
  double max_deviation = 0;
  double tolerance = 0;
  bool exact = false;
  bool passed = false;
};

struct CommutatorReport {
  Species channel = Species::Electron;
  bool dagger = false;
  std::vector<CommutatorCheck> checks;

  bool all_passed() const;
  std::string channel_name() const;
};

// Commutators of the four interaction parts with b(f) or b*(f) on one species,
// compared with zero or with the cubic operator assembled directly from the table.
CommutatorReport commutator_identities(const Model& model, const VertexTable& table, const InteractionParts& parts,
                                       Species channel, bool dagger, const Eigen::VectorXcd& f);

}  // namespace mudecay
