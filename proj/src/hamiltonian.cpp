#include "mudecay/hamiltonian.hpp"

#include "mudecay/bounds.hpp"
#include "mudecay/digest.hpp"
#include "mudecay/errors.hpp"
#include "mudecay/kernels.hpp"
#include "mudecay/parallel.hpp"
#include "mudecay/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace mudecay {

Model make_model(const ModelConfig& config, std::array<Species, 5> order) {
  GridSet grids = build_grids(config);
  FockSpace fock(grids, order);
  return {config, std::move(grids), fock};
}

namespace {

constexpr int kMaxHermiteNodes = 320;  // larger rules overflow exp(u^2) at the outer nodes

// Gauss-Hermite nodes with weights rescaled by exp(u^2).
const QuadratureRule<double>& scaled_hermite(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule<double>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto rule = gauss_hermite<double>(n);
    for (int k = 0; k < n; ++k) rule.weights(k) *= std::exp(rule.nodes(k) * rule.nodes(k));
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

}  // namespace

Complex vertex_integral(const ModelConfig& config, const LandauQN& xi1, const LandauQN& xi2, const Momentum& p3,
                        const Momentum& p4, VertexVariant variant, const VertexQuadrature& quad) {
  validate(xi1);
  validate(xi2);
  const bool w_leg = variant == VertexVariant::PairCreation;
  if (u_is_null(xi1) || (w_leg ? w_is_null(xi2) : u_is_null(xi2))) return 0.0;

  const ParticleParams e = config.electron(), mu = config.muon();
  const Spinor4 u_nu = spinor_u_numu(p4);
  const Spinor4 w_nubar = spinor_w_nubar_e(p3);
  const double r2 = p3(1) + p4(1);
  const double eB = config.eB, root = std::sqrt(eB);
  const double centre = (xi1.p1 + (w_leg ? -xi2.p1 : xi2.p1)) / (2 * eB);

  auto integrand = [&](double x) -> Complex {
    const Spinor4 um = w_leg ? spinor_w_mu(mu, xi2, x) : spinor_u(mu, xi2, x);
    const Spinor4 ue = spinor_u(e, xi1, x);
    if (variant == VertexVariant::DecayConjugate)
      return std::polar(1.0, x * r2) * vertex_contract(um, u_nu, w_nubar, ue);
    return std::polar(1.0, -x * r2) * vertex_contract(u_nu, um, ue, w_nubar);
  };
  auto integrate = [&](int n, double& l1) {
    const auto& rule = scaled_hermite(n);
    Complex sum = 0;
    l1 = 0;
    for (int k = 0; k < n; ++k) {
      const Complex v = rule.weights(k) * integrand(centre + rule.nodes(k) / root);
      sum += v;
      l1 += std::abs(v);
    }
    l1 /= root;
    return sum / root;
  };

  int n = quad.nodes;
  double l1 = 0;
  Complex prev = integrate(n, l1);
  while (2 * n <= kMaxHermiteNodes) {
    const Complex next = integrate(2 * n, l1);
    const double change = std::abs(next - prev);
    if (change <= quad.rel_tol * std::max(std::abs(next), l1)) return next;
    prev = next;
    n *= 2;
  }
  std::ostringstream msg;
  msg << "vertex integral did not converge: xi1=(" << xi1.s << "," << xi1.n << "," << xi1.p1 << "," << xi1.p3
      << ") xi2=(" << xi2.s << "," << xi2.n << "," << xi2.p1 << "," << xi2.p3 << ") after " << n << " nodes";
  throw ConvergenceError(msg.str());
}

VertexTable build_vertex_table(const Model& model) {
  const auto& g = model.grids;
  const auto& cfg = model.config;
  const VertexQuadrature quad{cfg.tol.hermite_nodes, cfg.tol.vertex_rel_tol};
  if (quad.nodes * 2 > kMaxHermiteNodes) throw ConfigError("hermite_nodes must be at most 160");
  VertexTable t;
  const int ne = g[Species::Electron].size(), nb = g[Species::AntiNuE].size(), nn = g[Species::NuMu].size();
  t.dims1 = {ne, g[Species::MuonMinus].size(), nb, nn};
  t.dims2 = {ne, g[Species::MuonPlus].size(), nb, nn};
  auto fill = [&](const std::array<int, 4>& d, Species muon, VertexVariant variant, std::vector<Complex>& out) {
    const std::size_t total = static_cast<std::size_t>(d[0]) * d[1] * d[2] * d[3];
    out.assign(total, 0.0);
    parallel_for(total, [&](std::size_t idx) {
      std::size_t r = idx;
      const int k4 = static_cast<int>(r % d[3]);
      r /= d[3];
      const int k3 = static_cast<int>(r % d[2]);
      r /= d[2];
      const int k2 = static_cast<int>(r % d[1]);
      const int k1 = static_cast<int>(r / d[1]);
      out[idx] = vertex_integral(cfg, g[Species::Electron].modes[k1].landau(), g[muon].modes[k2].landau(),
                                 g[Species::AntiNuE].modes[k3].momentum().p, g[Species::NuMu].modes[k4].momentum().p,
                                 variant, quad);
    });
  };
  fill(t.dims1, Species::MuonMinus, VertexVariant::Decay, t.vertex1);
  fill(t.dims2, Species::MuonPlus, VertexVariant::PairCreation, t.vertex2);
  apply_kernels(model, t);
  return t;
}

void apply_kernels(const Model& model, VertexTable& t) {
  const auto& g = model.grids;
  const auto& cfg = model.config;
  auto fill = [&](const std::array<int, 4>& d, Species muon, const std::vector<Complex>& vtx, std::vector<Complex>& out) {
    out.assign(vtx.size(), 0.0);
    for (int k1 = 0; k1 < d[0]; ++k1)
      for (int k2 = 0; k2 < d[1]; ++k2)
        for (int k3 = 0; k3 < d[2]; ++k3)
          for (int k4 = 0; k4 < d[3]; ++k4) {
            const auto& m1 = g[Species::Electron].modes[k1];
            const auto& m2 = g[muon].modes[k2];
            const auto& m3 = g[Species::AntiNuE].modes[k3];
            const auto& m4 = g[Species::NuMu].modes[k4];
            const std::size_t i = VertexTable::index(d, k1, k2, k3, k4);
            out[i] = vtx[i] * eval_F(cfg.spec_F, m2.landau(), m4.momentum()) *
                     eval_G(cfg.spec_G, m1.landau(), m3.momentum()) *
                     std::sqrt(m1.weight * m2.weight * m3.weight * m4.weight);
          }
  };
  fill(t.dims1, Species::MuonMinus, t.vertex1, t.coeff1);
  fill(t.dims2, Species::MuonPlus, t.vertex2, t.coeff2);
}

std::string vertex_cache_key(const ModelConfig& config) {
  const GridSet grids = build_grids(config);
  std::ostringstream s;
  s.precision(17);
  s << "vertex-v1 " << config.m_e << ' ' << config.m_mu << ' ' << config.eB << ' ' << config.tol.hermite_nodes << ' '
    << config.tol.vertex_rel_tol << '\n';
  for (const auto& grid : grids.grids) {
    s << species_name(grid.species) << '\n';
    for (const auto& m : grid.modes) {
      if (is_landau(grid.species)) {
        const auto& q = m.landau();
        s << q.s << ' ' << q.n << ' ' << q.p1 << ' ' << q.p3;
      } else {
        const auto& p = m.momentum().p;
        s << p(0) << ' ' << p(1) << ' ' << p(2);
      }
      s << '\n';
    }
  }
  return hex_digest(s.str());
}

void save_vertex_table(std::ostream& out, const VertexTable& t) {
  out << "mudecay-vertex 1\n";
  out.precision(17);
  for (const auto* d : {&t.dims1, &t.dims2}) out << (*d)[0] << ' ' << (*d)[1] << ' ' << (*d)[2] << ' ' << (*d)[3] << '\n';
  for (const auto* v : {&t.vertex1, &t.vertex2})
    for (const Complex& c : *v) out << c.real() << ' ' << c.imag() << '\n';
}

VertexTable load_vertex_table(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "mudecay-vertex" || version != 1)
    throw std::runtime_error("not a vertex table file");
  VertexTable t;
  for (auto* d : {&t.dims1, &t.dims2})
    for (int& x : *d)
      if (!(in >> x) || x < 0) throw std::runtime_error("bad vertex table dimensions");
  for (auto [d, v] : {std::pair{&t.dims1, &t.vertex1}, std::pair{&t.dims2, &t.vertex2}}) {
    v->resize(static_cast<std::size_t>((*d)[0]) * (*d)[1] * (*d)[2] * (*d)[3]);
    for (Complex& c : *v) {
      double re, im;
      if (!(in >> re >> im)) throw std::runtime_error("truncated vertex table");
      c = {re, im};
    }
  }
  return t;
}

FockOperator assemble_h0(const Model& model) {
  const auto& fock = model.fock;
  std::vector<double> omega(static_cast<std::size_t>(fock.n_modes()));
  for (Species s : kAllSpecies)
    for (int k = 0; k < fock.count(s); ++k)
      omega[static_cast<std::size_t>(fock.mode(s, k))] = mode_energy(model.config, s, model.grids[s].modes[k]);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (State st = 1; st < static_cast<State>(fock.dim()); ++st) {
    double e = 0;
    for (int j = 0; j < fock.n_modes(); ++j)
      if (st >> j & 1) e += omega[static_cast<std::size_t>(j)];
    trip.emplace_back(static_cast<Eigen::Index>(st), static_cast<Eigen::Index>(st), Complex(e));
  }
  FockOperator h;
  h.matrix.resize(fock.dim(), fock.dim());
  h.matrix.setFromTriplets(trip.begin(), trip.end());
  h.hermitian = true;
  return h;
}

FockOperator InteractionParts::total() const {
  FockOperator out;
  out.matrix = h1 + h1_adj() + h2 + h2_adj();
  drop_zeros(out.matrix);
  out.hermitian = true;
  return out;
}

InteractionParts assemble_interaction(const Model& model, const VertexTable& t) {
  const auto& fock = model.fock;
  if (t.coeff1.size() != t.vertex1.size() || t.coeff2.size() != t.vertex2.size())
    throw std::invalid_argument("vertex table has no kernel coefficients");
  auto build = [&](const std::array<int, 4>& d, const std::vector<Complex>& coeff, bool pair) {
    std::vector<Monomial> terms;
    for (int k1 = 0; k1 < d[0]; ++k1)
      for (int k2 = 0; k2 < d[1]; ++k2)
        for (int k3 = 0; k3 < d[2]; ++k3)
          for (int k4 = 0; k4 < d[3]; ++k4) {
            const Complex c = coeff[VertexTable::index(d, k1, k2, k3, k4)];
            if (c == 0.0) continue;
            const int e = fock.mode(Species::Electron, k1), nb = fock.mode(Species::AntiNuE, k3),
                      nu = fock.mode(Species::NuMu, k4);
            if (pair)
              terms.push_back({{{nu, true}, {fock.mode(Species::MuonPlus, k2), true}, {e, true}, {nb, true}}, c});
            else
              terms.push_back({{{nu, true}, {e, true}, {nb, true}, {fock.mode(Species::MuonMinus, k2), false}}, c});
          }
    return assemble_monomials(fock, terms);
  };
  return {build(t.dims1, t.coeff1, false), build(t.dims2, t.coeff2, true)};
}

FockOperator assemble_hi(const Model& model, const VertexTable& table) {
  return assemble_interaction(model, table).total();
}

TotalHamiltonian assemble_total(const Model& model, const VertexTable& table) {
  return assemble_total(model, table, model.config.g);
}

TotalHamiltonian assemble_total(const Model& model, const VertexTable& table, double g) {
  if (!(g >= 0)) throw ConfigError("coupling g must be non-negative");
  TotalHamiltonian out;
  out.g = g;
  out.h0 = assemble_h0(model);
  out.hi = assemble_hi(model, table);
  out.h.matrix = out.h0.matrix + g * out.hi.matrix;
  drop_zeros(out.h.matrix);
  out.h.hermitian = true;
  const BoundsReport b = compute_bounds(model);
  if (!b.g0_infinite && g > b.g0) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "g = " << g << " exceeds the self-adjointness threshold g0 = " << b.g0;
    out.warnings.push_back(msg.str());
  }
  return out;
}

// ---- commutator table ----

namespace {

enum class Part { H1, H1Adj, H2, H2Adj };

struct LegOp {
  Species species;
  bool dagger;
};

struct Identity {
  Part part;
  Species field;
  bool field_dagger;
  int sign;
  std::array<LegOp, 3> rest;
};

constexpr Species E = Species::Electron, MM = Species::MuonMinus, MP = Species::MuonPlus, NB = Species::AntiNuE,
                  NU = Species::NuMu;

// Nonvanishing commutators [part, field] = sign * (contracted coefficient) * rest.
const std::vector<Identity>& nonvanishing_table() {
  static const std::vector<Identity> table{
      {Part::H1, E, false, +1, {{{NU, true}, {NB, true}, {MM, false}}}},
      {Part::H1, MM, true, +1, {{{NU, true}, {E, true}, {NB, true}}}},
      {Part::H1, NB, false, -1, {{{NU, true}, {E, true}, {MM, false}}}},
      {Part::H1, NU, false, -1, {{{E, true}, {NB, true}, {MM, false}}}},
      {Part::H1Adj, E, true, -1, {{{MM, true}, {NB, false}, {NU, false}}}},
      {Part::H1Adj, MM, false, -1, {{{NB, false}, {E, false}, {NU, false}}}},
      {Part::H1Adj, NB, true, +1, {{{MM, true}, {E, false}, {NU, false}}}},
      {Part::H1Adj, NU, true, +1, {{{MM, true}, {NB, false}, {E, false}}}},
      {Part::H2, E, false, -1, {{{NU, true}, {MP, true}, {NB, true}}}},
      {Part::H2, MP, false, +1, {{{NU, true}, {E, true}, {NB, true}}}},
      {Part::H2, NB, false, +1, {{{NU, true}, {MP, true}, {E, true}}}},
      {Part::H2, NU, false, -1, {{{MP, true}, {E, true}, {NB, true}}}},
      {Part::H2Adj, E, true, +1, {{{NB, false}, {MP, false}, {NU, false}}}},
      {Part::H2Adj, MP, true, -1, {{{NB, false}, {E, false}, {NU, false}}}},
      {Part::H2Adj, NB, true, -1, {{{E, false}, {MP, false}, {NU, false}}}},
      {Part::H2Adj, NU, true, +1, {{{NB, false}, {E, false}, {MP, false}}}},
  };
  return table;
}

std::string part_name(Part p) {
  switch (p) {
    case Part::H1: return "H1";
    case Part::H1Adj: return "H1*";
    case Part::H2: return "H2";
    case Part::H2Adj: return "H2*";
  }
  return "?";
}

std::string field_name(Species s, bool dagger) {
  return std::string(dagger ? "b*_" : "b_") + std::string(species_name(s));
}

}  // namespace

bool CommutatorReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CommutatorCheck& c) { return c.passed; });
}

std::string CommutatorReport::channel_name() const { return field_name(channel, dagger); }

CommutatorReport commutator_identities(const Model& model, const VertexTable& table, const InteractionParts& parts,
                                       Species channel, bool dagger, const Eigen::VectorXcd& f) {
  const auto& fock = model.fock;
  const SparseOp field = field_operator(fock, channel, dagger, f).matrix;
  CommutatorReport rep;
  rep.channel = channel;
  rep.dagger = dagger;

  const double f_max = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  for (Part part : {Part::H1, Part::H1Adj, Part::H2, Part::H2Adj}) {
    const bool pair = part == Part::H2 || part == Part::H2Adj;
    const bool adj = part == Part::H1Adj || part == Part::H2Adj;
    const SparseOp op = part == Part::H1 ? parts.h1 : part == Part::H1Adj ? parts.h1_adj()
                        : part == Part::H2 ? parts.h2 : parts.h2_adj();
    const SparseOp comm = commutator(op, field);

    CommutatorCheck check;
    check.name = "[" + part_name(part) + ", " + field_name(channel, dagger) + "]";
    const Identity* id = nullptr;
    for (const auto& row : nonvanishing_table())
      if (row.part == part && row.field == channel && row.field_dagger == dagger) id = &row;

    if (!id) {
      check.vanishing = true;
      check.max_deviation = max_abs_entry(comm);
      check.exact = comm.nonZeros() == 0;
      // products of at most a few terms; only reassociation rounding can survive
      check.tolerance = 1e-14 * std::max(1.0, max_abs_entry(op) * f_max);
    } else {
      const auto& d = pair ? table.dims2 : table.dims1;
      const auto& coeff = pair ? table.coeff2 : table.coeff1;
      const Species muon = pair ? Species::MuonPlus : Species::MuonMinus;
      std::vector<Monomial> terms;
      for (int k1 = 0; k1 < d[0]; ++k1)
        for (int k2 = 0; k2 < d[1]; ++k2)
          for (int k3 = 0; k3 < d[2]; ++k3)
            for (int k4 = 0; k4 < d[3]; ++k4) {
              auto local = [&](Species s) {
                return s == E ? k1 : (s == MM || s == MP) ? k2 : s == NB ? k3 : k4;
              };
              Complex c = coeff[VertexTable::index(d, k1, k2, k3, k4)];
              if (adj) c = std::conj(c);
              const Complex fk = f(local(channel));
              c *= double(id->sign) * (dagger ? fk : std::conj(fk));
              Monomial m{{}, c};
              for (const auto& leg : id->rest) {
                const Species s = (leg.species == MM || leg.species == MP) ? muon : leg.species;
                m.ops.push_back({fock.mode(s, local(s)), leg.dagger});
              }
              terms.push_back(std::move(m));
            }
      const SparseOp expected = assemble_monomials(fock, terms);
      SparseOp diff = comm - expected;
      check.max_deviation = max_abs_entry(diff);
      drop_zeros(diff);
      check.exact = diff.nonZeros() == 0;
      check.tolerance = 1e-12 * std::max(1.0, max_abs_entry(expected));
    }
    check.passed = check.max_deviation <= check.tolerance;
    rep.checks.push_back(check);
  }
  return rep;
}

}  // namespace mudecay
