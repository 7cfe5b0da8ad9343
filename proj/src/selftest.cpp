#include "mudecay/selftest.hpp"

#include "mudecay/dirac.hpp"
#include "mudecay/neutrino.hpp"
#include "mudecay/quadrature.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace mudecay {

namespace {

SuiteCheck finish(std::string name, double err, double tol, std::string detail = {}) {
  return {std::move(name), err, tol, err <= tol, std::move(detail)};
}

}  // namespace

std::vector<SuiteCheck> car_suite(const FockSpace& fock) {
  const int n = fock.n_modes();
  const auto dim = static_cast<State>(fock.dim());
  // exact: for each basis state, coefficient of every output state as an integer
  long exact_err = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kind = 0; kind < 3; ++kind) {
        const Ladder a{i, kind == 2}, b{j, kind != 0};
        for (State s = 0; s < dim; ++s) {
          // {a, b} |s> = a b |s> + b a |s>
          const std::array<Ladder, 2> ab{a, b}, ba{b, a};
          std::map<State, long> out;
          if (auto r = fock.apply(s, ab)) out[r->first] += r->second;
          if (auto r = fock.apply(s, ba)) out[r->first] += r->second;
          const long target = (kind == 1 && i == j) ? 1 : 0;  // {b_i, b*_j} = delta
          for (auto& [state, c] : out) exact_err = std::max(exact_err, std::abs(c - (state == s ? target : 0)));
          if (target && !out.count(s)) exact_err = std::max(exact_err, 1L);
        }
      }
  double float_err = 0;
  std::vector<FockOperator> ann, cre;
  for (Species sp : kAllSpecies)
    for (int k = 0; k < fock.count(sp); ++k) {
      ann.push_back(annihilation(fock, sp, k));
      cre.push_back(creation(fock, sp, k));
    }
  SparseOp id(fock.dim(), fock.dim());
  id.setIdentity();
  for (std::size_t i = 0; i < ann.size(); ++i)
    for (std::size_t j = 0; j < ann.size(); ++j) {
      SparseOp mixed = anticommutator(ann[i].matrix, cre[j].matrix);
      if (i == j) mixed -= id;
      float_err = std::max({float_err, max_abs_entry(mixed), max_abs_entry(anticommutator(ann[i].matrix, ann[j].matrix)),
                            max_abs_entry(anticommutator(cre[i].matrix, cre[j].matrix))});
    }
  std::ostringstream d;
  d << n << " modes, dimension " << fock.dim();
  return {finish("car_exact_sign", static_cast<double>(exact_err), 0.0, d.str()),
          finish("car_floating", float_err, 1e-14, d.str())};
}

std::vector<SuiteCheck> gamma_suite() {
  const auto& g = gammas();
  using M = GammaSet<double>::Matrix;
  double clifford = 0, g5 = 0, herm = 0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      M target = M::Zero();
      if (mu == nu) target = 2 * g.metric[static_cast<std::size_t>(mu)] * M::Identity();
      clifford = std::max(clifford, (g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu] - target).cwiseAbs().maxCoeff());
    }
    g5 = std::max(g5, (g.gamma5 * g.gamma[mu] + g.gamma[mu] * g.gamma5).cwiseAbs().maxCoeff());
    // gamma^0 gamma^mu gamma^0 = gamma^mu^+
    herm = std::max(herm, (g.gamma[0] * g.gamma[mu] * g.gamma[0] - g.gamma[mu].adjoint()).cwiseAbs().maxCoeff());
  }
  g5 = std::max({g5, (g.gamma5 * g.gamma5 - M::Identity()).cwiseAbs().maxCoeff(),
                 (g.gamma5 - g.gamma5.adjoint()).cwiseAbs().maxCoeff()});
  return {finish("clifford", clifford, 1e-15), finish("gamma5", g5, 1e-15), finish("gamma_adjoint", herm, 1e-15)};
}

std::vector<SuiteCheck> orthonormality_suite(const ParticleParams& electron, const ParticleParams& muon, int n_max,
                                             int samples, std::uint64_t seed, int nodes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const auto rule = gauss_hermite<double>(nodes);
  struct Kind {
    std::string name;
    ParticleParams params;
    bool v;
  };
  const std::vector<Kind> kinds{{"U_electron", electron, false}, {"U_muon", muon, false}, {"V_muon", muon, true}};
  std::vector<SuiteCheck> out;
  for (const auto& kind : kinds) {
    double same = 0, cross = 0, unit = 0;
    for (int k = 0; k < samples; ++k) {
      const double p1 = uni(rng), p3 = uni(rng);
      const double eB = kind.params.eB, root = std::sqrt(eB);
      // x2 = p1/eB + u/sqrt(eB), weight exp(-u^2) divided back out
      std::vector<std::vector<Spinor4>> table;  // [(s,n)][node]
      std::vector<std::pair<int, int>> labels;
      for (int s : {-1, 1})
        for (int n = 0; n <= n_max; ++n) {
          std::vector<Spinor4> col;
          for (Eigen::Index i = 0; i < rule.size(); ++i) {
            const double x2 = p1 / eB + rule.nodes(i) / root;
            const LandauQN qn{s, n, p1, p3};
            col.push_back(kind.v ? spinor_v(kind.params, qn, x2) : spinor_u(kind.params, qn, x2));
          }
          table.push_back(std::move(col));
          labels.emplace_back(s, n);
        }
      for (std::size_t a = 0; a < table.size(); ++a)
        for (std::size_t b = 0; b < table.size(); ++b) {
          Complex sum = 0;
          for (Eigen::Index i = 0; i < rule.size(); ++i)
            sum += rule.weights(i) * std::exp(rule.nodes(i) * rule.nodes(i)) / root *
                   table[a][static_cast<std::size_t>(i)].dot(table[b][static_cast<std::size_t>(i)]);
          const auto [sa, na] = labels[a];
          const auto [sb, nb] = labels[b];
          const bool null_a = sa == 1 && na == 0, null_b = sb == 1 && nb == 0;
          const double target = (a == b && !null_a) ? 1.0 : 0.0;
          const double err = std::abs(sum - target);
          if (na == nb) {
            same = std::max(same, err);
            if (a == b && !null_a) unit = std::max(unit, err);
          } else if (!null_a && !null_b) {
            cross = std::max(cross, err);
          }
        }
    }
    out.push_back(finish(kind.name + "_same_level", same, 1e-10));
    out.push_back(finish(kind.name + "_norm", unit, 1e-10));
    out.push_back(finish(kind.name + "_distinct_levels", cross, 1e-10));
  }
  return out;
}

std::vector<SuiteCheck> neutrino_suite(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double norm_u = 0, norm_w = 0, helicity = 0;
  for (int k = 0; k < samples; ++k) {
    Momentum p(normal(rng), normal(rng), normal(rng));
    p *= std::exp(normal(rng));
    norm_u = std::max(norm_u, std::abs(spinor_u_numu(p).norm() - 1));
    norm_w = std::max(norm_w, std::abs(spinor_w_nubar_e(p).norm() - 1));
    const Eigen::Matrix2cd sp = sigma_dot(p);
    const double r = p.norm();
    helicity = std::max({helicity, (sp * h_minus(p) + r * h_minus(p)).norm() / r,
                         (sp * h_plus_reversed(p) + r * h_plus_reversed(p)).norm() / r});
  }
  return {finish("U_numu_norm", norm_u, 1e-14), finish("W_nubar_norm", norm_w, 1e-14),
          finish("helicity_eigen", helicity, 1e-13)};
}

SuiteCheck hermite_recurrence_check(int n_max, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-8.0, 8.0);
  double err = 0;
  for (int k = 0; k < samples; ++k) {
    const double xi = uni(rng);
    const auto psi = hermite_functions<double>(n_max, xi);
    for (int n = 0; n + 1 <= n_max; ++n) {
      const double prev = n >= 1 ? psi(n - 1) : 0.0;
      const double rhs = xi * std::sqrt(2.0 / (n + 1)) * psi(n) - std::sqrt(double(n) / (n + 1)) * prev;
      err = std::max(err, std::abs(psi(n + 1) - rhs));
    }
  }
  return finish("hermite_recurrence", err, 1e-12);
}

}  // namespace mudecay
