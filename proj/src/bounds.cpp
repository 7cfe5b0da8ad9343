#include "mudecay/bounds.hpp"

#include "mudecay/dirac.hpp"
#include "mudecay/errors.hpp"
#include "mudecay/kernels.hpp"
#include "mudecay/spectral.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace mudecay {

BoundsReport bounds_from_norms(double C, double m_e, double m_mu, double norm_F, double norm_G, double epsilon) {
  if (!(m_e > 0) || !(m_mu > 0)) throw ConfigError("masses must be positive");
  BoundsReport r;
  r.C = C;
  r.M = 1.0 / (1.0 / m_e + 1.0 / m_mu);
  r.norm_F = norm_F;
  r.norm_G = norm_G;
  r.epsilon = epsilon;
  const double prod = norm_F * norm_G;
  r.a = 4.0 * (C / r.M) * prod;
  r.b = 2.0 * C * prod;
  if (r.a == 0.0) {
    r.g0_infinite = true;
    r.g0 = std::numeric_limits<double>::infinity();
    r.a_tilde = 1.0;
    r.b_tilde = 0.0;
    return r;
  }
  r.g0 = (1.0 - epsilon) / r.a;
  r.a_tilde = 1.0 / (1.0 - r.g0 * r.a);
  r.b_tilde = r.g0 * r.b / (1.0 - r.g0 * r.a);
  return r;
}

DiscreteKernelNorms discrete_kernel_norms(const Model& model) {
  const auto& g = model.grids;
  const auto& cfg = model.config;
  auto norm = [&](Species landau_species, Species nu_species, bool is_F) {
    double sum = 0;
    for (const auto& m1 : g[landau_species].modes)
      for (const auto& m2 : g[nu_species].modes) {
        const Complex k = is_F ? eval_F(cfg.spec_F, m1.landau(), m2.momentum())
                               : eval_G(cfg.spec_G, m1.landau(), m2.momentum());
        sum += m1.weight * m2.weight * std::norm(k);
      }
    return std::sqrt(sum);
  };
  return {std::max(norm(Species::MuonMinus, Species::NuMu, true), norm(Species::MuonPlus, Species::NuMu, true)),
          norm(Species::Electron, Species::AntiNuE, false)};
}

BoundsReport compute_bounds(const Model& model) {
  const auto& cfg = model.config;
  const DiscreteKernelNorms d = discrete_kernel_norms(model);
  BoundsReport r = bounds_from_norms(c_constant(), cfg.m_e, cfg.m_mu, d.F, d.G);
  r.norm_F_continuum = l2_norm(cfg.spec_F, cfg.grid_mu_minus.spins);
  r.norm_G_continuum = l2_norm(cfg.spec_G, cfg.grid_e.spins);
  return r;
}

RelativeBoundCheck verify_relative_bound(const Model& model, const TotalHamiltonian& h, const BoundsReport& bounds,
                                         int n_samples, std::uint64_t seed, const std::vector<double>& times) {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  RelativeBoundCheck out;
  out.samples = n_samples;
  out.seed = seed;
  const auto dim = model.fock.dim();
  const SparseOp& H0 = h.h0.matrix;
  const SparseOp& HI = h.hi.matrix;
  const SparseOp& H = h.h.matrix;
  const double m_e = model.config.m_e, m_mu = model.config.m_mu;

  out.vacuum_image_norm = (HI * vacuum(dim)).norm();
  if (out.vacuum_image_norm > bounds.b / 2 * (1 + 1e-12) + 1e-15) {
    std::ostringstream msg;
    msg << "||H_I Omega|| = " << out.vacuum_image_norm << " exceeds C||F||||G|| = " << bounds.b / 2;
    out.violations.push_back(msg.str());
  }

  // sqrt(N + 1) for electrons and for both muon signs
  Eigen::VectorXd root_ne(dim), root_nmu_minus(dim), root_nmu_plus(dim);
  for (Eigen::Index st = 0; st < dim; ++st) {
    root_ne(st) = std::sqrt(1.0 + model.fock.occupation(static_cast<State>(st), Species::Electron));
    root_nmu_minus(st) = std::sqrt(1.0 + model.fock.occupation(static_cast<State>(st), Species::MuonMinus));
    root_nmu_plus(st) = std::sqrt(1.0 + model.fock.occupation(static_cast<State>(st), Species::MuonPlus));
  }
  // the inverted constants only hold below the threshold
  const bool check_evolution = !times.empty() && (bounds.g0_infinite || h.g <= bounds.g0);
  SectorDecomposition sectors;
  if (check_evolution) sectors = sector_eigensystems(model.fock, H, true);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < n_samples; ++i) {
    Eigen::VectorXcd phi(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      phi(k) = Complex(re, im);
    }
    phi.normalize();
    auto flag = [&](const char* what, double ratio) {
      if (ratio > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << what << " violated by sample " << i << " (seed " << seed << "): ratio " << ratio;
        out.violations.push_back(msg.str());
      }
    };
    const double h0n = (H0 * phi).norm(), hin = (HI * phi).norm(), hn = (H * phi).norm();
    const double denom = bounds.a * h0n + bounds.b;
    const double ratio = denom > 0 ? hin / denom : (hin > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.empirical_max_ratio = std::max(out.empirical_max_ratio, ratio);
    flag("relative bound", ratio);

    if (!check_evolution) continue;
    const double inv = h0n / (bounds.a_tilde * hn + bounds.b_tilde);
    out.inverted_max_ratio = std::max(out.inverted_max_ratio, inv);
    flag("inverted bound", inv);
    for (double t : times) {
      const Eigen::VectorXcd psi_t = evolve(sectors, phi, t);
      const double lhs_e = m_e * root_ne.cwiseProduct(psi_t.cwiseAbs()).norm();
      const double rhs_e = bounds.a_tilde * hn + bounds.b_tilde + m_e;
      const double lhs_mm = m_mu * root_nmu_minus.cwiseProduct(psi_t.cwiseAbs()).norm();
      const double lhs_mp = m_mu * root_nmu_plus.cwiseProduct(psi_t.cwiseAbs()).norm();
      const double rhs_mu = bounds.a_tilde * hn + bounds.b_tilde + m_mu;
      const double r = std::max({lhs_e / rhs_e, lhs_mm / rhs_mu, lhs_mp / rhs_mu});
      out.number_max_ratio = std::max(out.number_max_ratio, r);
      flag("number bound", r);
    }
  }
  return out;
}

}  // namespace mudecay
