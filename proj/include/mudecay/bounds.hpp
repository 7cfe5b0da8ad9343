#pragma once

#include "mudecay/hamiltonian.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mudecay {

inline constexpr double kThresholdMargin = 1e-6;

struct BoundsReport {
  double C = 0;
  double M = 0;
  double norm_F = 0;  // norms entering a and b
  double norm_G = 0;
  double norm_F_continuum = 0;
  double norm_G_continuum = 0;
  double a = 0;
  double b = 0;
  double a_tilde = 1;
  double b_tilde = 0;
  double g0 = 0;
  bool g0_infinite = false;
  double epsilon = kThresholdMargin;
};

// Pure arithmetic of the constant chain.
BoundsReport bounds_from_norms(double C, double m_e, double m_mu, double norm_F, double norm_G,
                               double epsilon = kThresholdMargin);

struct DiscreteKernelNorms {
  double F = 0;  // max over the mu- and mu+ grids
  double G = 0;
};

// l2 norms of the sampled kernels sqrt(w w') K on the model grids.
DiscreteKernelNorms discrete_kernel_norms(const Model& model);

// Constants for the finite model: discrete kernel norms, C from the Dirac algebra.
BoundsReport compute_bounds(const Model& model);

struct RelativeBoundCheck {
  int samples = 0;
  std::uint64_t seed = 0;
  double empirical_max_ratio = 0;   // ||H_I phi|| / (a ||H0 phi|| + b ||phi||)
  double inverted_max_ratio = 0;    // ||H0 psi|| / (a~ ||H psi|| + b~ ||psi||)
  double number_max_ratio = 0;      // electron and muon number bounds along e^{-itH}
  double vacuum_image_norm = 0;     // ||H_I Omega||, at most b/2
  std::vector<std::string> violations;

  bool passed() const { return violations.empty(); }
};

// Draws complex Gaussian unit vectors from a seeded generator and checks the
// relative bound, the inverted bound and the number-operator bounds at `times`.
RelativeBoundCheck verify_relative_bound(const Model& model, const TotalHamiltonian& h, const BoundsReport& bounds,
                                         int n_samples, std::uint64_t seed,
                                         const std::vector<double>& times = {0.0, 1.0, 10.0});

}  // namespace mudecay
