#pragma once

#include "mudecay/dirac.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mudecay {

// Landau quantum numbers (s, n, p^1, p^3).
struct LandauQN {
  int s = -1;
  int n = 0;
  double p1 = 0;
  double p3 = 0;

  bool operator==(const LandauQN&) const = default;
};

struct ParticleParams {
  double mass = 1;
  double eB = 1;
};

void validate(const ParticleParams& params);
void validate(const LandauQN& qn);

// Orthonormal Hermite functions psi_0..psi_nmax at xi by the stable recurrence.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hermite_functions(int n_max, Scalar xi) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> psi(n_max + 1);
  psi(0) = std::pow(std::numbers::pi_v<Scalar>, Scalar(-0.25)) * std::exp(-xi * xi / 2);
  if (n_max >= 1) psi(1) = std::sqrt(Scalar(2)) * xi * psi(0);
  for (int n = 1; n < n_max; ++n)
    psi(n + 1) = std::sqrt(Scalar(2) / (n + 1)) * xi * psi(n) - std::sqrt(Scalar(n) / (n + 1)) * psi(n - 1);
  return psi;
}

// I_n(xi) = (eB)^{1/4} psi_n(xi); I_{-1} = 0.
template <typename Scalar>
Scalar hermite_fn(int n, Scalar xi, Scalar eB) {
  if (n < -1) throw std::invalid_argument("hermite_fn: n must be >= -1");
  if (n == -1) return Scalar(0);
  return std::pow(eB, Scalar(0.25)) * hermite_functions<Scalar>(n, xi)(n);
}

double energy(const ParticleParams& params, int n, double p3);

// Guiding-centre coordinate xi = sqrt(eB) (x2 - p1/eB).
inline double landau_xi(double eB, double p1, double x2) { return std::sqrt(eB) * (x2 - p1 / eB); }

// Particle spinor U_s(x2, n, p1, p3); zero for s=+1, n=0.
Spinor4 spinor_u(const ParticleParams& params, const LandauQN& qn, double x2);

// Antiparticle building block V_s(x2, n, p1, p3); zero for s=+1, n=0.
Spinor4 spinor_v(const ParticleParams& params, const LandauQN& qn, double x2);

// Antimuon spinor: s=+1 -> V_{-1}(n,-p1,-p3), s=-1 -> V_{+1}(n,-p1,-p3), zero for s=-1, n=0.
Spinor4 spinor_w_mu(const ParticleParams& params, const LandauQN& qn, double x2);

// Spinors factor as D * (I_{n-1}(xi), I_n(xi)). For U, xi uses p1; for the
// antimuon W, xi uses -p1.
using LandauCoefficients = Eigen::Matrix<double, 4, 2>;
LandauCoefficients u_coefficients(const ParticleParams& params, const LandauQN& qn);
LandauCoefficients w_mu_coefficients(const ParticleParams& params, const LandauQN& qn);

// True when the spinor of the given kind vanishes identically.
bool u_is_null(const LandauQN& qn);
bool w_is_null(const LandauQN& qn);

// Sorted, merged threshold set {sqrt(m^2 + 2 n eB)} for both masses, n = 0..n_max.
std::vector<double> thresholds(const ParticleParams& params_e, const ParticleParams& params_mu, int n_max);

}  // namespace mudecay
