#pragma once

#include "mudecay/dirac.hpp"

#include <Eigen/Core>

namespace mudecay {

using Momentum = Eigen::Vector3d;

struct MomentumQN {
  Momentum p = Momentum::Zero();
  double helicity = -0.5;
};

// Two-component helicity spinors.
// h_minus(p): sigma.p h = -|p| h.  h_plus_reversed(p) = h_+(-p): sigma.(-p) h = +|p| h.
Eigen::Vector2cd h_minus(const Momentum& p);
Eigen::Vector2cd h_plus_reversed(const Momentum& p);

// Left-handed muon neutrino: (h_-(p), -h_-(p)) / sqrt(2).
Spinor4 spinor_u_numu(const Momentum& p);

// Right-handed electron antineutrino: (-h_+(-p), h_+(-p)) / sqrt(2).
Spinor4 spinor_w_nubar_e(const Momentum& p);

// Sigma . n for the upper or lower 2-block, used by the helicity checks.
Eigen::Matrix2cd sigma_dot(const Momentum& n);

}  // namespace mudecay
