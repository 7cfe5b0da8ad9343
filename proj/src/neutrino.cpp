#include "mudecay/neutrino.hpp"

#include <cmath>
#include <stdexcept>

namespace mudecay {

namespace {

constexpr double kAxisCutoff = 1e-24;

double checked_norm(const Momentum& p) {
  const double r = p.norm();
  if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("neutrino momentum must be nonzero and finite");
  return r;
}

// r - sign*p3 without cancellation near the axis.
double axis_gap(const Momentum& p, double r, double sign) {
  const double z = sign * p(2);
  if (z <= 0) return r - z;
  return (p(0) * p(0) + p(1) * p(1)) / (r + z);
}

}  // namespace

Eigen::Vector2cd h_minus(const Momentum& p) {
  const double r = checked_norm(p);
  const double den = 2 * r * axis_gap(p, r, 1.0);
  Eigen::Vector2cd h;
  if (den <= kAxisCutoff * r * r) {
    h << 0, 1;
    return h;
  }
  h << Complex(-axis_gap(p, r, 1.0), 0), Complex(p(0), p(1));
  return h / std::sqrt(den);
}

Eigen::Vector2cd h_plus_reversed(const Momentum& p) {
  const double r = checked_norm(p);
  const double den = 2 * r * axis_gap(p, r, -1.0);
  Eigen::Vector2cd h;
  if (den <= kAxisCutoff * r * r) {
    h << 1, 0;
    return h;
  }
  h << Complex(-p(0), p(1)), Complex(axis_gap(p, r, -1.0), 0);
  return h / std::sqrt(den);
}

Spinor4 spinor_u_numu(const Momentum& p) {
  const Eigen::Vector2cd h = h_minus(p);
  Spinor4 u;
  u << h, -h;
  return u / std::sqrt(2.0);
}

Spinor4 spinor_w_nubar_e(const Momentum& p) {
  const Eigen::Vector2cd h = h_plus_reversed(p);
  Spinor4 w;
  w << -h, h;
  return w / std::sqrt(2.0);
}

Eigen::Matrix2cd sigma_dot(const Momentum& n) {
  Eigen::Matrix2cd m;
  m << Complex(n(2), 0), Complex(n(0), -n(1)), Complex(n(0), n(1)), Complex(-n(2), 0);
  return m;
}

}  // namespace mudecay
