#include "mudecay/landau.hpp"

#include <algorithm>

namespace mudecay {

void validate(const ParticleParams& params) {
  if (!(params.mass > 0)) throw std::invalid_argument("particle mass must be positive");
  if (!(params.eB > 0)) throw std::invalid_argument("eB must be positive");
}

void validate(const LandauQN& qn) {
  if (qn.n < 0) throw std::invalid_argument("Landau level must be >= 0");
  if (qn.s != 1 && qn.s != -1) throw std::invalid_argument("Landau spin must be +1 or -1");
}

double energy(const ParticleParams& params, int n, double p3) {
  if (n < 0) throw std::invalid_argument("energy: Landau level must be >= 0");
  return std::sqrt(params.mass * params.mass + p3 * p3 + 2.0 * n * params.eB);
}

namespace {

struct LevelPair {
  double lower;  // I_{n-1}
  double upper;  // I_n
};

LevelPair levels(int n, double xi, double eB) {
  const auto psi = hermite_functions<double>(n, xi);
  const double scale = std::pow(eB, 0.25);
  return {n >= 1 ? scale * psi(n - 1) : 0.0, scale * psi(n)};
}

struct Coefficients {
  double norm;  // sqrt((E+m)/2E)
  double a;     // p3/(E+m)
  double b;     // sqrt(2 n eB)/(E+m)
};

Coefficients coefficients(const ParticleParams& params, int n, double p3) {
  const double e = energy(params, n, p3);
  const double em = e + params.mass;
  return {std::sqrt(em / (2 * e)), p3 / em, std::sqrt(2.0 * n * params.eB) / em};
}

}  // namespace

bool u_is_null(const LandauQN& qn) { return qn.s == 1 && qn.n == 0; }
bool w_is_null(const LandauQN& qn) { return qn.s == -1 && qn.n == 0; }

namespace {

LandauCoefficients v_coefficients(const ParticleParams& params, const LandauQN& qn) {
  LandauCoefficients d = LandauCoefficients::Zero();
  if (qn.s == 1 && qn.n == 0) return d;
  const auto [c, a, b] = coefficients(params, qn.n, qn.p3);
  if (qn.s == 1) {
    d(0, 0) = -a;
    d(1, 1) = b;
    d(2, 0) = 1;
  } else {
    d(0, 0) = b;
    d(1, 1) = a;
    d(3, 1) = 1;
  }
  return c * d;
}

Spinor4 combine(const LandauCoefficients& d, int n, double xi, double eB) {
  const auto [lo, hi] = levels(n, xi, eB);
  return (d.col(0) * lo + d.col(1) * hi).cast<Complex>();
}

}  // namespace

LandauCoefficients u_coefficients(const ParticleParams& params, const LandauQN& qn) {
  validate(qn);
  LandauCoefficients d = LandauCoefficients::Zero();
  if (u_is_null(qn)) return d;
  const auto [c, a, b] = coefficients(params, qn.n, qn.p3);
  if (qn.s == 1) {
    d(0, 0) = 1;
    d(2, 0) = a;
    d(3, 1) = -b;
  } else {
    d(1, 1) = 1;
    d(2, 0) = -b;
    d(3, 1) = -a;
  }
  return c * d;
}

LandauCoefficients w_mu_coefficients(const ParticleParams& params, const LandauQN& qn) {
  validate(qn);
  if (w_is_null(qn)) return LandauCoefficients::Zero();
  return v_coefficients(params, LandauQN{-qn.s, qn.n, -qn.p1, -qn.p3});
}

Spinor4 spinor_u(const ParticleParams& params, const LandauQN& qn, double x2) {
  return combine(u_coefficients(params, qn), qn.n, landau_xi(params.eB, qn.p1, x2), params.eB);
}

Spinor4 spinor_v(const ParticleParams& params, const LandauQN& qn, double x2) {
  validate(qn);
  return combine(v_coefficients(params, qn), qn.n, landau_xi(params.eB, qn.p1, x2), params.eB);
}

Spinor4 spinor_w_mu(const ParticleParams& params, const LandauQN& qn, double x2) {
  return combine(w_mu_coefficients(params, qn), qn.n, landau_xi(params.eB, -qn.p1, x2), params.eB);
}

std::vector<double> thresholds(const ParticleParams& params_e, const ParticleParams& params_mu, int n_max) {
  if (n_max < 0) throw std::invalid_argument("thresholds: n_max must be >= 0");
  std::vector<double> out;
  for (const auto* p : {&params_e, &params_mu})
    for (int n = 0; n <= n_max; ++n) out.push_back(std::sqrt(p->mass * p->mass + 2.0 * n * p->eB));
  std::sort(out.begin(), out.end());
  // merge values equal up to rounding of the square roots
  std::vector<double> merged;
  for (double v : out)
    if (merged.empty() || v - merged.back() > 1e-12 * (1 + v)) merged.push_back(v);
  return merged;
}

}  // namespace mudecay
