#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mudecay {

template <typename Scalar>
struct QuadratureRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  Eigen::Index size() const { return nodes.size(); }
};

// Gauss-Legendre on [-1, 1], Newton iteration on P_n from the Chebyshev guess.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar z = std::cos(pi * (i + Scalar(0.75)) / (n + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        const Scalar p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const Scalar dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    // recompute derivative at the converged node
    Scalar p0 = 1, p1 = 0;
    for (int j = 0; j < n; ++j) {
      const Scalar p2 = p1;
      p1 = p0;
      p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
    }
    dp = n * (z * p0 - p1) / (z * z - 1);
    const Scalar w = 2 / ((1 - z * z) * dp * dp);
    rule.nodes(i) = -z;
    rule.nodes(n - 1 - i) = z;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0;
  return rule;
}

template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n, Scalar a, Scalar b) {
  QuadratureRule<Scalar> rule = gauss_legendre<Scalar>(n);
  const Scalar mid = (a + b) / 2, half = (b - a) / 2;
  rule.nodes = (rule.nodes.array() * half + mid).matrix();
  rule.weights *= half;
  return rule;
}

// Gauss-Hermite for the weight exp(-x^2). Uses the orthonormal recurrence so
// large n does not overflow.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar pim4 = std::pow(std::numbers::pi_v<Scalar>, Scalar(-0.25));
  const int half = (n + 1) / 2;
  Scalar z = 0;
  for (int i = 0; i < half; ++i) {
    if (i == 0)
      z = std::sqrt(Scalar(2 * n + 1)) - Scalar(1.85575) * std::pow(Scalar(2 * n + 1), Scalar(-1.0 / 6.0));
    else if (i == 1)
      z -= Scalar(1.14) * std::pow(Scalar(n), Scalar(0.426)) / z;
    else if (i == 2)
      z = Scalar(1.86) * z - Scalar(0.86) * rule.nodes(0);
    else if (i == 3)
      z = Scalar(1.91) * z - Scalar(0.91) * rule.nodes(1);
    else
      z = 2 * z - rule.nodes(i - 2);
    Scalar pp = 0;
    for (int iter = 0; iter < 200; ++iter) {
      Scalar p1 = pim4, p2 = 0;
      for (int j = 0; j < n; ++j) {
        const Scalar p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(Scalar(2) / (j + 1)) * p2 - std::sqrt(Scalar(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(Scalar(2 * n)) * p2;
      const Scalar dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 4 * std::numeric_limits<Scalar>::epsilon() * (1 + std::abs(z))) break;
    }
    Scalar p1 = pim4, p2 = 0;
    for (int j = 0; j < n; ++j) {
      const Scalar p3 = p2;
      p2 = p1;
      p1 = z * std::sqrt(Scalar(2) / (j + 1)) * p2 - std::sqrt(Scalar(j) / (j + 1)) * p3;
    }
    pp = std::sqrt(Scalar(2 * n)) * p2;
    rule.nodes(i) = z;
    rule.nodes(n - 1 - i) = -z;
    rule.weights(i) = 2 / (pp * pp);
    rule.weights(n - 1 - i) = rule.weights(i);
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0;
  // ascending order
  rule.nodes.reverseInPlace();
  rule.weights.reverseInPlace();
  return rule;
}

}  // namespace mudecay
