#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace mudecay {

using Complex = std::complex<double>;
using Spinor4 = Eigen::Vector4cd;

// Dirac matrices in the standard representation, metric diag(+1,-1,-1,-1).
template <typename Scalar>
struct GammaSet {
  using Matrix = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

  std::array<Matrix, 4> gamma;
  Matrix gamma5;
  std::array<Scalar, 4> metric{1, -1, -1, -1};

  static GammaSet standard() {
    using C = std::complex<Scalar>;
    const C one(1), I(0, 1);
    GammaSet g;
    for (auto& m : g.gamma) m.setZero();
    g.gamma[0].diagonal() << one, one, -one, -one;
    // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
    Eigen::Matrix<C, 2, 2> s1, s2, s3;
    s1 << 0, one, one, 0;
    s2 << 0, -I, I, 0;
    s3 << one, 0, 0, -one;
    const std::array<Eigen::Matrix<C, 2, 2>, 3> sigma{s1, s2, s3};
    for (int k = 0; k < 3; ++k) {
      g.gamma[k + 1].template topRightCorner<2, 2>() = sigma[k];
      g.gamma[k + 1].template bottomLeftCorner<2, 2>() = -sigma[k];
    }
    g.gamma5 = I * g.gamma[0] * g.gamma[1] * g.gamma[2] * g.gamma[3];
    return g;
  }

  // gamma^0 gamma^alpha (1 - gamma5), the matrix sandwiched in each V-A current.
  Matrix current(int alpha) const {
    return gamma[0] * gamma[alpha] * (Matrix::Identity() - gamma5);
  }
};

const GammaSet<double>& gammas();

// sum_alpha eta_{alpha alpha} (a^+ g0 g^alpha (1-g5) b)(c^+ g0 g^alpha (1-g5) d)
template <typename Scalar>
std::complex<Scalar> vertex_contract(const Eigen::Matrix<std::complex<Scalar>, 4, 1>& a,
                                     const Eigen::Matrix<std::complex<Scalar>, 4, 1>& b,
                                     const Eigen::Matrix<std::complex<Scalar>, 4, 1>& c,
                                     const Eigen::Matrix<std::complex<Scalar>, 4, 1>& d) {
  static const GammaSet<Scalar> g = GammaSet<Scalar>::standard();
  static const std::array<typename GammaSet<Scalar>::Matrix, 4> cur{g.current(0), g.current(1),
                                                                    g.current(2), g.current(3)};
  std::complex<Scalar> sum(0);
  for (int alpha = 0; alpha < 4; ++alpha)
    sum += g.metric[alpha] * a.dot(cur[alpha] * b) * c.dot(cur[alpha] * d);
  return sum;
}

inline Complex vertex_contract(const Spinor4& a, const Spinor4& b, const Spinor4& c,
                               const Spinor4& d) {
  return vertex_contract<double>(a, b, c, d);
}

// Largest singular value.
double operator_norm(const Eigen::Matrix4cd& m);

// Sum over alpha of ||g0 g_alpha (1-g5)|| * ||g0 g^alpha (1-g5)||.
double c_constant();

}  // namespace mudecay
