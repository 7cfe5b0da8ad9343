#include "mudecay/dirac.hpp"

#include <Eigen/SVD>

namespace mudecay {

const GammaSet<double>& gammas() {
  static const GammaSet<double> g = GammaSet<double>::standard();
  return g;
}

double operator_norm(const Eigen::Matrix4cd& m) {
  return Eigen::JacobiSVD<Eigen::Matrix4cd>(m).singularValues()(0);
}

double c_constant() {
  const auto& g = gammas();
  double c = 0;
  for (int alpha = 0; alpha < 4; ++alpha) {
    const Eigen::Matrix4cd upper = g.current(alpha);
    // lowering the index only rescales by the metric sign
    const Eigen::Matrix4cd lower = g.metric[alpha] * upper;
    c += operator_norm(lower) * operator_norm(upper);
  }
  return c;
}

}  // namespace mudecay
