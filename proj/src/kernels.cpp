#include "mudecay/kernels.hpp"

#include "mudecay/errors.hpp"
#include "mudecay/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mudecay {

namespace {

constexpr double kPi = std::numbers::pi;

double bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

// Radius beyond which the family is zero or negligible.
double outer_radius(const KernelSpec& spec) {
  return spec.family == KernelFamily::CompactBump ? spec.cutoff : 10.0 * spec.width;
}

double landau_shape(const KernelSpec& spec, double p1, double p3) {
  const double r2 = p1 * p1 + p3 * p3;
  if (spec.family == KernelFamily::CompactBump) return bump(std::sqrt(r2) / spec.cutoff);
  return std::exp(-r2 / (2 * spec.width * spec.width));
}

// Fourth-order central differences.
double d1(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}
double d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

// Tensor Gauss-Legendre on [-R, R]^2.
double box_integral(const std::function<double(double, double)>& h, double radius, int nodes) {
  const auto rule = gauss_legendre<double>(nodes, -radius, radius);
  double sum = 0;
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j) sum += rule.weights(i) * rule.weights(j) * h(rule.nodes(i), rule.nodes(j));
  return sum;
}

// Angular part of a spherical shell integral between r0 and r1.
double shell_integral(const std::function<double(const Momentum&)>& h, double r0, double r1) {
  static const auto radial = gauss_legendre<double>(24);
  static const auto polar = gauss_legendre<double>(24);
  constexpr int n_phi = 48;
  const double mid = (r0 + r1) / 2, half = (r1 - r0) / 2;
  double sum = 0;
  for (int i = 0; i < radial.size(); ++i) {
    const double r = mid + half * radial.nodes(i);
    double ang = 0;
    for (int j = 0; j < polar.size(); ++j) {
      const double ct = polar.nodes(j), st = std::sqrt(1 - ct * ct);
      double ring = 0;
      for (int k = 0; k < n_phi; ++k) {
        const double phi = 2 * kPi * (k + 0.5) / n_phi;
        ring += h(Momentum(r * st * std::cos(phi), r * st * std::sin(phi), r * ct));
      }
      ang += polar.weights(j) * ring * (2 * kPi / n_phi);
    }
    sum += half * radial.weights(i) * r * r * ang;
  }
  return sum;
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::GaussianProduct: return "gaussian-product";
    case KernelFamily::CompactBump: return "compact-bump";
    case KernelFamily::CounterexampleIR: return "counterexample-ir";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian-product") return KernelFamily::GaussianProduct;
  if (name == "compact-bump") return KernelFamily::CompactBump;
  if (name == "counterexample-ir") return KernelFamily::CounterexampleIR;
  throw ConfigError("unknown kernel family '" + name + "'");
}

void validate(const KernelSpec& spec) {
  if (!(spec.cutoff > 0)) throw ConfigError("kernel cutoff must be positive");
  if (!(spec.width > 0)) throw ConfigError("kernel width must be positive");
  if (spec.level_cap < 0) throw ConfigError("kernel level cap must be >= 0");
  if (!std::isfinite(spec.scale)) throw ConfigError("kernel scale must be finite");
}

double landau_factor(const KernelSpec& spec, const LandauQN& xi) {
  if (xi.n > spec.level_cap) return 0.0;
  return landau_shape(spec, xi.p1, xi.p3);
}

double momentum_factor(const KernelSpec& spec, const Momentum& p) {
  const double r = p.norm();
  switch (spec.family) {
    case KernelFamily::GaussianProduct: return std::exp(-r * r / (2 * spec.width * spec.width));
    case KernelFamily::CompactBump: return bump(r / spec.cutoff);
    case KernelFamily::CounterexampleIR:
      if (r == 0) return std::numeric_limits<double>::infinity();
      return std::exp(-r * r / (2 * spec.width * spec.width)) * spec.width / r;
  }
  return 0.0;
}

Complex eval_F(const KernelSpec& spec, const LandauQN& xi2, const MomentumQN& xi4) {
  if (spec.is_zero()) return 0.0;
  return spec.scale * landau_factor(spec, xi2) * momentum_factor(spec, xi4.p);
}

Complex eval_G(const KernelSpec& spec, const LandauQN& xi1, const MomentumQN& xi3) {
  if (spec.is_zero()) return 0.0;
  return spec.scale * landau_factor(spec, xi1) * momentum_factor(spec, xi3.p);
}

double landau_norm_sq(const KernelSpec& spec, const std::vector<int>& spins) {
  const double radius = outer_radius(spec);
  const int nodes = spec.family == KernelFamily::CompactBump ? 128 : 96;
  const double one_level = box_integral(
      [&](double p1, double p3) {
        const double a = landau_shape(spec, p1, p3);
        return a * a;
      },
      radius, nodes);
  return static_cast<double>(spins.size()) * (spec.level_cap + 1) * one_level;
}

double momentum_norm_sq(const KernelSpec& spec) {
  const auto res = radial_refined_integral(
      [&](const Momentum& p) {
        const double b = momentum_factor(spec, p);
        return b * b;
      },
      outer_radius(spec), 1e-13, 90);
  return res.divergent ? std::numeric_limits<double>::infinity() : res.value;
}

double l2_norm(const KernelSpec& spec, const std::vector<int>& spins) {
  if (spec.is_zero()) return 0.0;
  return std::abs(spec.scale) * std::sqrt(landau_norm_sq(spec, spins) * momentum_norm_sq(spec));
}

RefinedIntegral radial_refined_integral(const std::function<double(const Momentum&)>& h, double outer_radius,
                                        double rel_tol, int max_shells) {
  RefinedIntegral out;
  // [R/2, R] first, then halve toward the origin
  double inner = outer_radius / 2;
  double value = shell_integral(h, inner, outer_radius);
  for (int k = 1; k <= max_shells; ++k) {
    const double next = value + shell_integral(h, inner / 2, inner);
    inner /= 2;
    out.refinements = k;
    const bool settled = std::abs(next - value) <= rel_tol * std::abs(next);
    value = next;
    if (settled && k >= 3) {
      out.value = value;
      return out;
    }
    if (!std::isfinite(value)) break;
  }
  out.value = value;
  out.divergent = true;
  return out;
}

double ball_integral(const std::function<double(const Momentum&)>& h, double radius) {
  const auto res = radial_refined_integral(h, radius, 1e-10, 80);
  return res.value;
}

bool HypothesisReport::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](const auto& kv) { return kv.second; });
}

std::vector<double> default_ir_sigmas() { return {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625}; }

namespace {

IrFit fit_ir(const KernelSpec& spec, const std::vector<double>& sigmas, double landau_sq) {
  IrFit fit;
  fit.sigmas = sigmas;
  for (double s : sigmas) {
    double m = 0;
    if (!spec.is_zero()) {
      const double ball = ball_integral(
          [&](const Momentum& p) {
            const double b = momentum_factor(spec, p);
            return b * b;
          },
          s);
      m = std::abs(spec.scale) * std::sqrt(landau_sq * ball);
    }
    fit.masses.push_back(m);
    fit.constant_K = std::max(fit.constant_K, m / s);
  }
  const bool zero = std::all_of(fit.masses.begin(), fit.masses.end(), [](double m) { return m == 0.0; });
  if (zero) {
    fit.exponent = std::numeric_limits<double>::infinity();
    return fit;
  }
  const auto n = static_cast<Eigen::Index>(sigmas.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1;
    X(i, 1) = std::log(sigmas[i]);
    y(i) = std::log(fit.masses[i]);
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  fit.exponent = beta(1);
  fit.residual = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

struct LandauDerivs {
  double dp3 = 0, dp3dp3 = 0, grad = 0;
};

LandauDerivs landau_derivative_norms(const KernelSpec& spec, double levels) {
  const double w2 = spec.width * spec.width;
  const double h = 1e-4 * spec.width;
  const bool analytic = spec.family != KernelFamily::CompactBump;
  auto shape = [&](double p1, double p3) { return landau_shape(spec, p1, p3); };
  auto dA3 = [&](double p1, double p3) {
    if (analytic) return -p3 / w2 * shape(p1, p3);
    return d1([&](double x) { return shape(p1, x); }, p3, h);
  };
  auto dA33 = [&](double p1, double p3) {
    if (analytic) return (p3 * p3 / (w2 * w2) - 1 / w2) * shape(p1, p3);
    return d2([&](double x) { return shape(p1, x); }, p3, h);
  };
  auto dA1 = [&](double p1, double p3) {
    if (analytic) return -p1 / w2 * shape(p1, p3);
    return d1([&](double x) { return shape(x, p3); }, p1, h);
  };
  const double R = outer_radius(spec);
  const int nodes = analytic ? 96 : 128;
  LandauDerivs out;
  out.dp3 = levels * box_integral([&](double a, double b) { return std::pow(dA3(a, b), 2); }, R, nodes);
  out.dp3dp3 = levels * box_integral([&](double a, double b) { return std::pow(dA33(a, b), 2); }, R, nodes);
  out.grad = levels * box_integral([&](double a, double b) { return std::pow(dA1(a, b), 2) + std::pow(dA3(a, b), 2); },
                                   R, nodes);
  return out;
}

RefinedIntegral momentum_mixed_derivative(const KernelSpec& spec) {
  const double w2 = spec.width * spec.width;
  const double h = 1e-4 * spec.width;
  auto mixed = [&](const Momentum& p) {
    if (spec.family == KernelFamily::GaussianProduct) return p(0) * p(2) / (w2 * w2) * momentum_factor(spec, p);
    auto along3 = [&](double x1) {
      return d1([&](double x3) { return momentum_factor(spec, Momentum(x1, p(1), x3)); }, p(2), h);
    };
    return d1(along3, p(0), h);
  };
  return radial_refined_integral([&](const Momentum& p) { return std::pow(mixed(p), 2); }, outer_radius(spec));
}

}  // namespace

HypothesisReport check_hypotheses(const KernelSpec& spec_F, const KernelSpec& spec_G,
                                  const std::vector<double>& sigmas, const std::vector<int>& spins) {
  validate(spec_F);
  validate(spec_G);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0)) throw ConfigError("IR sigmas must be positive");
    if (i > 0 && !(sigmas[i] < sigmas[i - 1])) throw ConfigError("IR sigmas must be decreasing");
  }
  if (sigmas.size() < 2) throw ConfigError("IR fit needs at least two sigmas");

  HypothesisReport rep;
  rep.l2_norm_F = l2_norm(spec_F, spins);
  rep.l2_norm_G = l2_norm(spec_G, spins);
  rep.pass["l2_F"] = std::isfinite(rep.l2_norm_F);
  rep.pass["l2_G"] = std::isfinite(rep.l2_norm_G);

  struct Leg {
    const KernelSpec& spec;
    std::string tag;
    RefinedIntegral* inverse_square;
    IrFit* fit;
  };
  const Leg legs[] = {{spec_F, "F", &rep.ir_integral_i, &rep.ir_slope_iii},
                      {spec_G, "G", &rep.ir_integral_ii, &rep.ir_slope_iv}};
  for (const auto& leg : legs) {
    const KernelSpec& s = leg.spec;
    const double levels = static_cast<double>(spins.size()) * (s.level_cap + 1);
    if (s.is_zero()) {
      *leg.inverse_square = RefinedIntegral{};
    } else {
      const double landau_sq = landau_norm_sq(s, spins);
      auto r = radial_refined_integral(
          [&](const Momentum& p) {
            const double b = momentum_factor(s, p);
            return b * b / p.squaredNorm();
          },
          outer_radius(s));
      r.value *= s.scale * s.scale * landau_sq;
      *leg.inverse_square = r;
    }
    rep.pass["ir_" + leg.tag + "_inverse_square"] = !leg.inverse_square->divergent;

    *leg.fit = fit_ir(s, sigmas, s.is_zero() ? 0.0 : landau_norm_sq(s, spins));
    rep.pass["ir_" + leg.tag + "_mass_linear"] = leg.fit->exponent >= 1.0 && std::isfinite(leg.fit->constant_K);

    const double scale_sq = s.scale * s.scale;
    double b_sq = 0, a_sq = 0;
    LandauDerivs ld;
    RefinedIntegral mixed;
    if (!s.is_zero()) {
      b_sq = momentum_norm_sq(s);
      a_sq = landau_norm_sq(s, spins);
      ld = landau_derivative_norms(s, levels);
      mixed = momentum_mixed_derivative(s);
    }
    const std::string t = leg.tag;
    rep.deriv_norms[t + "_dp3"] = scale_sq * ld.dp3 * b_sq;
    rep.deriv_norms[t + "_dp3dp3"] = scale_sq * ld.dp3dp3 * b_sq;
    rep.deriv_norms[t + "_grad_landau"] = scale_sq * ld.grad * b_sq;
    rep.deriv_norms[t + "_mixed_neutrino"] =
        mixed.divergent ? std::numeric_limits<double>::infinity() : scale_sq * a_sq * mixed.value;
    for (const char* k : {"_dp3", "_dp3dp3", "_grad_landau", "_mixed_neutrino"})
      rep.pass[t + k] = std::isfinite(rep.deriv_norms[t + k]);
  }
  return rep;
}

}  // namespace mudecay
