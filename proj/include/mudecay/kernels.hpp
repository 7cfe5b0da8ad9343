#pragma once

#include "mudecay/landau.hpp"
#include "mudecay/neutrino.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace mudecay {

enum class KernelFamily { GaussianProduct, CompactBump, CounterexampleIR };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// Separable kernel K(xi, p) = scale * A(s, n, p1, p3) * B(p); A vanishes above the level cap.
struct KernelSpec {
  KernelFamily family = KernelFamily::GaussianProduct;
  double cutoff = 4.0;  // Lambda, support radius of the compact bump
  double width = 1.0;   // sigma_w
  int level_cap = 0;    // N
  double scale = 1.0;

  bool is_zero() const { return scale == 0.0; }
};

void validate(const KernelSpec& spec);

// Landau-leg factor A (without scale) and momentum-leg factor B.
double landau_factor(const KernelSpec& spec, const LandauQN& xi);
double momentum_factor(const KernelSpec& spec, const Momentum& p);

Complex eval_F(const KernelSpec& spec, const LandauQN& xi2, const MomentumQN& xi4);
Complex eval_G(const KernelSpec& spec, const LandauQN& xi1, const MomentumQN& xi3);

// sum_{s in spins} sum_n  int |A|^2 dp1 dp3
double landau_norm_sq(const KernelSpec& spec, const std::vector<int>& spins = {-1, 1});
// int |B|^2 d^3p
double momentum_norm_sq(const KernelSpec& spec);
// Continuum L2 norm of the full kernel.
double l2_norm(const KernelSpec& spec, const std::vector<int>& spins = {-1, 1});

struct RefinedIntegral {
  double value = 0;
  bool divergent = false;
  int refinements = 0;
};

// int_{R^3} h(p) d^3p with dyadic radial shells toward the origin. Stops when a
// refinement changes the value by at most rel_tol; otherwise flags divergence.
RefinedIntegral radial_refined_integral(const std::function<double(const Momentum&)>& h, double outer_radius,
                                        double rel_tol = 1e-3, int max_shells = 60);

// int_{|p| <= radius} h(p) d^3p.
double ball_integral(const std::function<double(const Momentum&)>& h, double radius);

struct IrFit {
  std::vector<double> sigmas;
  std::vector<double> masses;  // (int_{|p|<=sigma} |K|^2)^{1/2}
  double exponent = 0;
  double constant_K = 0;
  double residual = 0;
};

struct HypothesisReport {
  double l2_norm_F = 0;
  double l2_norm_G = 0;
  RefinedIntegral ir_integral_i;   // int |F|^2 / |p4|^2
  RefinedIntegral ir_integral_ii;  // int |G|^2 / |p3|^2
  IrFit ir_slope_iii;              // F
  IrFit ir_slope_iv;               // G
  std::map<std::string, double> deriv_norms;
  std::map<std::string, bool> pass;

  bool all_pass() const;
};

HypothesisReport check_hypotheses(const KernelSpec& spec_F, const KernelSpec& spec_G,
                                  const std::vector<double>& sigmas, const std::vector<int>& spins = {-1, 1});

std::vector<double> default_ir_sigmas();

}  // namespace mudecay
