#pragma once

#include "mudecay/hamiltonian.hpp"
#include "mudecay/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mudecay {

enum class DecayChannel { Electron, MuonU, MuonW, AntiNuE, NuMu };

std::string to_string(DecayChannel channel);
DecayChannel decay_channel_from_string(const std::string& name);
bool is_landau(DecayChannel channel);

// Profile along the oscillating coordinate (p3, or |p| for neutrinos) with x in [-1, 1]:
// Edge = (1+x)(1-x)^2 (vanishes linearly at the lower end, quadratically at the upper end),
// Bump = exp(1 - 1/(1-x^2)).
enum class Profile { Edge, Bump };

std::string to_string(Profile profile);
Profile profile_from_string(const std::string& name);
double profile_value(Profile profile, double x);

// Test mode function. Landau channels: level (s, n), support centre +- half widths in (p1, p3);
// the transverse p1 factor is always a smooth bump. Neutrino channels: radial centre +- half
// width in |p| and a smooth angular cap of the given radius around `axis`.
struct TestModeFunction {
  DecayChannel channel = DecayChannel::Electron;
  Profile profile = Profile::Edge;
  double amplitude = 1.0;
  int s = -1;
  int n = 0;
  double center_p1 = 0.0;
  double center_p3 = 2.0;
  double width_p1 = 1.0;
  double width_p3 = 1.0;
  double center_r = 2.0;
  double width_r = 1.0;
  Momentum axis = Momentum(1.0, 0.0, 0.0);
  double cap_angle = 0.6;
  double x2 = 0.0;  // fixed transverse coordinate for the neutrino channels

  // Support avoids p3 = 0 (Landau) or the p3 axis and the origin (neutrino).
  bool admissible() const;
  double landau_value(const LandauQN& xi) const;
  double momentum_value(const Momentum& p) const;
};

struct QuadratureOrders {
  int transverse = 24;  // p1 or polar-angle nodes
  int x2 = 64;          // x2 nodes (Landau channels)
  int azimuth = 48;     // neutrino azimuth nodes
  int oscillatory = 48;  // base nodes along p3 or |p|, increased with t
};

struct DecayValue {
  double value = 0;
  double error = 0;  // |I(2n) - I(n)| at the accepted order
  int doublings = 0;
  bool converged = false;
};

// I(t) with adaptive node doubling; never throws on non-convergence.
DecayValue decay_integral_estimate(const ModelConfig& config, const TestModeFunction& f, double t,
                                   const QuadratureOrders& orders = {}, double rel_tol = 1e-4, int max_doublings = 4);

// I(t); throws ConvergenceError when doubling changes the value by more than 1e-4 relative.
double decay_integral(const ModelConfig& config, const TestModeFunction& f, double t,
                      const QuadratureOrders& orders = {});

struct DecayPoint {
  double t = 0;
  double I = 0;
  double error = 0;
  bool underresolved = false;  // quadrature error exceeds I(t)
};

struct DecayFitReport {
  DecayChannel channel = DecayChannel::Electron;
  bool admissible = true;
  std::vector<DecayPoint> points;
  double fitted_exponent = 0;
  double fit_residual = 0;
  bool gate_passed = false;  // exponent and residual gates, resolved points
  bool passed = false;       // gate_passed and admissible support
  std::string note;
};

// Log-spaced times in [t_min, t_max], per_decade points per decade, endpoints included.
std::vector<double> log_time_grid(double t_min, double t_max, int per_decade);

DecayFitReport fit_decay(const ModelConfig& config, const TestModeFunction& f, const std::vector<double>& t_grid,
                         const QuadratureOrders& orders = {});

inline constexpr double kDecayExponentGate = -3.7;
inline constexpr double kDecayResidualGate = 0.1;

// Discrete test-function amplitudes on a species grid: f_k = f(xi_k) sqrt(w_k).
Eigen::VectorXcd sample_mode_function(const Model& model, Species species, const TestModeFunction& f);

// Heisenberg-picture fields b_t(f) = e^{itH} b(f_t) e^{-itH}, f_t = e^{-it omega} f, from
// the block eigensystems of H. Dense; refuses spaces above dense_limit.
class FieldEvolution {
 public:
  FieldEvolution(const Model& model, const TotalHamiltonian& h, Eigen::Index dense_limit = 1024);

  Eigen::MatrixXcd propagator(double t) const;  // e^{itH}
  Eigen::MatrixXcd field(Species channel, bool dagger, const Eigen::VectorXcd& f, double t) const;
  FockOperator evolved_field(Species channel, bool dagger, const Eigen::VectorXcd& f, double t) const;
  // sup over unit psi in the span of the k lowest eigenvectors of ||(b_t - b_s) psi||
  double increment_norm(Species channel, bool dagger, const Eigen::VectorXcd& f, double t, double s, int k) const;
  Eigen::VectorXd mode_energies(Species species) const;
  const SectorDecomposition& sectors() const { return sectors_; }

 private:
  const Model& model_;
  SectorDecomposition sectors_;
};

}  // namespace mudecay
