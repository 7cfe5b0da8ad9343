#include "mudecay/asymptotics.hpp"
#include "mudecay/bounds.hpp"
#include "mudecay/errors.hpp"
#include "mudecay/quadrature.hpp"
#include "small_models.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mudecay;

namespace {

const double kPi = std::numbers::pi;

TestModeFunction electron_test() {
  TestModeFunction f;
  f.channel = DecayChannel::Electron;
  return f;
}

TestModeFunction nubar_test() {
  TestModeFunction f;
  f.channel = DecayChannel::AntiNuE;
  return f;
}

// int dx2 |sum_i w_i f A U(x2; p_i)|^2 on a trapezoid in x2. Gaussian kernel:
// int |B|^2 d^3p = pi^{3/2} sigma^3 multiplies the result.
double electron_t0_sum(const ModelConfig& cfg, const TestModeFunction& f,
                       const std::vector<std::pair<double, double>>& pts, const std::vector<double>& w) {
  const auto& k = cfg.spec_G;
  const double cross = k.scale * k.scale * std::pow(kPi, 1.5) * std::pow(k.width, 3);
  const double eB = cfg.eB, L = (f.width_p1 + std::abs(f.center_p1)) / eB + 9 / std::sqrt(eB);
  const int nx = 120;
  const double h = 2 * L / nx;
  double total = 0;
  for (int i = 0; i <= nx; ++i) {
    const double x2 = -L + i * h;
    Spinor4 inner = Spinor4::Zero();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const LandauQN xi{f.s, f.n, pts[j].first, pts[j].second};
      inner += w[j] * f.landau_value(xi) * landau_factor(k, xi) * spinor_u(cfg.electron(), xi, x2);
    }
    total += (i == 0 || i == nx ? 0.5 : 1.0) * inner.squaredNorm();
  }
  return cross * total * h;
}

// Monte-Carlo in (p1, p3): mean and standard error over independent batches.
std::pair<double, double> electron_t0_oracle(const ModelConfig& cfg, const TestModeFunction& f, int batches, int samples) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u1(f.center_p1 - f.width_p1, f.center_p1 + f.width_p1);
  std::uniform_real_distribution<double> u3(f.center_p3 - f.width_p3, f.center_p3 + f.width_p3);
  const double area = 4 * f.width_p1 * f.width_p3;
  std::vector<double> values;
  for (int b = 0; b < batches; ++b) {
    std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(samples));
    for (auto& p : pts) p = {u1(rng), u3(rng)};
    values.push_back(electron_t0_sum(cfg, f, pts, std::vector<double>(pts.size(), area / samples)));
  }
  double mean = 0, var = 0;
  for (double v : values) mean += v / batches;
  for (double v : values) var += (v - mean) * (v - mean) / (batches - 1);
  return {mean, std::sqrt(var / batches)};
}

// Same integral on a Gauss-Legendre tensor grid in (p1, p3).
double electron_t0_tensor(const ModelConfig& cfg, const TestModeFunction& f, int n) {
  const auto g1 = gauss_legendre<double>(n, f.center_p1 - f.width_p1, f.center_p1 + f.width_p1);
  const auto g3 = gauss_legendre<double>(n, f.center_p3 - f.width_p3, f.center_p3 + f.width_p3);
  std::vector<std::pair<double, double>> pts;
  std::vector<double> w;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      pts.emplace_back(g1.nodes(a), g3.nodes(b));
      w.push_back(g1.weights(a) * g3.weights(b));
    }
  return electron_t0_sum(cfg, f, pts, w);
}

// I(0) for the antineutrino channel at x2 = 0: Monte-Carlo over a box around the cap.
std::pair<double, double> nubar_t0_oracle(const ModelConfig& cfg, const TestModeFunction& f, int samples) {
  std::mt19937_64 rng(77);
  const double R = f.center_r + f.width_r;
  std::uniform_real_distribution<double> u(-R, R);
  const double vol = std::pow(2 * R, 3);
  Spinor4 sum = Spinor4::Zero();
  Eigen::Vector4d sq = Eigen::Vector4d::Zero();
  for (int i = 0; i < samples; ++i) {
    const Momentum p(u(rng), u(rng), u(rng));
    const double v = f.momentum_value(p);
    if (v == 0) continue;
    const Spinor4 term = v * momentum_factor(cfg.spec_G, p) * spinor_w_nubar_e(p);
    sum += term;
    sq += term.cwiseAbs2();
  }
  const Spinor4 mean = sum / samples;
  const auto& k = cfg.spec_G;
  const double cross = k.scale * k.scale * 2 * kPi * k.width * k.width;  // two spins, level 0
  const double I = cross * (vol * mean).squaredNorm();
  // linearized standard error of |m|^2
  double var = 0;
  for (int j = 0; j < 4; ++j) {
    const double vj = (sq(j) / samples - std::norm(mean(j))) / samples;
    var += 4 * std::norm(mean(j)) * vj;
  }
  return {I, cross * vol * vol * std::sqrt(var)};
}

}  // namespace

TEST_CASE("profiles and admissibility") {
  CHECK(profile_value(Profile::Edge, -1.0) == 0.0);
  CHECK(profile_value(Profile::Edge, 1.0) == 0.0);
  CHECK(profile_value(Profile::Edge, 0.0) == 1.0);
  CHECK(profile_value(Profile::Bump, 0.0) == 1.0);
  CHECK(profile_value(Profile::Bump, 1.5) == 0.0);
  TestModeFunction f = electron_test();
  CHECK(f.admissible());
  f.center_p3 = 0.5;
  CHECK_FALSE(f.admissible());
  TestModeFunction g = nubar_test();
  CHECK(g.admissible());
  g.axis = Momentum(0, 0, 1);
  CHECK_FALSE(g.admissible());
  g.axis = Momentum(1, 0, 0);
  g.center_r = 0.5;
  CHECK_FALSE(g.admissible());
  for (auto c : {DecayChannel::Electron, DecayChannel::MuonU, DecayChannel::MuonW, DecayChannel::AntiNuE, DecayChannel::NuMu})
    CHECK(decay_channel_from_string(to_string(c)) == c);
}

TEST_CASE("zero test function gives zero") {
  const ModelConfig cfg;
  for (auto c : {DecayChannel::Electron, DecayChannel::MuonU, DecayChannel::MuonW, DecayChannel::AntiNuE, DecayChannel::NuMu}) {
    TestModeFunction f;
    f.channel = c;
    f.amplitude = 0;
    CHECK(decay_integral(cfg, f, 13.0) == 0.0);
  }
}

TEST_CASE("I(0) against a Monte-Carlo oracle: electron channel") {
  const ModelConfig cfg;
  const TestModeFunction f = electron_test();
  const double I0 = decay_integral(cfg, f, 0.0);
  const auto [mc, se] = electron_t0_oracle(cfg, f, 8, 20000);
  CHECK(I0 > 0);
  CHECK(se < 0.05 * I0);
  CHECK(std::abs(I0 - mc) <= 3 * se);
}

TEST_CASE("I(0) against a tensor Gauss-Legendre oracle: electron channel") {
  const ModelConfig cfg;
  for (int s : {-1, 1}) {
    TestModeFunction f = electron_test();
    f.s = s;
    f.n = s == 1 ? 1 : 0;
    CHECK(decay_integral(cfg, f, 0.0) == doctest::Approx(electron_t0_tensor(cfg, f, 60)).epsilon(1e-8));
  }
}

TEST_CASE("I(0) against a Monte-Carlo oracle: antineutrino channel") {
  const ModelConfig cfg;
  const TestModeFunction f = nubar_test();
  const double I0 = decay_integral(cfg, f, 0.0);
  const auto [mc, se] = nubar_t0_oracle(cfg, f, 400000);
  CHECK(I0 > 0);
  CHECK(std::abs(I0 - mc) <= 3 * se + 1e-3 * I0);
}

TEST_CASE("I(t) = I(-t) for real test functions and kernels") {
  const ModelConfig cfg;
  for (auto c : {DecayChannel::Electron, DecayChannel::MuonU, DecayChannel::AntiNuE, DecayChannel::NuMu}) {
    TestModeFunction f;
    f.channel = c;
    for (double t : {3.0, 17.0}) {
      const double a = decay_integral(cfg, f, t), b = decay_integral(cfg, f, -t);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("non-convergence is reported") {
  const ModelConfig cfg;
  const DecayValue v = decay_integral_estimate(cfg, electron_test(), 80.0, {4, 4, 4, 2}, 1e-14, 1);
  CHECK_FALSE(v.converged);
  CHECK_THROWS_AS(fit_decay(cfg, electron_test(), {10, 20, 40}, {2, 2, 2, 2}), ConvergenceError);
}

TEST_CASE("time grid") {
  const auto t = log_time_grid(10, 100, 12);
  CHECK(t.size() == 13);
  CHECK(t.front() == doctest::Approx(10));
  CHECK(t.back() == doctest::Approx(100));
  CHECK_THROWS(log_time_grid(0, 10, 5));
}

TEST_CASE("electron channel decays as 1/t^4; support across p3 = 0 does not") {
  const ModelConfig cfg;
  const auto times = log_time_grid(10, 100, 12);
  const DecayFitReport good = fit_decay(cfg, electron_test(), times);
  CHECK(good.admissible);
  CHECK(good.fitted_exponent <= kDecayExponentGate);
  CHECK(good.fitted_exponent == doctest::Approx(-4.0).epsilon(0.1));
  CHECK(good.fit_residual < kDecayResidualGate);
  CHECK(good.passed);
  TestModeFunction bad = electron_test();
  bad.center_p3 = 0.0;
  const DecayFitReport control = fit_decay(cfg, bad, times);
  CHECK_FALSE(control.admissible);
  CHECK_FALSE(control.gate_passed);
  CHECK_FALSE(control.passed);
}

TEST_CASE("antineutrino channel decays as 1/t^4") {
  const ModelConfig cfg;
  const DecayFitReport r = fit_decay(cfg, nubar_test(), log_time_grid(10, 100, 12));
  CHECK(r.fitted_exponent <= kDecayExponentGate);
  CHECK(r.fit_residual < kDecayResidualGate);
  CHECK(r.passed);
}

TEST_CASE("neutrino channel decays as 1/t^4") {
  const ModelConfig cfg;
  TestModeFunction f;
  f.channel = DecayChannel::NuMu;
  const DecayFitReport r = fit_decay(cfg, f, log_time_grid(10, 100, 6));
  INFO("exponent " << r.fitted_exponent << " residual " << r.fit_residual);
  CHECK(r.passed);
}

// The muon is heavier, so dE/dp3 = p3/E is smaller and the 1/t^4 tail sets in later
// than for the electron: [10, 100] is still pre-asymptotic (about -3.68).
TEST_CASE("muon channels decay as 1/t^4 once past the pre-asymptotic window") {
  const ModelConfig cfg;
  for (auto c : {DecayChannel::MuonU, DecayChannel::MuonW}) {
    TestModeFunction f;
    f.channel = c;
    if (c == DecayChannel::MuonW) f.s = 1;
    const DecayFitReport early = fit_decay(cfg, f, log_time_grid(10, 100, 6));
    const DecayFitReport mid = fit_decay(cfg, f, log_time_grid(30, 300, 6));
    const DecayFitReport late = fit_decay(cfg, f, log_time_grid(100, 1000, 6));
    INFO(to_string(c) << " exponents " << early.fitted_exponent << " " << mid.fitted_exponent << " " << late.fitted_exponent);
    CHECK(mid.passed);
    CHECK(late.passed);
    CHECK(std::abs(late.fitted_exponent + 4) < std::abs(mid.fitted_exponent + 4));
    CHECK(std::abs(mid.fitted_exponent + 4) < std::abs(early.fitted_exponent + 4));
    CHECK(late.fitted_exponent == doctest::Approx(-4.0).epsilon(0.01));
  }
}

namespace {

struct Evolution {
  Model model;
  VertexTable table;
  TotalHamiltonian h;
  Evolution(const ModelConfig& c, double g_over_g0)
      : model(make_model(c)), table(build_vertex_table(model)),
        h(assemble_total(model, table, g_over_g0 * compute_bounds(model).g0)) {}
};

Eigen::VectorXcd random_amplitudes(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXcd f(n);
  for (int i = 0; i < n; ++i) f(i) = Complex(d(rng), d(rng));
  return f;
}

// Largest singular value by power iteration on B^+ B. For a fermionic field B^+ B is
// ||f||^2 times a projector, so a few steps settle it.
double top_singular_value(const Eigen::MatrixXcd& B) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(B.cols()).normalized();
  double sigma = 0;
  for (int i = 0; i < 30; ++i) {
    v = B.adjoint() * (B * v);
    const double n = v.norm();
    if (n == 0) break;
    v /= n;
    sigma = (B * v).norm();
  }
  return sigma;
}

}  // namespace

TEST_CASE("evolved fields: t = 0, free limit, norm preservation") {
  const Evolution free(ten_mode_config(), 0.0);
  const FieldEvolution ev0(free.model, free.h);
  const Evolution inter(ten_mode_config(), 0.1);
  const FieldEvolution ev(inter.model, inter.h);
  for (Species s : kAllSpecies) {
    const Eigen::VectorXcd f = random_amplitudes(free.model.fock.count(s), 10 + static_cast<int>(s));
    for (bool dagger : {false, true}) {
      const Eigen::MatrixXcd plain = Eigen::MatrixXcd(field_operator(free.model.fock, s, dagger, f).matrix);
      CHECK((ev.field(s, dagger, f, 0.0) - plain).cwiseAbs().maxCoeff() <= 1e-13);
      CHECK((ev0.field(s, dagger, f, 4.5) - plain).cwiseAbs().maxCoeff() <= 1e-12);
      for (double t : {0.0, 1.5, 30.0}) {
        const Eigen::MatrixXcd bt = ev.field(s, dagger, f, t);
        const double top = top_singular_value(bt);
        CHECK(top == doctest::Approx(f.norm()).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("free pull-through: e^{itH0} b(f) e^{-itH0} = b(e^{it omega} f)") {
  const Evolution free(ten_mode_config(), 0.0);
  const FieldEvolution ev(free.model, free.h);
  for (Species s : {Species::Electron, Species::AntiNuE}) {
    const Eigen::VectorXcd f = random_amplitudes(free.model.fock.count(s), 3);
    const Eigen::VectorXd w = ev.mode_energies(s);
    const double t = 2.3;
    Eigen::VectorXcd ft(f.size());
    for (Eigen::Index k = 0; k < f.size(); ++k) ft(k) = std::polar(1.0, t * w(k)) * f(k);
    const Eigen::MatrixXcd U = ev.propagator(t);
    const Eigen::MatrixXcd lhs = U * Eigen::MatrixXcd(field_operator(free.model.fock, s, false, f).matrix) * U.adjoint();
    const Eigen::MatrixXcd rhs = Eigen::MatrixXcd(field_operator(free.model.fock, s, false, ft).matrix);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("time derivative of the evolved field matches the commutator") {
  const Evolution inter(ten_mode_config(), 0.1);
  const FieldEvolution ev(inter.model, inter.h);
  const Species s = Species::Electron;
  const Eigen::VectorXcd f = random_amplitudes(inter.model.fock.count(s), 5);
  const Eigen::Index dim = inter.model.fock.dim();
  const Eigen::VectorXcd phi = Eigen::VectorXcd::Random(dim).normalized();
  const Eigen::VectorXcd psi = Eigen::VectorXcd::Random(dim).normalized();
  const double t = 1.7, dt = 1e-3;
  const Complex numeric = (phi.dot(ev.field(s, false, f, t + dt) * psi) - phi.dot(ev.field(s, false, f, t - dt) * psi)) / (2 * dt);
  const Eigen::VectorXd w = ev.mode_energies(s);
  Eigen::VectorXcd ft(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) ft(k) = std::polar(1.0, -t * w(k)) * f(k);
  const Eigen::MatrixXcd U = ev.propagator(t);
  const Eigen::MatrixXcd comm = Eigen::MatrixXcd(commutator(inter.h.hi.matrix, field_operator(inter.model.fock, s, false, ft).matrix));
  const Complex analytic = Complex(0, inter.h.g) * phi.dot(U * comm * U.adjoint() * psi);
  CHECK(std::abs(numeric - analytic) <= 1e-6 * std::max(1.0, std::abs(analytic)));
  CHECK(std::abs(analytic) > 0);
}

TEST_CASE("increment norms and the dense limit") {
  const Evolution inter(ten_mode_config(), 0.1);
  const FieldEvolution ev(inter.model, inter.h);
  const Eigen::VectorXcd f = random_amplitudes(inter.model.fock.count(Species::NuMu), 2);
  CHECK(ev.increment_norm(Species::NuMu, true, f, 3.0, 3.0, 4) <= 1e-13);
  const double inc = ev.increment_norm(Species::NuMu, true, f, 0.0, 10.0, 4);
  CHECK(inc > 0);
  CHECK(inc <= 2 * f.norm() + 1e-12);
  const FockOperator bt = ev.evolved_field(Species::NuMu, true, f, 2.0);
  CHECK(bt.dim() == inter.model.fock.dim());
  const Model big = make_model(ModelConfig{});
  const TotalHamiltonian h0 = assemble_total(big, build_vertex_table(big), 0.0);
  CHECK_THROWS_AS(FieldEvolution(big, h0), ConfigError);
}

TEST_CASE("sampled test functions carry sqrt weights") {
  const Model m = make_model(ModelConfig{});
  TestModeFunction f = electron_test();
  f.center_p3 = 0.6;
  f.width_p3 = 0.5;
  const Eigen::VectorXcd v = sample_mode_function(m, Species::Electron, f);
  for (int k = 0; k < m.grids[Species::Electron].size(); ++k) {
    const auto& mode = m.grids[Species::Electron].modes[static_cast<std::size_t>(k)];
    CHECK(v(k) == Complex(f.landau_value(mode.landau()) * std::sqrt(mode.weight)));
  }
}
