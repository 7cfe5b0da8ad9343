#include "mudecay/asymptotics.hpp"

#include "mudecay/errors.hpp"
#include "mudecay/kernels.hpp"
#include "mudecay/parallel.hpp"
#include "mudecay/quadrature.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace mudecay {

namespace {

constexpr double kPi = std::numbers::pi;

double smooth_bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

// Orthonormal frame (e1, e2) perpendicular to a unit axis.
std::pair<Momentum, Momentum> frame(const Momentum& axis) {
  const Momentum helper = std::abs(axis(2)) < 0.9 ? Momentum(0, 0, 1) : Momentum(1, 0, 0);
  const Momentum e1 = axis.cross(helper).normalized();
  return {e1, axis.cross(e1)};
}

}  // namespace

std::string to_string(DecayChannel c) {
  switch (c) {
    case DecayChannel::Electron: return "electron";
    case DecayChannel::MuonU: return "muon-U";
    case DecayChannel::MuonW: return "muon-W";
    case DecayChannel::AntiNuE: return "nubar";
    case DecayChannel::NuMu: return "nu";
  }
  return "?";
}

DecayChannel decay_channel_from_string(const std::string& name) {
  for (auto c : {DecayChannel::Electron, DecayChannel::MuonU, DecayChannel::MuonW, DecayChannel::AntiNuE,
                 DecayChannel::NuMu})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown decay channel '" + name + "' (electron, muon-U, muon-W, nubar, nu)");
}

bool is_landau(DecayChannel c) { return c != DecayChannel::AntiNuE && c != DecayChannel::NuMu; }

std::string to_string(Profile p) { return p == Profile::Edge ? "edge" : "bump"; }

Profile profile_from_string(const std::string& name) {
  if (name == "edge") return Profile::Edge;
  if (name == "bump") return Profile::Bump;
  throw ConfigError("unknown profile '" + name + "' (edge, bump)");
}

double profile_value(Profile p, double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  if (p == Profile::Edge) return (1 + x) * (1 - x) * (1 - x);
  return smooth_bump(x);
}

bool TestModeFunction::admissible() const {
  if (is_landau(channel)) return std::abs(center_p3) > width_p3;
  if (!(center_r - width_r > 0)) return false;
  const Momentum a = axis.normalized();
  const double to_axis = std::acos(std::min(1.0, std::abs(a(2))));  // angle to the nearer pole
  return to_axis > cap_angle;
}

double TestModeFunction::landau_value(const LandauQN& xi) const {
  if (xi.s != s || xi.n != n) return 0.0;
  return amplitude * profile_value(profile, (xi.p3 - center_p3) / width_p3) *
         smooth_bump((xi.p1 - center_p1) / width_p1);
}

double TestModeFunction::momentum_value(const Momentum& p) const {
  const double r = p.norm();
  if (r == 0) return 0.0;
  const double angle = std::acos(std::clamp(p.dot(axis.normalized()) / r, -1.0, 1.0));
  return amplitude * profile_value(profile, (r - center_r) / width_r) * smooth_bump(angle / cap_angle);
}

namespace {

struct Orders {
  int transverse, x2, azimuth, oscillatory;
};

Orders scaled(const QuadratureOrders& base, double t, double width, int doubling) {
  const int osc = base.oscillatory + static_cast<int>(std::ceil(1.2 * std::abs(t) * width));
  const int f = 1 << doubling;
  return {base.transverse * f, base.x2 * f, base.azimuth * f, osc * f};
}

double landau_channel(const ModelConfig& cfg, const TestModeFunction& f, double t, const Orders& o) {
  const bool electron = f.channel == DecayChannel::Electron;
  const bool w_leg = f.channel == DecayChannel::MuonW;
  const ParticleParams params = electron ? cfg.electron() : cfg.muon();
  const KernelSpec& kernel = electron ? cfg.spec_G : cfg.spec_F;
  if (kernel.is_zero() || f.amplitude == 0.0) return 0.0;
  if ((w_leg ? w_is_null(LandauQN{f.s, f.n, 0, 0}) : u_is_null(LandauQN{f.s, f.n, 0, 0}))) return 0.0;
  const double cross = kernel.scale * kernel.scale * momentum_norm_sq(kernel);
  const double eB = params.eB, root = std::sqrt(eB);

  const auto r1 = gauss_legendre<double>(o.transverse, f.center_p1 - f.width_p1, f.center_p1 + f.width_p1);
  const auto r3 = gauss_legendre<double>(o.oscillatory, f.center_p3 - f.width_p3, f.center_p3 + f.width_p3);
  // Hermite functions centred at +-p1/eB
  const double sign = w_leg ? -1.0 : 1.0;
  const double xc = sign * f.center_p1 / eB;
  const double half = f.width_p1 / eB + (std::sqrt(2.0 * f.n + 1) + 9.0) / root;
  const auto rx = gauss_legendre<double>(o.x2, xc - half, xc + half);

  const Eigen::Index n1 = r1.size(), n3 = r3.size(), nx = rx.size();
  // K[l][j](i1, i3) = w1 w3 f A D_{j l}(p3)
  std::array<std::array<Eigen::MatrixXd, 4>, 2> K;
  for (auto& row : K)
    for (auto& m : row) m = Eigen::MatrixXd::Zero(n1, n3);
  Eigen::VectorXcd phase(n3);
  for (Eigen::Index i3 = 0; i3 < n3; ++i3) {
    const double p3 = r3.nodes(i3);
    phase(i3) = std::polar(1.0, -t * (energy(params, f.n, p3) - params.mass));
    const LandauQN probe{f.s, f.n, 0.0, p3};
    const LandauCoefficients D = w_leg ? w_mu_coefficients(params, probe) : u_coefficients(params, probe);
    for (Eigen::Index i1 = 0; i1 < n1; ++i1) {
      const LandauQN xi{f.s, f.n, r1.nodes(i1), p3};
      const double base = r1.weights(i1) * r3.weights(i3) * f.landau_value(xi) * landau_factor(kernel, xi);
      for (int l = 0; l < 2; ++l)
        for (int j = 0; j < 4; ++j) K[l][j](i1, i3) = base * D(j, l);
    }
  }
  // H[l](ix, i1) = I_{n-1+l}(xi(x2, +-p1))
  std::array<Eigen::MatrixXd, 2> H{Eigen::MatrixXd::Zero(nx, n1), Eigen::MatrixXd::Zero(nx, n1)};
  for (Eigen::Index ix = 0; ix < nx; ++ix)
    for (Eigen::Index i1 = 0; i1 < n1; ++i1) {
      const double xi = landau_xi(eB, sign * r1.nodes(i1), rx.nodes(ix));
      const auto psi = hermite_functions<double>(f.n, xi);
      const double scale = std::pow(eB, 0.25);
      H[0](ix, i1) = f.n >= 1 ? scale * psi(f.n - 1) : 0.0;
      H[1](ix, i1) = scale * psi(f.n);
    }
  double total = 0;
  for (int j = 0; j < 4; ++j) {
    Eigen::VectorXcd inner = Eigen::VectorXcd::Zero(nx);
    for (int l = 0; l < 2; ++l) {
      if (K[l][j].isZero(0.0)) continue;
      const Eigen::VectorXcd y = K[l][j].cast<Complex>() * phase;
      inner += H[l].cast<Complex>() * y;
    }
    total += (rx.weights.array() * inner.array().abs2()).sum();
  }
  return cross * total;
}

double neutrino_channel(const ModelConfig& cfg, const TestModeFunction& f, double t, const Orders& o) {
  const bool antineutrino = f.channel == DecayChannel::AntiNuE;
  const KernelSpec& kernel = antineutrino ? cfg.spec_G : cfg.spec_F;
  if (kernel.is_zero() || f.amplitude == 0.0) return 0.0;
  const auto& spins = antineutrino ? cfg.grid_e.spins : cfg.grid_mu_minus.spins;
  const double cross = kernel.scale * kernel.scale * landau_norm_sq(kernel, spins);

  const Momentum axis = f.axis.normalized();
  const auto [e1, e2] = frame(axis);
  const auto rr = gauss_legendre<double>(o.oscillatory, std::max(0.0, f.center_r - f.width_r), f.center_r + f.width_r);
  const auto rt = gauss_legendre<double>(o.transverse, 0.0, f.cap_angle);
  const int nphi = o.azimuth;

  // angular table: weight * cap * spinor component, and the y-component of the direction
  std::vector<std::array<Complex, 4>> ang;
  std::vector<double> ny;
  for (Eigen::Index it = 0; it < rt.size(); ++it) {
    const double th = rt.nodes(it);
    const double cap = smooth_bump(th / f.cap_angle);
    for (int k = 0; k < nphi; ++k) {
      const double ph = 2 * kPi * (k + 0.5) / nphi;
      const Momentum dir = std::cos(th) * axis + std::sin(th) * (std::cos(ph) * e1 + std::sin(ph) * e2);
      const Spinor4 S = antineutrino ? spinor_w_nubar_e(dir) : spinor_u_numu(dir);
      const double w = rt.weights(it) * std::sin(th) * (2 * kPi / nphi) * cap;
      ang.push_back({w * S(0), w * S(1), w * S(2), w * S(3)});
      ny.push_back(dir(1));
    }
  }
  // radial table
  const Eigen::Index nr = rr.size();
  Eigen::VectorXcd radial(nr);
  for (Eigen::Index ir = 0; ir < nr; ++ir) {
    const double r = rr.nodes(ir);
    const double prof = f.amplitude * profile_value(f.profile, (r - f.center_r) / f.width_r);
    radial(ir) = rr.weights(ir) * r * r * prof * momentum_factor(kernel, Momentum(r, 0, 0)) * std::polar(1.0, t * r);
  }
  std::array<Complex, 4> sum{};
  for (std::size_t d = 0; d < ang.size(); ++d) {
    Complex rad = 0;
    if (f.x2 == 0.0) {
      rad = radial.sum();
    } else {
      for (Eigen::Index ir = 0; ir < nr; ++ir) rad += radial(ir) * std::polar(1.0, -rr.nodes(ir) * ny[d] * f.x2);
    }
    for (int j = 0; j < 4; ++j) sum[static_cast<std::size_t>(j)] += ang[d][static_cast<std::size_t>(j)] * rad;
  }
  double total = 0;
  for (const Complex& c : sum) total += std::norm(c);
  return cross * total;
}

double evaluate(const ModelConfig& cfg, const TestModeFunction& f, double t, const Orders& o) {
  return is_landau(f.channel) ? landau_channel(cfg, f, t, o) : neutrino_channel(cfg, f, t, o);
}

}  // namespace

DecayValue decay_integral_estimate(const ModelConfig& config, const TestModeFunction& f, double t,
                                   const QuadratureOrders& orders, double rel_tol, int max_doublings) {
  const double width = is_landau(f.channel) ? f.width_p3 : f.width_r;
  DecayValue out;
  double prev = evaluate(config, f, t, scaled(orders, t, width, 0));
  for (int d = 1; d <= max_doublings; ++d) {
    const double next = evaluate(config, f, t, scaled(orders, t, width, d));
    out.value = next;
    out.error = std::abs(next - prev);
    out.doublings = d;
    if (out.error <= rel_tol * std::abs(next)) {
      out.converged = true;
      return out;
    }
    prev = next;
  }
  return out;
}

double decay_integral(const ModelConfig& config, const TestModeFunction& f, double t, const QuadratureOrders& orders) {
  const DecayValue v = decay_integral_estimate(config, f, t, orders);
  if (!v.converged) {
    std::ostringstream msg;
    msg << "decay integral at t = " << t << " did not converge (last change " << v.error << ", value " << v.value
        << ")";
    throw ConvergenceError(msg.str());
  }
  return v.value;
}

std::vector<double> log_time_grid(double t_min, double t_max, int per_decade) {
  if (!(t_min > 0) || !(t_max > t_min) || per_decade < 1) throw ConfigError("invalid time grid");
  const double decades = std::log10(t_max / t_min);
  const int steps = std::max(1, static_cast<int>(std::lround(decades * per_decade)));
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) out.push_back(t_min * std::pow(t_max / t_min, double(i) / steps));
  return out;
}

DecayFitReport fit_decay(const ModelConfig& config, const TestModeFunction& f, const std::vector<double>& t_grid,
                         const QuadratureOrders& orders) {
  if (t_grid.size() < 3) throw ConfigError("decay fit needs at least three times");
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (!(t_grid[i] > 0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
      throw ConfigError("decay times must be positive and increasing");
  DecayFitReport rep;
  rep.channel = f.channel;
  rep.admissible = f.admissible();
  std::vector<DecayValue> values(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { values[i] = decay_integral_estimate(config, f, t_grid[i], orders); });

  double last_good = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!values[i].converged) {
      std::ostringstream msg;
      msg << "decay integral did not converge at t = " << t_grid[i] << "; largest reliable t = " << last_good;
      throw ConvergenceError(msg.str());
    }
    last_good = t_grid[i];
    rep.points.push_back({t_grid[i], values[i].value, values[i].error, values[i].error > values[i].value});
  }
  const bool positive = std::all_of(rep.points.begin(), rep.points.end(), [](const DecayPoint& p) { return p.I > 0; });
  if (!positive) {
    rep.note = "I(t) vanishes on the grid; the test function misses the kernel support";
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    rep.fit_residual = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const auto n = static_cast<Eigen::Index>(rep.points.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1;
    X(i, 1) = std::log(rep.points[static_cast<std::size_t>(i)].t);
    y(i) = std::log(rep.points[static_cast<std::size_t>(i)].I);
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  rep.fitted_exponent = beta(1);
  rep.fit_residual = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(n));
  const bool resolved = std::none_of(rep.points.begin(), rep.points.end(), [](const DecayPoint& p) { return p.underresolved; });
  rep.gate_passed = rep.fitted_exponent <= kDecayExponentGate && rep.fit_residual < kDecayResidualGate && resolved;
  rep.passed = rep.gate_passed && rep.admissible;
  if (!rep.admissible) rep.note = "test function support meets the excluded set";
  return rep;
}

Eigen::VectorXcd sample_mode_function(const Model& model, Species species, const TestModeFunction& f) {
  const auto& grid = model.grids[species];
  Eigen::VectorXcd out(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    const auto& m = grid.modes[static_cast<std::size_t>(k)];
    const double v = is_landau(species) ? f.landau_value(m.landau()) : f.momentum_value(m.momentum().p);
    out(k) = v * std::sqrt(m.weight);
  }
  return out;
}

FieldEvolution::FieldEvolution(const Model& model, const TotalHamiltonian& h, Eigen::Index dense_limit)
    : model_(model) {
  if (model.fock.dim() > dense_limit) {
    std::ostringstream msg;
    msg << "Fock dimension " << model.fock.dim() << " exceeds the dense limit " << dense_limit
        << "; restrict to fewer modes or to a charge sector";
    throw ConfigError(msg.str());
  }
  sectors_ = sector_eigensystems(model.fock, h.h.matrix, true);
}

Eigen::MatrixXcd FieldEvolution::propagator(double t) const {
  const Eigen::Index dim = model_.fock.dim();
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& blk : sectors_.blocks) {
    const Eigen::MatrixXcd& V = blk.eigenvectors;
    const Eigen::VectorXcd ph = (Complex(0, t) * blk.eigenvalues.cast<Complex>()).array().exp();
    const Eigen::MatrixXcd sub = V * ph.asDiagonal() * V.adjoint();
    for (std::size_t i = 0; i < blk.states.size(); ++i)
      for (std::size_t j = 0; j < blk.states.size(); ++j)
        U(static_cast<Eigen::Index>(blk.states[i]), static_cast<Eigen::Index>(blk.states[j])) =
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return U;
}

Eigen::VectorXd FieldEvolution::mode_energies(Species species) const {
  const auto& grid = model_.grids[species];
  Eigen::VectorXd w(grid.size());
  for (int k = 0; k < grid.size(); ++k) w(k) = mode_energy(model_.config, species, grid.modes[static_cast<std::size_t>(k)]);
  return w;
}

Eigen::MatrixXcd FieldEvolution::field(Species channel, bool dagger, const Eigen::VectorXcd& f, double t) const {
  const Eigen::VectorXd w = mode_energies(channel);
  Eigen::VectorXcd ft(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) ft(k) = std::polar(1.0, -t * w(k)) * f(k);
  const SparseOp B = field_operator(model_.fock, channel, dagger, ft).matrix;

  // U is block diagonal over charge sectors and B maps each sector into one other,
  // so conjugate block pair by block pair.
  const std::size_t nb = sectors_.blocks.size();
  std::vector<std::size_t> block_of(static_cast<std::size_t>(model_.fock.dim()));
  std::vector<Eigen::Index> local_of(block_of.size());
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t i = 0; i < sectors_.blocks[b].states.size(); ++i) {
      block_of[sectors_.blocks[b].states[i]] = b;
      local_of[sectors_.blocks[b].states[i]] = static_cast<Eigen::Index>(i);
    }
  auto block_size = [&](std::size_t b) { return static_cast<Eigen::Index>(sectors_.blocks[b].states.size()); };
  std::map<std::pair<std::size_t, std::size_t>, Eigen::MatrixXcd> pieces;
  for (Eigen::Index col = 0; col < B.outerSize(); ++col)
    for (SparseOp::InnerIterator it(B, col); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row()), c = static_cast<std::size_t>(it.col());
      auto [pos, fresh] = pieces.try_emplace({block_of[r], block_of[c]});
      if (fresh) pos->second = Eigen::MatrixXcd::Zero(block_size(block_of[r]), block_size(block_of[c]));
      pos->second(local_of[r], local_of[c]) += it.value();
    }

  std::vector<Eigen::MatrixXcd> U(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& blk = sectors_.blocks[b];
    const Eigen::VectorXcd ph = (Complex(0, t) * blk.eigenvalues.cast<Complex>()).array().exp();
    U[b] = blk.eigenvectors * ph.asDiagonal() * blk.eigenvectors.adjoint();
  }
  const Eigen::Index dim = model_.fock.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, piece] : pieces) {
    const Eigen::MatrixXcd conj = U[key.first] * piece * U[key.second].adjoint();
    const auto& rows = sectors_.blocks[key.first].states;
    const auto& cols = sectors_.blocks[key.second].states;
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows.size(); ++i)
        out(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j])) =
            conj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return out;
}

FockOperator FieldEvolution::evolved_field(Species channel, bool dagger, const Eigen::VectorXcd& f, double t) const {
  FockOperator out;
  out.matrix = field(channel, dagger, f, t).sparseView(0.0, 0.0);
  return out;
}

double FieldEvolution::increment_norm(Species channel, bool dagger, const Eigen::VectorXcd& f, double t, double s,
                                      int k) const {
  struct Level {
    double value;
    std::size_t block;
    Eigen::Index col;
  };
  std::vector<Level> levels;
  for (std::size_t b = 0; b < sectors_.blocks.size(); ++b)
    for (Eigen::Index i = 0; i < sectors_.blocks[b].eigenvalues.size(); ++i)
      levels.push_back({sectors_.blocks[b].eigenvalues(i), b, i});
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.value < b.value; });
  const auto kk = static_cast<Eigen::Index>(std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 1)), levels.size()));
  Eigen::MatrixXcd low = Eigen::MatrixXcd::Zero(model_.fock.dim(), kk);
  for (Eigen::Index c = 0; c < kk; ++c) {
    const auto& l = levels[static_cast<std::size_t>(c)];
    const auto& blk = sectors_.blocks[l.block];
    for (std::size_t i = 0; i < blk.states.size(); ++i)
      low(static_cast<Eigen::Index>(blk.states[i]), c) = blk.eigenvectors(static_cast<Eigen::Index>(i), l.col);
  }
  const Eigen::MatrixXcd diff = (field(channel, dagger, f, t) - field(channel, dagger, f, s)) * low;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(diff).singularValues()(0);
}

}  // namespace mudecay
