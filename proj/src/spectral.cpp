#include "mudecay/spectral.hpp"

#include "mudecay/bounds.hpp"
#include "mudecay/errors.hpp"
#include "mudecay/landau.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mudecay {

namespace {

void require_hermitian(const SparseOp& H) {
  if (H.rows() != H.cols()) throw InvariantError("hermitian", "operator is not square");
  const double tol = 1e-12 * std::max(1.0, max_abs_entry(H));
  if (!is_hermitian(H, tol)) throw InvariantError("hermitian", "operator differs from its adjoint");
}

double residual(const SparseOp& H, const Eigen::VectorXcd& v, double lambda) {
  return (H * v - lambda * v).norm() / (1 + std::abs(lambda));
}

Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v.normalized();
}

// Two passes of classical Gram-Schmidt against the columns of Q.
void project_out(Eigen::VectorXcd& w, const Eigen::MatrixXcd& Q, Eigen::Index cols) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXcd c = Q.leftCols(cols).adjoint() * w;
    w -= Q.leftCols(cols) * c;
  }
}

Eigenpairs krylov(const SparseOp& H, int k, std::uint64_t seed) {
  const Eigen::Index n = H.rows();
  const double scale = std::max(1.0, max_abs_entry(H));
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd locked(n, k);
  std::vector<double> locked_values;
  Eigenpairs out;
  Eigen::VectorXcd start = random_vector(n, rng);
  const int max_cycles = 200 * k + 200;
  for (int cycle = 0; cycle < max_cycles && static_cast<int>(locked_values.size()) < k; ++cycle) {
    out.iterations = cycle + 1;
    const auto nl = static_cast<Eigen::Index>(locked_values.size());
    const Eigen::Index m = std::min<Eigen::Index>(n - nl, std::max<Eigen::Index>(2 * k + 30, 80));
    Eigen::VectorXcd v = start;
    project_out(v, locked, nl);
    if (v.norm() < 1e-8) {
      v = random_vector(n, rng);
      project_out(v, locked, nl);
    }
    v.normalize();
    Eigen::MatrixXcd V(n, m);
    Eigen::VectorXd alpha(m), beta(m);
    Eigen::Index used = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      V.col(j) = v;
      Eigen::VectorXcd w = H * v;
      alpha(j) = v.dot(w).real();
      project_out(w, V, j + 1);
      project_out(w, locked, nl);
      beta(j) = w.norm();
      if (beta(j) < 1e-13 * scale) {
        used = j + 1;
        beta(j) = 0;
        break;
      }
      v = w / beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(alpha.head(used), beta.head(std::max<Eigen::Index>(used - 1, 0)),
                               Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()(0);
    Eigen::VectorXcd x = V.leftCols(used) * tri.eigenvectors().col(0).cast<Complex>();
    x.normalize();
    const double res = residual(H, x, theta);
    if (res <= 1e-10) {
      locked.col(nl) = x;
      locked_values.push_back(theta);
      start = used > 1 ? Eigen::VectorXcd(V.leftCols(used) * tri.eigenvectors().col(1).cast<Complex>())
                       : random_vector(n, rng);
    } else {
      start = x;
    }
  }
  if (static_cast<int>(locked_values.size()) < k) {
    std::ostringstream msg;
    msg << "Lanczos converged " << locked_values.size() << " of " << k << " eigenpairs after " << out.iterations
        << " restarts";
    throw ConvergenceError(msg.str());
  }
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return locked_values[a] < locked_values[b]; });
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values(i) = locked_values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    out.vectors.col(i) = locked.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

Eigenpairs eigensolve(const FockOperator& H, int k, SolverKind kind, std::uint64_t seed) {
  const SparseOp& A = H.matrix;
  require_hermitian(A);
  if (k < 1 || k > A.rows()) throw std::invalid_argument("eigensolve: k must be in [1, dim]");
  Eigenpairs out;
  if (kind == SolverKind::Dense) {
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(A);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense Hermitian eigensolver failed");
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
  } else {
    out = krylov(A, k, seed);
  }
  for (int i = 0; i < k; ++i) out.max_residual = std::max(out.max_residual, residual(A, out.vectors.col(i), out.values(i)));
  if (out.max_residual > 1e-9) {
    std::ostringstream msg;
    msg << "eigenvector residual " << out.max_residual << " above 1e-9";
    throw ConvergenceError(msg.str());
  }
  return out;
}

Eigen::VectorXd dense_eigenvalues(const SparseOp& H) {
  require_hermitian(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(H), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense Hermitian eigensolver failed");
  return es.eigenvalues();
}

std::map<Charges, std::vector<State>> charge_sectors(const FockSpace& fock) {
  std::map<Charges, std::vector<State>> out;
  for (State st = 0; st < static_cast<State>(fock.dim()); ++st) out[fock.charges(st)].push_back(st);
  return out;
}

SectorDecomposition sector_eigensystems(const FockSpace& fock, const SparseOp& H, bool vectors) {
  require_hermitian(H);
  const auto sectors = charge_sectors(fock);
  const auto dim = static_cast<std::size_t>(fock.dim());
  std::vector<int> block_of(dim), pos(dim);
  SectorDecomposition out;
  for (const auto& [charges, states] : sectors) {
    const int b = static_cast<int>(out.blocks.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      block_of[states[i]] = b;
      pos[states[i]] = static_cast<int>(i);
    }
    out.blocks.push_back({charges, states, {}, {}});
  }
  std::vector<Eigen::MatrixXcd> dense(out.blocks.size());
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    const auto d = static_cast<Eigen::Index>(out.blocks[b].states.size());
    dense[b] = Eigen::MatrixXcd::Zero(d, d);
  }
  for (Eigen::Index c = 0; c < H.outerSize(); ++c)
    for (SparseOp::InnerIterator it(H, c); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row()), cc = static_cast<std::size_t>(it.col());
      if (block_of[r] != block_of[cc]) {
        out.off_block_max = std::max(out.off_block_max, std::abs(it.value()));
        continue;
      }
      dense[static_cast<std::size_t>(block_of[r])](pos[r], pos[cc]) = it.value();
    }
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense[b], vectors ? Eigen::ComputeEigenvectors
                                                                        : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("sector eigensolver failed");
    out.blocks[b].eigenvalues = es.eigenvalues();
    if (vectors) out.blocks[b].eigenvectors = es.eigenvectors();
  }
  return out;
}

Eigen::VectorXcd evolve(const SectorDecomposition& sectors, const Eigen::VectorXcd& psi, double t) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& blk : sectors.blocks) {
    if (blk.eigenvectors.size() == 0) throw std::invalid_argument("evolve needs sector eigenvectors");
    const auto d = static_cast<Eigen::Index>(blk.states.size());
    Eigen::VectorXcd sub(d);
    for (Eigen::Index i = 0; i < d; ++i) sub(i) = psi(static_cast<Eigen::Index>(blk.states[i]));
    Eigen::VectorXcd c = blk.eigenvectors.adjoint() * sub;
    for (Eigen::Index i = 0; i < d; ++i) c(i) *= std::polar(1.0, -t * blk.eigenvalues(i));
    sub = blk.eigenvectors * c;
    for (Eigen::Index i = 0; i < d; ++i) out(static_cast<Eigen::Index>(blk.states[i])) = sub(i);
  }
  return out;
}

std::vector<SectorSpectrum> sectored_solve(const Model& model, const SparseOp& H) {
  const auto dec = sector_eigensystems(model.fock, H, false);
  const double tol = 1e-12 * std::max(1.0, max_abs_entry(H));
  if (dec.off_block_max > tol) {
    std::ostringstream msg;
    msg << "H couples different charge sectors (max entry " << dec.off_block_max << ")";
    throw InvariantError("charge_conservation", msg.str());
  }
  std::vector<SectorSpectrum> out;
  for (const auto& blk : dec.blocks)
    out.push_back({blk.charges, static_cast<int>(blk.states.size()),
                   std::vector<double>(blk.eigenvalues.data(), blk.eigenvalues.data() + blk.eigenvalues.size())});
  return out;
}

double sector_union_mismatch(const std::vector<SectorSpectrum>& sectors, const Eigen::VectorXd& full) {
  std::vector<double> merged;
  for (const auto& s : sectors) merged.insert(merged.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  if (static_cast<Eigen::Index>(merged.size()) != full.size()) return std::numeric_limits<double>::infinity();
  std::sort(merged.begin(), merged.end());
  double mx = 0;
  for (std::size_t i = 0; i < merged.size(); ++i)
    mx = std::max(mx, std::abs(merged[i] - full(static_cast<Eigen::Index>(i))));
  return mx;
}

namespace {

// <x, H0 x> + g <x, H_I x> for unit x, accumulated in extended precision.
double split_rayleigh_quotient(const SparseOp& h0, const SparseOp& hi, double g, const Eigen::VectorXcd& x) {
  const Eigen::VectorXcd y0 = h0 * x, yi = hi * x;
  long double e0 = 0, ei = 0, nn = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const std::complex<long double> xc(x(i).real(), -x(i).imag());
    e0 += (xc * std::complex<long double>(y0(i).real(), y0(i).imag())).real();
    ei += (xc * std::complex<long double>(yi(i).real(), yi(i).imag())).real();
    nn += std::norm(std::complex<long double>(x(i).real(), x(i).imag()));
  }
  return static_cast<double>((e0 + static_cast<long double>(g) * ei) / nn);
}

Eigen::MatrixXcd extract_block(const SparseOp& H, const std::vector<State>& states) {
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(H.rows()), -1);
  for (std::size_t i = 0; i < states.size(); ++i) pos[states[i]] = static_cast<Eigen::Index>(i);
  const auto d = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (State c : states)
    for (SparseOp::InnerIterator it(H, static_cast<Eigen::Index>(c)); it; ++it)
      if (pos[static_cast<std::size_t>(it.row())] >= 0) out(pos[static_cast<std::size_t>(it.row())], pos[c]) = it.value();
  return out;
}

int max_landau_level(const ModelConfig& cfg) {
  return std::max({cfg.grid_e.n_levels, cfg.grid_mu_minus.n_levels, cfg.grid_mu_plus.n_levels}) - 1;
}

}  // namespace

SpectralReport ground_state_report(const Model& model, const VertexTable& table, double g, int k_low) {
  const TotalHamiltonian th = assemble_total(model, table, g);
  SpectralReport rep;
  rep.g = g;
  rep.warnings = th.warnings;
  const SectorDecomposition dec = sector_eigensystems(model.fock, th.h.matrix, true);
  if (dec.off_block_max > 1e-12 * std::max(1.0, max_abs_entry(th.h.matrix)))
    throw InvariantError("charge_conservation", "H couples different charge sectors");

  struct Level {
    double value;
    std::size_t block;
    Eigen::Index col;
  };
  std::vector<Level> levels;
  for (std::size_t b = 0; b < dec.blocks.size(); ++b)
    for (Eigen::Index i = 0; i < dec.blocks[b].eigenvalues.size(); ++i)
      levels.push_back({dec.blocks[b].eigenvalues(i), b, i});
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.value < b.value; });

  auto embed = [&](const Level& l) {
    const auto& blk = dec.blocks[l.block];
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(model.fock.dim());
    for (std::size_t i = 0; i < blk.states.size(); ++i)
      v(static_cast<Eigen::Index>(blk.states[i])) = blk.eigenvectors(static_cast<Eigen::Index>(i), l.col);
    return v;
  };

  const Eigen::VectorXcd ground = embed(levels.front());
  rep.E = split_rayleigh_quotient(th.h0.matrix, th.hi.matrix, g, ground);
  rep.ground_charges = dec.blocks[levels.front().block].charges;
  rep.vacuum_overlap = std::min(1.0, std::abs(ground(0)));
  rep.gap = levels.size() > 1 ? levels[1].value - levels[0].value : std::numeric_limits<double>::infinity();
  rep.unique = rep.gap > 10 * model.config.tol.residual_tol * (1 + std::abs(rep.E));

  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(k_low, 1)), levels.size());
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::VectorXcd v = embed(levels[i]);
    rep.max_residual = std::max(rep.max_residual, residual(th.h.matrix, v, levels[i].value));
    rep.low_spectrum.push_back({levels[i].value, dec.blocks[levels[i].block].charges, std::abs(v(0))});
  }
  if (rep.max_residual > model.config.tol.residual_tol)
    throw ConvergenceError("ground-state residual above tolerance");
  // report the refined value in the table too
  rep.low_spectrum.front().eigenvalue = rep.E;

  rep.thresholds = thresholds(model.config.electron(), model.config.muon(), max_landau_level(model.config));

  const double top = levels.back().value;
  constexpr int bins = 20;
  const double width = (top - rep.E) / bins;
  std::vector<int> counts(bins, 0);
  for (const auto& l : levels) {
    int b = width > 0 ? static_cast<int>((l.value - rep.E) / width) : 0;
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
  }
  for (int b = 0; b < bins; ++b) rep.density_of_states.emplace_back(rep.E + (b + 1) * width, counts[b]);
  return rep;
}

double second_order_coefficient(const Model& model, const FockOperator& h0, const FockOperator& hi) {
  (void)model;
  const Eigen::VectorXd diag = h0.matrix.diagonal().real();
  double s2 = 0;
  for (SparseOp::InnerIterator it(hi.matrix, 0); it; ++it) {
    if (it.row() == 0) continue;
    s2 += std::norm(it.value()) / diag(it.row());
  }
  return s2;
}

PerturbationCheck perturbation_scaling(const Model& model, const VertexTable& table, const std::vector<double>& couplings) {
  if (couplings.size() < 2) throw ConfigError("perturbation fit needs at least two couplings");
  const FockOperator h0 = assemble_h0(model);
  const FockOperator hi = assemble_hi(model, table);
  PerturbationCheck out;
  out.couplings = couplings;
  out.S2 = second_order_coefficient(model, h0, hi);

  // the ground state stays in the vacuum sector for small g
  const auto sectors = charge_sectors(model.fock);
  const auto& states = sectors.at(Charges{0, 0, 0});
  const Eigen::MatrixXcd b0 = extract_block(h0.matrix, states), bi = extract_block(hi.matrix, states);
  SparseOp s0 = b0.sparseView(), si = bi.sparseView();
  for (double g : couplings) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b0 + g * bi);
    const double e = split_rayleigh_quotient(s0, si, g, es.eigenvectors().col(0));
    out.energies.push_back(e);
    out.remainders.push_back(std::abs(e + g * g * out.S2));
  }
  const auto n = static_cast<Eigen::Index>(couplings.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1;
    X(i, 1) = std::log(couplings[static_cast<std::size_t>(i)]);
    y(i) = std::log(out.remainders[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  out.exponent = beta(1);
  out.residual = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(n));
  return out;
}

}  // namespace mudecay
