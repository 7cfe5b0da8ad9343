#include "mudecay/bounds.hpp"
#include "mudecay/spectral.hpp"
#include "small_models.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace mudecay;

namespace {

struct Fixture {
  Model model;
  VertexTable table;
  double g0;
  explicit Fixture(const ModelConfig& c)
      : model(make_model(c)), table(build_vertex_table(model)), g0(compute_bounds(model).g0) {}
};

const Fixture& ten_modes() {
  static const Fixture f(ten_mode_config());
  return f;
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("free ground state is the vacuum") {
  const auto& fx = ten_modes();
  const SpectralReport r = ground_state_report(fx.model, fx.table, 0.0);
  CHECK(r.E == 0.0);
  CHECK(r.vacuum_overlap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.unique);
  CHECK(r.gap > 0);
  CHECK(r.ground_charges == Charges{});
  CHECK(r.E == r.low_spectrum.front().eigenvalue);
  CHECK(r.gap == doctest::Approx(r.low_spectrum[1].eigenvalue - r.low_spectrum[0].eigenvalue));
  REQUIRE_FALSE(r.thresholds.empty());
  CHECK(std::is_sorted(r.thresholds.begin(), r.thresholds.end()));
  CHECK(r.thresholds.front() == doctest::Approx(1.0));  // m_e at level 0
}

TEST_CASE("diagonal matrix gives exact eigenvalues") {
  FockOperator d;
  d.matrix.resize(8, 8);
  const double vals[8] = {3.5, -1.25, 0.0, 2.0, 7.0, -4.0, 1.0, 0.5};
  for (int i = 0; i < 8; ++i) d.matrix.insert(i, i) = vals[i];
  d.hermitian = true;
  for (SolverKind kind : {SolverKind::Dense, SolverKind::Krylov}) {
    const Eigenpairs e = eigensolve(d, 3, kind, 5);
    CHECK(e.values(0) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(e.values(1) == doctest::Approx(-1.25).epsilon(1e-14));
    CHECK(e.values(2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  FockOperator a;
  a.matrix.resize(2, 2);
  a.matrix.insert(0, 1) = 1.0;
  CHECK_THROWS(eigensolve(a, 1));
}

TEST_CASE("dense and Krylov agree on a 1024-dimensional instance") {
  const auto& fx = ten_modes();
  const TotalHamiltonian h = assemble_total(fx.model, fx.table, fx.g0 / 10);
  REQUIRE(fx.model.fock.dim() == 1024);
  const Eigenpairs dense = eigensolve(h.h, 10, SolverKind::Dense);
  const Eigenpairs kry = eigensolve(h.h, 10, SolverKind::Krylov, 3);
  CHECK((dense.values - kry.values).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(dense.max_residual <= 1e-9);
  CHECK(kry.max_residual <= 1e-9);
  // orthonormal eigenvectors
  const Eigen::MatrixXcd gram = kry.vectors.adjoint() * kry.vectors;
  CHECK((gram - Eigen::MatrixXcd::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("sector structure") {
  const auto& fx = ten_modes();
  const TotalHamiltonian h = assemble_total(fx.model, fx.table, fx.g0 / 10);
  const auto sectors = sectored_solve(fx.model, h.h.matrix);
  const Eigen::VectorXd full = dense_eigenvalues(h.h.matrix);
  CHECK(sector_union_mismatch(sectors, full) <= 1e-8);
  // vacuum sector holds the ground energy
  for (const auto& s : sectors)
    if (s.charges == Charges{}) CHECK(s.eigenvalues.front() == doctest::Approx(full(0)).epsilon(1e-10));
  // one-muon sector size by enumeration over occupation numbers
  const auto& f = fx.model.fock;
  const int ce = f.count(Species::Electron), cm = f.count(Species::MuonMinus), cp = f.count(Species::MuonPlus),
            cb = f.count(Species::AntiNuE), cn = f.count(Species::NuMu);
  long expected = 0;
  for (int ne = 0; ne <= ce; ++ne)
    for (int nm = 0; nm <= cm; ++nm)
      for (int np = 0; np <= cp; ++np)
        for (int nb = 0; nb <= cb; ++nb)
          for (int nn = 0; nn <= cn; ++nn)
            if (ne + nm - np == 1 && ne - nb == 0 && nm - np + nn == 1)
              expected += binom(ce, ne) * binom(cm, nm) * binom(cp, np) * binom(cb, nb) * binom(cn, nn);
  bool found = false;
  for (const auto& s : sectors)
    if (s.charges == Charges{1, 0, 1}) {
      found = true;
      CHECK(s.dim == expected);
    }
  CHECK(found);
  long total = 0;
  for (const auto& s : sectors) total += s.dim;
  CHECK(total == f.dim());
}

TEST_CASE("evolution with the sector eigensystems is unitary and matches the free phases") {
  const auto& fx = ten_modes();
  const TotalHamiltonian h0 = assemble_total(fx.model, fx.table, 0.0);
  const SectorDecomposition d = sector_eigensystems(fx.model.fock, h0.h.matrix, true);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(fx.model.fock.dim());
  psi(3) = 1;
  const Eigen::VectorXcd out = evolve(d, psi, 2.5);
  const double e = h0.h.matrix.coeff(3, 3).real();
  CHECK(std::abs(out(3) - std::polar(1.0, -2.5 * e)) <= 1e-12);
  const TotalHamiltonian h = assemble_total(fx.model, fx.table, fx.g0 / 10);
  const SectorDecomposition dh = sector_eigensystems(fx.model.fock, h.h.matrix, true);
  Eigen::VectorXcd phi = Eigen::VectorXcd::Random(fx.model.fock.dim()).normalized();
  CHECK(evolve(dh, phi, 7.0).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interacting ground state: E <= 0, gap, monotone in g") {
  const auto& fx = ten_modes();
  double prev = 0;
  for (double x : {0.025, 0.05, 0.1}) {
    const SpectralReport r = ground_state_report(fx.model, fx.table, x * fx.g0);
    CHECK(r.E <= 0.0);
    CHECK(r.E <= prev);
    CHECK(r.gap > 0);
    CHECK(r.unique);
    CHECK(r.vacuum_overlap <= 1.0);
    CHECK(r.vacuum_overlap > 0.99);
    CHECK(r.max_residual <= 1e-9);
    prev = r.E;
  }
}

TEST_CASE("second-order perturbation oracle") {
  const auto& fx = ten_modes();
  std::vector<double> gs;
  for (double x : {0.025, 0.05, 0.1}) gs.push_back(x * fx.g0);
  const PerturbationCheck p = perturbation_scaling(fx.model, fx.table, gs);
  CHECK(p.S2 > 0);
  CHECK(p.exponent == doctest::Approx(4.0).epsilon(0.125));
  for (std::size_t i = 0; i < gs.size(); ++i) CHECK(p.energies[i] <= 0);
  // S2 agrees with the first-order vector norm identity <H_I Omega, H0^{-1} H_I Omega>
  const FockOperator h0 = assemble_h0(fx.model);
  const FockOperator hi = assemble_hi(fx.model, fx.table);
  const Eigen::VectorXcd v = hi.matrix * vacuum(fx.model.fock.dim());
  double s2 = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) s2 += std::norm(v(i)) / h0.matrix.coeff(i, i).real();
  CHECK(second_order_coefficient(fx.model, h0, hi) == doctest::Approx(s2).epsilon(1e-12));
  CHECK(p.S2 == doctest::Approx(s2).epsilon(1e-12));
}
