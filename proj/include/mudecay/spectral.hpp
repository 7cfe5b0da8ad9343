#pragma once

#include "mudecay/fock.hpp"
#include "mudecay/hamiltonian.hpp"

#include <map>
#include <string>
#include <vector>

namespace mudecay {

enum class SolverKind { Dense, Krylov };

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors;  // columns, orthonormal
  double max_residual = 0;   // max ||H v - lambda v|| / (1 + |lambda|)
  int iterations = 0;        // Krylov restarts
};

// k lowest eigenpairs. Dense uses a full Hermitian eigensolver; Krylov is
// Lanczos with full reorthogonalization, locking one converged pair per cycle.
Eigenpairs eigensolve(const FockOperator& H, int k, SolverKind kind = SolverKind::Dense, std::uint64_t seed = 1);

// All eigenvalues, dense.
Eigen::VectorXd dense_eigenvalues(const SparseOp& H);

// Basis states grouped by (Q, L_e, L_mu), ascending state index inside a block.
std::map<Charges, std::vector<State>> charge_sectors(const FockSpace& fock);

struct SectorBlock {
  Charges charges;
  std::vector<State> states;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // empty when not requested
};

struct SectorDecomposition {
  std::vector<SectorBlock> blocks;  // ordered by charges
  double off_block_max = 0;         // largest |H_ij| between different sectors
};

SectorDecomposition sector_eigensystems(const FockSpace& fock, const SparseOp& H, bool vectors);

// e^{-itH} psi using the block eigensystems.
Eigen::VectorXcd evolve(const SectorDecomposition& sectors, const Eigen::VectorXcd& psi, double t);

struct SectorSpectrum {
  Charges charges;
  int dim = 0;
  std::vector<double> eigenvalues;
};

std::vector<SectorSpectrum> sectored_solve(const Model& model, const SparseOp& H);

// Max difference between the merged sector spectra and a full dense solve.
double sector_union_mismatch(const std::vector<SectorSpectrum>& sectors, const Eigen::VectorXd& full);

struct LowLevel {
  double eigenvalue = 0;
  Charges charges;
  double vacuum_overlap = 0;
};

struct SpectralReport {
  double g = 0;
  double E = 0;
  double gap = 0;
  double vacuum_overlap = 0;
  bool unique = false;
  double max_residual = 0;
  Charges ground_charges;
  std::vector<LowLevel> low_spectrum;
  std::vector<double> thresholds;
  std::vector<std::pair<double, int>> density_of_states;  // (bin upper edge, count) above E
  std::vector<std::string> warnings;
};

// Ground state by sectored dense solves. The reported E is the Rayleigh
// quotient of the ground vector, accumulated as <H0> + g <H_I>.
SpectralReport ground_state_report(const Model& model, const VertexTable& table, double g, int k_low = 16);

// S2 = sum_{n != Omega} |<n|H_I|Omega>|^2 / lambda_n over the free eigenbasis.
double second_order_coefficient(const Model& model, const FockOperator& h0, const FockOperator& hi);

struct PerturbationCheck {
  std::vector<double> couplings;
  std::vector<double> energies;
  std::vector<double> remainders;  // |E(g) + g^2 S2|
  double S2 = 0;
  double exponent = 0;
  double residual = 0;
};

PerturbationCheck perturbation_scaling(const Model& model, const VertexTable& table, const std::vector<double>& couplings);

}  // namespace mudecay
