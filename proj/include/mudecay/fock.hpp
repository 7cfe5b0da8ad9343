#pragma once

#include "mudecay/grids.hpp"

#include <Eigen/Sparse>

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mudecay {

using SparseOp = Eigen::SparseMatrix<Complex>;
using State = std::uint64_t;  // one occupation bit per globally ordered mode

struct FockOperator {
  SparseOp matrix;
  bool hermitian = false;

  Eigen::Index dim() const { return matrix.rows(); }
};

// Elementary ladder operator on a global mode index.
struct Ladder {
  int mode = 0;
  bool dagger = false;
};

// A product of ladder operators (leftmost first) with a coefficient.
struct Monomial {
  std::vector<Ladder> ops;
  Complex coeff = 1.0;
};

struct Charges {
  int Q = 0;
  int L_e = 0;
  int L_mu = 0;

  auto operator<=>(const Charges&) const = default;
};

// Mode layout of the truncated five-species Fock space. Modes are ordered by
// species (in `order`, default e < mu- < mu+ < nubar-e < nu-mu) then by local index.
class FockSpace {
 public:
  explicit FockSpace(const GridSet& grids, std::array<Species, 5> order = kAllSpecies);
  explicit FockSpace(std::array<int, 5> counts, std::array<Species, 5> order = kAllSpecies);

  int n_modes() const { return n_modes_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_modes_; }
  int count(Species s) const { return counts_[species_slot(s)]; }
  int mode(Species s, int local) const;
  State species_mask(Species s) const;
  const std::array<Species, 5>& order() const { return order_; }

  // Applies ops right to left; nullopt when the result is the zero vector.
  std::optional<std::pair<State, int>> apply(State state, std::span<const Ladder> ops) const;

  Charges charges(State state) const;
  int occupation(State state, Species s) const;

 private:
  std::array<int, 5> counts_{};
  std::array<int, 5> offsets_{};
  std::array<Species, 5> order_{};
  int n_modes_ = 0;
};

FockOperator creation(const FockSpace& fock, Species species, int mode_index);
FockOperator annihilation(const FockSpace& fock, Species species, int mode_index);

Eigen::VectorXcd vacuum(Eigen::Index dim);

FockOperator number_operator(const FockSpace& fock, Species species, int mode_index);
FockOperator species_number(const FockSpace& fock, Species species);

struct ChargeOperators {
  FockOperator Q;
  FockOperator L_e;
  FockOperator L_mu;
};

// Q = N_e + N_mu- - N_mu+, L_e = N_e - N_nubar, L_mu = N_mu- - N_mu+ + N_numu.
ChargeOperators charge_operators(const FockSpace& fock);

// b(f) = sum_k conj(f_k) b_k, b*(f) = sum_k f_k b*_k over one species' modes.
FockOperator field_operator(const FockSpace& fock, Species species, bool dagger, const Eigen::VectorXcd& f);

// Sum of monomials as a sparse matrix; exact zeros dropped.
SparseOp assemble_monomials(const FockSpace& fock, std::span<const Monomial> terms);

// Removes stored entries that are exactly zero.
void drop_zeros(SparseOp& m);

double max_abs_entry(const SparseOp& m);
bool is_hermitian(const SparseOp& m, double tol);
SparseOp commutator(const SparseOp& a, const SparseOp& b);
SparseOp anticommutator(const SparseOp& a, const SparseOp& b);

// Text triplets: header "dim nnz", then "row col re im" sorted by (row, col).
void write_triplets(std::ostream& out, const SparseOp& m);
SparseOp read_triplets(std::istream& in);

}  // namespace mudecay
