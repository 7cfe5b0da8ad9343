#include "mudecay/fock.hpp"

#include "mudecay/errors.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mudecay {

namespace {

void layout(std::array<int, 5>& offsets, const std::array<int, 5>& counts, const std::array<Species, 5>& order,
            int& total) {
  std::array<bool, 5> seen{};
  total = 0;
  for (Species s : order) {
    if (seen[species_slot(s)]) throw std::invalid_argument("species order must be a permutation");
    seen[species_slot(s)] = true;
    offsets[species_slot(s)] = total;
    total += counts[species_slot(s)];
  }
  if (total > 62) throw std::invalid_argument("too many modes for a 64-bit occupation state");
}

FockOperator single_ladder(const FockSpace& fock, Species species, int mode_index, bool dagger) {
  const Ladder op{fock.mode(species, mode_index), dagger};
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(fock.dim() / 2));
  for (State st = 0; st < static_cast<State>(fock.dim()); ++st)
    if (auto r = fock.apply(st, std::span(&op, 1)))
      trip.emplace_back(static_cast<Eigen::Index>(r->first), static_cast<Eigen::Index>(st), Complex(r->second));
  FockOperator out;
  out.matrix.resize(fock.dim(), fock.dim());
  out.matrix.setFromTriplets(trip.begin(), trip.end());
  return out;
}

FockOperator diagonal_operator(Eigen::Index dim, const std::function<double(State)>& value) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (State st = 0; st < static_cast<State>(dim); ++st) {
    const double v = value(st);
    if (v != 0.0) trip.emplace_back(static_cast<Eigen::Index>(st), static_cast<Eigen::Index>(st), Complex(v));
  }
  FockOperator out;
  out.matrix.resize(dim, dim);
  out.matrix.setFromTriplets(trip.begin(), trip.end());
  out.hermitian = true;
  return out;
}

}  // namespace

FockSpace::FockSpace(const GridSet& grids, std::array<Species, 5> order) : order_(order) {
  for (Species s : kAllSpecies) counts_[species_slot(s)] = grids[s].size();
  layout(offsets_, counts_, order_, n_modes_);
}

FockSpace::FockSpace(std::array<int, 5> counts, std::array<Species, 5> order) : counts_(counts), order_(order) {
  for (int c : counts)
    if (c < 0) throw std::invalid_argument("mode counts must be non-negative");
  layout(offsets_, counts_, order_, n_modes_);
}

int FockSpace::mode(Species s, int local) const {
  if (local < 0 || local >= counts_[species_slot(s)])
    throw std::out_of_range("no mode " + std::to_string(local) + " for species " + std::string(species_name(s)));
  return offsets_[species_slot(s)] + local;
}

State FockSpace::species_mask(Species s) const {
  const int c = counts_[species_slot(s)];
  if (c == 0) return 0;
  return ((State(1) << c) - 1) << offsets_[species_slot(s)];
}

std::optional<std::pair<State, int>> FockSpace::apply(State state, std::span<const Ladder> ops) const {
  int sign = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const State bit = State(1) << it->mode;
    const bool occupied = (state & bit) != 0;
    if (occupied == it->dagger) return std::nullopt;
    if (std::popcount(state & (bit - 1)) & 1) sign = -sign;
    state ^= bit;
  }
  return std::make_pair(state, sign);
}

int FockSpace::occupation(State state, Species s) const { return std::popcount(state & species_mask(s)); }

Charges FockSpace::charges(State st) const {
  const int ne = occupation(st, Species::Electron), nm = occupation(st, Species::MuonMinus),
            np = occupation(st, Species::MuonPlus), na = occupation(st, Species::AntiNuE),
            nn = occupation(st, Species::NuMu);
  return {ne + nm - np, ne - na, nm - np + nn};
}

FockOperator creation(const FockSpace& fock, Species species, int mode_index) {
  return single_ladder(fock, species, mode_index, true);
}

FockOperator annihilation(const FockSpace& fock, Species species, int mode_index) {
  return single_ladder(fock, species, mode_index, false);
}

Eigen::VectorXcd vacuum(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("vacuum: dim must be >= 1");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(0) = 1.0;
  return v;
}

FockOperator number_operator(const FockSpace& fock, Species species, int mode_index) {
  const State bit = State(1) << fock.mode(species, mode_index);
  return diagonal_operator(fock.dim(), [bit](State st) { return (st & bit) ? 1.0 : 0.0; });
}

FockOperator species_number(const FockSpace& fock, Species species) {
  return diagonal_operator(fock.dim(), [&](State st) { return double(fock.occupation(st, species)); });
}

ChargeOperators charge_operators(const FockSpace& fock) {
  return {diagonal_operator(fock.dim(), [&](State st) { return double(fock.charges(st).Q); }),
          diagonal_operator(fock.dim(), [&](State st) { return double(fock.charges(st).L_e); }),
          diagonal_operator(fock.dim(), [&](State st) { return double(fock.charges(st).L_mu); })};
}

FockOperator field_operator(const FockSpace& fock, Species species, bool dagger, const Eigen::VectorXcd& f) {
  if (f.size() != fock.count(species)) throw std::invalid_argument("field_operator: f has the wrong length");
  std::vector<Monomial> terms;
  for (int k = 0; k < f.size(); ++k)
    terms.push_back({{Ladder{fock.mode(species, k), dagger}}, dagger ? f(k) : std::conj(f(k))});
  return {assemble_monomials(fock, terms), false};
}

SparseOp assemble_monomials(const FockSpace& fock, std::span<const Monomial> terms) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (const auto& term : terms) {
    if (term.coeff == 0.0) continue;
    // only states that carry every annihilated mode can contribute
    State need = 0;
    for (const auto& op : term.ops)
      if (!op.dagger) need |= State(1) << op.mode;
    for (State st = 0; st < static_cast<State>(fock.dim()); ++st) {
      if ((st & need) != need) continue;
      if (auto r = fock.apply(st, term.ops))
        trip.emplace_back(static_cast<Eigen::Index>(r->first), static_cast<Eigen::Index>(st),
                          term.coeff * double(r->second));
    }
  }
  SparseOp m(fock.dim(), fock.dim());
  m.setFromTriplets(trip.begin(), trip.end());
  drop_zeros(m);
  return m;
}

void drop_zeros(SparseOp& m) {
  m.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0); });
  m.makeCompressed();
}

double max_abs_entry(const SparseOp& m) {
  double mx = 0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
  return mx;
}

bool is_hermitian(const SparseOp& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const SparseOp diff = m - SparseOp(m.adjoint());
  return max_abs_entry(diff) <= tol;
}

SparseOp commutator(const SparseOp& a, const SparseOp& b) {
  SparseOp c = a * b;
  c -= SparseOp(b * a);
  drop_zeros(c);
  return c;
}

SparseOp anticommutator(const SparseOp& a, const SparseOp& b) {
  SparseOp c = a * b;
  c += SparseOp(b * a);
  drop_zeros(c);
  return c;
}

void write_triplets(std::ostream& out, const SparseOp& m) {
  struct Entry {
    Eigen::Index r, c;
    Complex v;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) entries.push_back({it.row(), it.col(), it.value()});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.r != b.r ? a.r < b.r : a.c < b.c; });
  out << m.rows() << ' ' << entries.size() << '\n';
  out << std::setprecision(17);
  for (const auto& e : entries) out << e.r << ' ' << e.c << ' ' << e.v.real() << ' ' << e.v.imag() << '\n';
}

SparseOp read_triplets(std::istream& in) {
  Eigen::Index dim = 0;
  std::size_t nnz = 0;
  if (!(in >> dim >> nnz) || dim < 1) throw std::runtime_error("triplet header must be 'dim nnz'");
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(nnz);
  for (std::size_t i = 0; i < nnz; ++i) {
    Eigen::Index r, c;
    double re, im;
    if (!(in >> r >> c >> re >> im)) throw std::runtime_error("truncated triplet file");
    if (r < 0 || c < 0 || r >= dim || c >= dim) throw std::runtime_error("triplet index out of range");
    trip.emplace_back(r, c, Complex(re, im));
  }
  SparseOp m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace mudecay
