#pragma once

#include "mudecay/fock.hpp"
#include "mudecay/landau.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mudecay {

struct SuiteCheck {
  std::string name;
  double max_error = 0;
  double tolerance = 0;
  bool passed = false;
  std::string detail;
};

// All {b, b*}, {b, b}, {b*, b*} over every mode pair. Integer sign bookkeeping
// (exact) and sparse floating products, both reported.
std::vector<SuiteCheck> car_suite(const FockSpace& fock);

// Clifford relations, gamma5 properties, hermiticity pattern.
std::vector<SuiteCheck> gamma_suite();

// int dx2 U_s(n)^+ U_s'(n') and V likewise at random (p1, p3), Gauss-Hermite in the
// guiding-centre variable. Same-level pairs against delta_ss'; distinct levels against 0.
std::vector<SuiteCheck> orthonormality_suite(const ParticleParams& electron, const ParticleParams& muon, int n_max,
                                             int samples, std::uint64_t seed, int nodes = 64);

// Unit norms and helicity eigen-equations of the neutrino spinors on random momenta.
std::vector<SuiteCheck> neutrino_suite(int samples, std::uint64_t seed);

// Three-term recurrence of the normalized Hermite functions.
SuiteCheck hermite_recurrence_check(int n_max, int samples, std::uint64_t seed);

}  // namespace mudecay
