#pragma once

#include <cstddef>

#include "latticeqfi/evolve.hpp"
#include "latticeqfi/fock.hpp"

namespace latticeqfi {

/// <psi|(a^dagger_M a_1)^N|psi>, by N applications of the hop to the ket.
Complex correlator_amplitude(const QuantumState& psi);

/// G^(N) = |<psi|(a^dagger_M a_1)^N|psi>| / (N!/2). Equals 1 on the NOON
/// state; not normalized for general states.
double correlator(const QuantumState& psi);

/// <n_j> for j = 1..M.
RealVector occupations(const QuantumState& psi);

/// |<phi_k|psi0>|^2 indexed by ascending energy.
RealVector eigenstate_overlaps(const QuantumState& psi0, const EigenSystem& eig);

struct GapEstimate {
  std::size_t first = 0;   // eigen-index with the largest overlap
  std::size_t second = 0;  // eigen-index with the second-largest overlap
  double omega = 0.0;      // |E_first - E_second|
  double tau_estimate = 0.0;
  /// Largest overlap >= kConcentratedOverlap: the pair is still the top two
  /// but the second member carries almost no weight.
  bool concentrated = false;
};

inline constexpr double kConcentratedOverlap = 0.99;

/// Omega and tau ~ pi/Omega for the two most populated eigenstates.
/// Throws NumericalError when Omega < 1e-14 ||H||_max.
GapEstimate spectral_gap_tau(const EigenSystem& eig, const RealVector& overlaps);

}  // namespace latticeqfi
