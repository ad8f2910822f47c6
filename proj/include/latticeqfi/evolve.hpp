#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "latticeqfi/fock.hpp"
#include "latticeqfi/model.hpp"

namespace latticeqfi {

/// Spectral decomposition H = V diag(E) V^dagger, energies ascending.
struct EigenSystem {
  RealVector energies;
  Matrix vectors;  // columns are eigenvectors
  /// ||H||_max of the decomposed operator; sets degeneracy thresholds.
  double scale = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
};

/**
 * Eigendecomposition with a reproducible phase: the largest-magnitude
 * component of every eigenvector (first one on ties) is real and positive.
 * Throws NumericalError if the solver does not converge.
 */
EigenSystem eigensystem(const HermitianOperator& h);
EigenSystem eigensystem(const Matrix& hermitian);

/// V diag(f(E)) V^dagger applied to a vector.
Vector apply_spectral_phase(const EigenSystem& eig, const Vector& v, double t);

/// exp(-i H t) |psi0>.
QuantumState evolve_static(const HermitianOperator& h, const QuantumState& psi0, double t);
QuantumState evolve_static(const EigenSystem& eig, const QuantumState& psi0, double t);

/// Sub-steps per drive period below which evolve_driven refuses to run.
inline constexpr int kMinStepsPerPeriod = 40;

/// ceil(T omega S / 2 pi), at least 1.
std::size_t min_driven_steps(double T, double omega, int steps_per_period = kMinStepsPerPeriod);

/// Hamiltonian as a function of time.
using HamiltonianFamily = std::function<Matrix(double)>;

/// H(t) for a time-dependent model kind (dbh or pf); static kinds are constant.
HamiltonianFamily hamiltonian_family(const ModelParams& params, const BasisPtr& basis,
                                     ModelKind kind);

/// One midpoint step: exp(-i H(t + h/2) h) v.
Vector midpoint_step(const HamiltonianFamily& family, const Vector& v, double t, double h);

/**
 * Piecewise-constant midpoint propagation from t = 0 to T in `steps` equal
 * steps. Second order in the step size. Throws ConfigError if `steps` is
 * below min_driven_steps(T, omega).
 */
QuantumState evolve_driven(const ModelParams& params, const BasisPtr& basis,
                           const QuantumState& psi0, double T, std::size_t steps,
                           ModelKind kind = ModelKind::dbh);

/// Same scheme for an arbitrary family, without the step floor.
QuantumState evolve_family(const HamiltonianFamily& family, const QuantumState& psi0,
                           double t0, double t1, std::size_t steps);

/**
 * States at every time on `times` (strictly increasing, >= 0). Static kinds
 * use the spectral propagator; driven kinds step on the global grid
 * k 2 pi / (omega S) with a final partial step onto each sample.
 */
std::vector<QuantumState> trajectory(const ModelParams& params, const BasisPtr& basis,
                                     ModelKind kind, const QuantumState& psi0,
                                     const std::vector<double>& times,
                                     int steps_per_period = kMinStepsPerPeriod);

}  // namespace latticeqfi
