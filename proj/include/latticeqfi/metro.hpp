#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "latticeqfi/evolve.hpp"
#include "latticeqfi/fock.hpp"
#include "latticeqfi/model.hpp"

namespace latticeqfi {

enum class QfiMethod { finite_difference, generator, generator_two_level };

std::string_view to_string(QfiMethod method);
QfiMethod parse_qfi_method(std::string_view name);

/// Local generator h = linear + oscillating at time t, in the Fock basis.
struct GeneratorParts {
  Matrix linear;
  Matrix oscillating;
  double t = 0.0;

  Matrix full() const { return linear + oscillating; }
};

/// Relative degeneracy threshold; gaps below kDegeneracyTolerance * ||H||_max
/// use the analytic small-gap limit.
inline constexpr double kDegeneracyTolerance = 1e-10;

/**
 * Linear and oscillating parts of the local generator h = i U^dagger dU/dgamma
 * for U = exp(-i H t), so that F = 4 Var_psi0(h):
 *   linear      = t sum_k dE_k |phi_k><phi_k|,  dE_k = <phi_k|dH|phi_k>
 *   oscillating = 2 sum_{l != k} e^{-i t E_kl/2} sin(t E_kl/2) <phi_l|d phi_k> |phi_l><phi_k|
 * with <phi_l|d phi_k> = <phi_l|dH|phi_k> / (E_k - E_l). In the eigenbasis,
 * element (k, l) is 2 e^{i t E_kl/2} sin(t E_kl/2) <phi_k|dH|phi_l> / E_kl.
 */
GeneratorParts generator_parts(const EigenSystem& eig, const HermitianOperator& dh, double t);

/// Same, from a raw Hermitian dH (used by the two-level truncation).
GeneratorParts generator_parts(const EigenSystem& eig, const Matrix& dh, double t);

struct GeneratorQfi {
  double F = 0.0;
  double var_linear = 0.0;
  double var_oscillating = 0.0;
};

/// F = 4 Var(linear + oscillating), plus the two partial variances.
GeneratorQfi qfi_from_generator(const QuantumState& psi0, const GeneratorParts& parts);

/// <psi|h^2|psi> - |<psi|h|psi>|^2 for Hermitian h.
double variance(const Vector& psi, const Matrix& h);

/// (h_max - h_min)^2 of a Hermitian generator.
double optimal_qfi(const Matrix& generator);
double optimal_qfi(const GeneratorParts& parts);

/// T^2 (N (M - 1))^2.
double heisenberg_limit(int n_particles, int n_modes, double T);

/// 1 / sqrt(nu F).
double cramer_rao(double F, double repetitions);

/// The two eigenstates with the largest populations |<phi_k|psi0>|^2.
struct DominantPair {
  std::size_t first = 0;
  std::size_t second = 0;
  bool tie = false;  // populations tied within 1e-12; lower energy index won
};

DominantPair dominant_pair(const EigenSystem& eig, const QuantumState& psi0);

/// Generator with the oscillating part restricted to the eigenpair that
/// carries the two largest populations |<phi|psi0>|^2.
struct TwoLevelGenerator {
  GeneratorParts parts;
  std::size_t first = 0;   // larger overlap
  std::size_t second = 0;  // second-largest overlap
  double omega = 0.0;      // |E_first - E_second|
  double tau_estimate = 0.0;
  bool tie = false;        // overlaps tied within 1e-12; lower energy index won
};

TwoLevelGenerator two_level_generator(const EigenSystem& eig, const QuantumState& psi0,
                                      const HermitianOperator& dh, double t);

/// Evaluates F(t), Var(linear), Var(oscillating) for one (H, dH, psi0) at
/// many times, working in the eigenbasis without forming Fock-space matrices.
class GeneratorSeriesEvaluator {
 public:
  GeneratorSeriesEvaluator(const EigenSystem& eig, const HermitianOperator& dh,
                           const QuantumState& psi0);

  /// Restrict the oscillating part to the pair (a, b) of eigen-indices.
  void restrict_to_pair(std::size_t a, std::size_t b);

  GeneratorQfi at(double t) const;

 private:
  RealVector energies_;
  Matrix dh_eigen_;
  Vector coeffs_;
  double degeneracy_gap_;
  bool restricted_ = false;
  std::size_t pair_a_ = 0;
  std::size_t pair_b_ = 0;
};

/// Recipe mapping perturbed parameters to the state at a fixed final time.
using Evolver = std::function<QuantumState(const ModelParams&)>;

Evolver static_evolver(ModelKind kind, const BasisPtr& basis, const QuantumState& psi0, double T);

/// Midpoint-scheme evolver; `steps` = 0 picks the floor for params.omega.
Evolver driven_evolver(ModelKind kind, const BasisPtr& basis, const QuantumState& psi0, double T,
                       std::size_t steps = 0);

struct FdEstimate {
  double F = 0.0;       // central difference with step dgamma
  double F_half = 0.0;  // same with dgamma / 2
  bool consistent = true;
  std::string warning;  // set when the two steps disagree beyond 1e-4 relative
};

/// F from three pure states: 4(<d|d> - |<psi|d>|^2), d = (plus - minus) / (2 step).
double qfi_from_states(const Vector& minus, const Vector& center, const Vector& plus, double step);

/**
 * F = 4(<d psi|d psi> - |<psi|d psi>|^2) with a central difference in gamma,
 * and a consistency check at half the step.
 * Throws DomainError for dgamma <= 0 and NumericalError when the step is
 * below the resolution of gamma itself.
 */
FdEstimate qfi_finite_difference(const Evolver& evolver, const ModelParams& params, double dgamma);

/// Central differences at dgamma and dgamma / 2 from five evolved states.
FdEstimate fd_estimate(const Vector& minus, const Vector& minus_half, const Vector& center,
                       const Vector& plus_half, const Vector& plus, double dgamma);

/// 3e-4 / max(1, T ||dH/dgamma||_max): keeps the perturbed phase near 3e-4.
double default_gamma_step(double T, double dh_max_norm);

}  // namespace latticeqfi
