#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "latticeqfi/fock.hpp"

namespace latticeqfi {

/// Hamiltonian families. dbh and pf are time dependent.
enum class ModelKind { tilt, tbh, dbh, effective, pf };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
bool is_time_dependent(ModelKind kind);

/**
 * Physical parameters in units of the tunneling energy J (hbar = 1).
 * Defaults are the driven-chain working point: gamma = omega = 33,
 * V0 = 30.4, theta = pi, phi0 = -pi/2.
 */
struct ModelParams {
  double J = 1.0;
  double gamma = 33.0;
  double U = 0.0;
  double V0 = 30.4;
  double omega = 33.0;
  double theta = std::numbers::pi;
  double phi0 = -std::numbers::pi / 2.0;
  /// Coefficient of the 1/omega boundary term in the effective model.
  /// Unset means the first-order high-frequency value, see
  /// first_order_boundary_coefficient().
  std::optional<double> K;
  double Gamma = 0.0;
  int M = 2;
  int N = 1;
  /// When set, the drive frequency tracks gamma (omega = gamma) instead of
  /// being frozen at `omega`.
  bool co_vary_omega = false;

  double drive_frequency() const { return co_vary_omega ? gamma : omega; }
  /// phi_m = phi0 - m*pi for site label m = 1..M.
  double site_phase(int m) const { return phi0 - m * std::numbers::pi; }
};

/// Throws DomainError on J < 0, non-finite values, or M/N mismatching the basis.
void validate(const ModelParams& params, const FockBasis& basis);

/// J_F = J * J_1(2 V0 / omega).
double renormalized_tunneling(const ModelParams& params);

/**
 * K such that (K/omega) sum_j (n_{j+1} - n_j) is the first-order term of the
 * high-frequency expansion of the resonantly driven chain:
 * K = J^2 sum_{k>=1} (J_{k-1}(x)^2 - J_{k+1}(x)^2) / k with x = 2 V0 / omega.
 */
double first_order_boundary_coefficient(const ModelParams& params);

/// params.K if set, otherwise first_order_boundary_coefficient(params).
double boundary_coefficient(const ModelParams& params);

/// gamma * sum_m m n_m.
HermitianOperator tilt_hamiltonian(const ModelParams& params, const BasisPtr& basis);

/// -J sum_<ij> a^dagger_i a_j + tilt + (U/2) sum_j n_j (n_j - 1), open chain.
HermitianOperator tbh_hamiltonian(const ModelParams& params, const BasisPtr& basis);

/// H_TBH + V0 sum_m n_m sin(omega t + phi_m + theta/2).
HermitianOperator dbh_hamiltonian_at(const ModelParams& params, const BasisPtr& basis, double t);

/**
 * Rotating-frame effective Hamiltonian of the driven chain:
 *   -J_F sum_j (a^dagger_{j+1} a_j e^{-i phi_j} + h.c.) + (U/2) sum_j n_j(n_j-1)
 *   + (K/omega) sum_j (n_{j+1} - n_j) + (gamma - omega) sum_m m n_m.
 * The last term is the residual detuning; it vanishes on resonance and
 * always under co_vary_omega.
 */
HermitianOperator effective_hamiltonian(const ModelParams& params, const BasisPtr& basis);

/// H_0 + Gamma cos(omega t) sum_j j n_j, H_0 = H_TBH at gamma = 0.
HermitianOperator pf_hamiltonian_at(const ModelParams& params, const BasisPtr& basis, double t);

/// Time-independent builders only (tilt, tbh, effective).
HermitianOperator static_hamiltonian(const ModelParams& params, const BasisPtr& basis,
                                     ModelKind kind);

/// Time-dependent builders (dbh, pf); static kinds ignore t.
HermitianOperator hamiltonian_at(const ModelParams& params, const BasisPtr& basis,
                                 ModelKind kind, double t);

/**
 * Analytic dH/dgamma.
 *
 * With the drive frozen (default) every supported kind gives sum_m m n_m.
 * With co_vary_omega the effective model differentiates J_F(2V0/gamma) and
 * K/gamma, and the driven model at time t picks up
 * V0 t sum_m n_m cos(gamma t + phi_m + theta/2). pf has no gamma dependence
 * and is rejected.
 */
HermitianOperator d_hamiltonian_d_gamma(const ModelParams& params, const BasisPtr& basis,
                                        ModelKind kind, double t = 0.0);

/// sum_m m n_m as a real diagonal.
RealVector tilt_diagonal(const FockBasis& basis);

}  // namespace latticeqfi
