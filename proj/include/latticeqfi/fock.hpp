#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace latticeqfi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Occupation numbers (n_1, ..., n_M) of a bosonic Fock state.
using Occupation = std::vector<int>;

inline constexpr std::size_t kDefaultDimensionCap = 5000;

/// Dimension cap for new bases: LATTICEQFI_DIM_CAP if set and valid,
/// otherwise kDefaultDimensionCap.
std::size_t default_dimension_cap();

/// binomial(N + M - 1, N), saturating at SIZE_MAX.
std::size_t fock_dimension(int n_particles, int n_modes);

std::string to_string(const Occupation& occupation);

/**
 * All occupation vectors of N bosons on M modes, in lexicographically
 * descending order, so |N,0,...,0> is index 0 and |0,...,0,N> is last.
 *
 * Immutable after construction. Instances are shared between states and
 * operators through BasisPtr.
 */
class FockBasis {
 public:
  FockBasis(int n_particles, int n_modes,
            std::size_t dimension_cap = default_dimension_cap());

  int n_particles() const { return n_particles_; }
  int n_modes() const { return n_modes_; }
  std::size_t size() const { return states_.size(); }

  const std::vector<Occupation>& states() const { return states_; }
  const Occupation& state(std::size_t k) const { return states_.at(k); }

  std::optional<std::size_t> find(const Occupation& occupation) const;

  /// Throws DomainError when the occupation is not a member of the basis.
  std::size_t index(const Occupation& occupation) const;

 private:
  int n_particles_;
  int n_modes_;
  std::vector<Occupation> states_;
  std::map<Occupation, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr build_basis(int n_particles, int n_modes,
                     std::size_t dimension_cap = default_dimension_cap());

/// Normalized amplitude vector over a Fock basis.
class QuantumState {
 public:
  static constexpr double kNormTolerance = 1e-10;

  /// Throws DomainError if the dimension is wrong or |amplitudes| deviates
  /// from 1 by more than kNormTolerance.
  QuantumState(BasisPtr basis, Vector amplitudes);

  /// Rescales to unit norm first; the zero vector is rejected.
  static QuantumState normalized(BasisPtr basis, Vector amplitudes);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }
  double norm() const { return amplitudes_.norm(); }

 private:
  BasisPtr basis_;
  Vector amplitudes_;
};

/// Dense Hermitian matrix on a Fock basis.
class HermitianOperator {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  /// Throws DomainError when ||m - m^dagger||_max exceeds
  /// kHermiticityTolerance * max(1, ||m||_max).
  HermitianOperator(BasisPtr basis, Matrix matrix);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// Largest absolute entry.
  double max_norm() const;

 private:
  BasisPtr basis_;
  Matrix matrix_;
};

double max_abs(const Matrix& m);
double hermiticity_defect(const Matrix& m);

/// Matrix of a^dagger_i a_j with 1-based site labels. Hermitian only for i == j.
Matrix hop_operator(const FockBasis& basis, int i, int j);

/// n_i as a real diagonal, 1-based.
RealVector number_diagonal(const FockBasis& basis, int i);

/// Applies a^dagger_i a_j to an amplitude vector without forming the matrix.
Vector apply_hop(const FockBasis& basis, int i, int j, const Vector& v);

QuantumState fock_state(const BasisPtr& basis, const Occupation& occupation);

/// (|N,0,...,0> + |0,...,0,N>)/sqrt(2).
QuantumState noon_state(const BasisPtr& basis);

/// Initial-state recipe that can be instantiated on any (N, M) basis.
struct InitialStateSpec {
  enum class Kind { fock, noon, occupations };
  Kind kind = Kind::fock;
  Occupation occupations;  // only for Kind::occupations
};

/// Kind::fock yields |N,0,...,0>.
QuantumState make_initial_state(const BasisPtr& basis, const InitialStateSpec& spec);

}  // namespace latticeqfi
