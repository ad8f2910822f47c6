#include "latticeqfi/fock.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "latticeqfi/errors.hpp"

namespace latticeqfi {

namespace {

void check_site(const FockBasis& basis, int site) {
  if (site < 1 || site > basis.n_modes()) {
    throw DomainError("site index " + std::to_string(site) + " outside 1.." +
                      std::to_string(basis.n_modes()));
  }
}

// Appends every composition of `remaining` into the tail of `current`,
// largest leading entry first.
void enumerate(Occupation& current, int position, int remaining,
               std::vector<Occupation>& out) {
  const int last = static_cast<int>(current.size()) - 1;
  if (position == last) {
    current[position] = remaining;
    out.push_back(current);
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    current[position] = n;
    enumerate(current, position + 1, remaining - n, out);
  }
}

}  // namespace

std::size_t default_dimension_cap() {
  if (const char* env = std::getenv("LATTICEQFI_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      return static_cast<std::size_t>(value);
    }
  }
  return kDefaultDimensionCap;
}

std::size_t fock_dimension(int n_particles, int n_modes) {
  if (n_particles < 0 || n_modes < 1) return 0;
  // binomial(N + M - 1, k) with k = min(N, M - 1), built incrementally so
  // every intermediate is itself a binomial coefficient.
  const std::size_t n = static_cast<std::size_t>(n_particles) +
                        static_cast<std::size_t>(n_modes) - 1;
  const std::size_t k = std::min<std::size_t>(n_particles, n_modes - 1);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t numerator = n - k + i;
    if (result > std::numeric_limits<std::size_t>::max() / numerator) {
      return std::numeric_limits<std::size_t>::max();
    }
    result = result * numerator / i;
  }
  return result;
}

std::string to_string(const Occupation& occupation) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < occupation.size(); ++i) {
    if (i) os << ',';
    os << occupation[i];
  }
  os << ')';
  return os.str();
}

FockBasis::FockBasis(int n_particles, int n_modes, std::size_t dimension_cap)
    : n_particles_(n_particles), n_modes_(n_modes) {
  if (n_particles < 1) {
    throw DomainError("particle count must be >= 1, got " + std::to_string(n_particles));
  }
  if (n_modes < 2) {
    throw DomainError("mode count must be >= 2, got " + std::to_string(n_modes));
  }
  const std::size_t dim = fock_dimension(n_particles, n_modes);
  if (dim > dimension_cap) {
    throw SizingError("Fock space for (N=" + std::to_string(n_particles) +
                      ", M=" + std::to_string(n_modes) + ") has dimension " +
                      std::to_string(dim) + ", above the cap of " +
                      std::to_string(dimension_cap));
  }
  states_.reserve(dim);
  Occupation current(static_cast<std::size_t>(n_modes), 0);
  enumerate(current, 0, n_particles, states_);
  for (std::size_t k = 0; k < states_.size(); ++k) index_.emplace(states_[k], k);
}

std::optional<std::size_t> FockBasis::find(const Occupation& occupation) const {
  const auto it = index_.find(occupation);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FockBasis::index(const Occupation& occupation) const {
  if (auto k = find(occupation)) return *k;
  throw DomainError("occupation " + to_string(occupation) + " is not a state of the (N=" +
                    std::to_string(n_particles_) + ", M=" + std::to_string(n_modes_) +
                    ") basis");
}

BasisPtr build_basis(int n_particles, int n_modes, std::size_t dimension_cap) {
  return std::make_shared<const FockBasis>(n_particles, n_modes, dimension_cap);
}

QuantumState::QuantumState(BasisPtr basis, Vector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw DomainError("quantum state requires a basis");
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->size()) {
    throw DomainError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                      ", basis has " + std::to_string(basis_->size()) + " states");
  }
  const double n = amplitudes_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
    throw DomainError("state is not normalized: |psi| = " + std::to_string(n));
  }
}

QuantumState QuantumState::normalized(BasisPtr basis, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero vector");
  amplitudes /= n;
  return QuantumState(std::move(basis), std::move(amplitudes));
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

HermitianOperator::HermitianOperator(BasisPtr basis, Matrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (!basis_) throw DomainError("operator requires a basis");
  const auto n = static_cast<Eigen::Index>(basis_->size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DomainError("operator shape does not match basis dimension " + std::to_string(n));
  }
  const double defect = hermiticity_defect(matrix_);
  if (!(defect <= kHermiticityTolerance * std::max(1.0, max_abs(matrix_)))) {
    throw DomainError("operator is not Hermitian: ||H - H^dagger||_max = " +
                      std::to_string(defect));
  }
}

double HermitianOperator::max_norm() const { return max_abs(matrix_); }

Matrix hop_operator(const FockBasis& basis, int i, int j) {
  check_site(basis, i);
  check_site(basis, j);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix out = Matrix::Zero(n, n);
  const std::size_t si = static_cast<std::size_t>(i - 1);
  const std::size_t sj = static_cast<std::size_t>(j - 1);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Occupation& v = basis.state(k);
    if (v[sj] == 0) continue;
    if (si == sj) {
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = v[si];
      continue;
    }
    Occupation w = v;
    --w[sj];
    ++w[si];
    const std::size_t target = basis.index(w);
    out(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(k)) =
        std::sqrt(static_cast<double>(v[sj]) * static_cast<double>(v[si] + 1));
  }
  return out;
}

RealVector number_diagonal(const FockBasis& basis, int i) {
  check_site(basis, i);
  RealVector out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = basis.state(k)[static_cast<std::size_t>(i - 1)];
  }
  return out;
}

Vector apply_hop(const FockBasis& basis, int i, int j, const Vector& v) {
  check_site(basis, i);
  check_site(basis, j);
  if (static_cast<std::size_t>(v.size()) != basis.size()) {
    throw DomainError("vector length does not match basis");
  }
  const std::size_t si = static_cast<std::size_t>(i - 1);
  const std::size_t sj = static_cast<std::size_t>(j - 1);
  Vector out = Vector::Zero(v.size());
  Occupation w;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Occupation& occ = basis.state(k);
    const Complex amp = v(static_cast<Eigen::Index>(k));
    if (occ[sj] == 0 || amp == Complex{}) continue;
    if (si == sj) {
      out(static_cast<Eigen::Index>(k)) += static_cast<double>(occ[si]) * amp;
      continue;
    }
    w = occ;
    --w[sj];
    ++w[si];
    out(static_cast<Eigen::Index>(basis.index(w))) +=
        std::sqrt(static_cast<double>(occ[sj]) * static_cast<double>(occ[si] + 1)) * amp;
  }
  return out;
}

QuantumState fock_state(const BasisPtr& basis, const Occupation& occupation) {
  if (!basis) throw DomainError("fock_state requires a basis");
  if (static_cast<int>(occupation.size()) != basis->n_modes()) {
    throw DomainError("occupation " + to_string(occupation) + " has " +
                      std::to_string(occupation.size()) + " modes, basis has " +
                      std::to_string(basis->n_modes()));
  }
  const std::size_t k = basis->index(occupation);
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
  amps(static_cast<Eigen::Index>(k)) = 1.0;
  return QuantumState(basis, std::move(amps));
}

QuantumState noon_state(const BasisPtr& basis) {
  if (!basis) throw DomainError("noon_state requires a basis");
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
  // The two extremal states are the first and last entries of the ordering.
  const double a = 1.0 / std::sqrt(2.0);
  amps(0) = a;
  amps(amps.size() - 1) = a;
  return QuantumState(basis, std::move(amps));
}

QuantumState make_initial_state(const BasisPtr& basis, const InitialStateSpec& spec) {
  switch (spec.kind) {
    case InitialStateSpec::Kind::fock: {
      Occupation occ(static_cast<std::size_t>(basis->n_modes()), 0);
      occ[0] = basis->n_particles();
      return fock_state(basis, occ);
    }
    case InitialStateSpec::Kind::noon:
      return noon_state(basis);
    case InitialStateSpec::Kind::occupations:
      return fock_state(basis, spec.occupations);
  }
  throw DomainError("unknown initial state kind");
}

}  // namespace latticeqfi
