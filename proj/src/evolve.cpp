#include "latticeqfi/evolve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "latticeqfi/errors.hpp"

namespace latticeqfi {

EigenSystem eigensystem(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "Hermitian eigensolver did not converge (dim " << hermitian.rows()
       << ", ||H||_max " << max_abs(hermitian) << ", hermiticity defect "
       << hermiticity_defect(hermitian) << ")";
    throw NumericalError(os.str());
  }
  EigenSystem out;
  out.energies = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.scale = max_abs(hermitian);
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
      const double a = std::abs(out.vectors(i, k));
      // Strict comparison with a small margin keeps the first index on ties
      // that differ only by roundoff.
      if (a > best_abs * (1.0 + 1e-12)) {
        best_abs = a;
        best = i;
      }
    }
    const Complex pivot = out.vectors(best, k);
    out.vectors.col(k) *= std::conj(pivot) / std::abs(pivot);
    out.vectors(best, k) = Complex(std::abs(out.vectors(best, k)), 0.0);
  }
  return out;
}

EigenSystem eigensystem(const HermitianOperator& h) { return eigensystem(h.matrix()); }

Vector apply_spectral_phase(const EigenSystem& eig, const Vector& v, double t) {
  Vector coeffs = eig.vectors.adjoint() * v;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -eig.energies(k) * t);
  }
  return eig.vectors * coeffs;
}

QuantumState evolve_static(const EigenSystem& eig, const QuantumState& psi0, double t) {
  if (eig.size() != psi0.size()) throw DomainError("eigensystem and state dimensions differ");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolution time must be >= 0");
  if (t == 0.0) return psi0;
  Vector v = apply_spectral_phase(eig, psi0.amplitudes(), t);
  const double drift = std::abs(v.norm() - 1.0);
  if (drift > QuantumState::kNormTolerance) {
    throw NumericalError("static propagation lost unitarity: | |psi| - 1 | = " +
                         std::to_string(drift));
  }
  return QuantumState(psi0.basis_ptr(), std::move(v));
}

QuantumState evolve_static(const HermitianOperator& h, const QuantumState& psi0, double t) {
  if (h.size() != psi0.size()) throw DomainError("operator and state dimensions differ");
  if (t == 0.0) return psi0;
  return evolve_static(eigensystem(h), psi0, t);
}

std::size_t min_driven_steps(double T, double omega, int steps_per_period) {
  const double n = std::ceil(T * omega * steps_per_period / (2.0 * std::numbers::pi) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(0.0, n)));
}

HamiltonianFamily hamiltonian_family(const ModelParams& params, const BasisPtr& basis,
                                     ModelKind kind) {
  if (!is_time_dependent(kind)) {
    Matrix h = static_hamiltonian(params, basis, kind).matrix();
    return [h = std::move(h)](double) { return h; };
  }
  // Both families are a static operator plus a time-dependent diagonal.
  ModelParams quiet = params;
  if (kind == ModelKind::dbh) {
    quiet.V0 = 0.0;
  } else {
    quiet.Gamma = 0.0;
  }
  const Matrix stat = hamiltonian_at(quiet, basis, kind, 0.0).matrix();
  return [params, basis, kind, stat](double t) {
    Matrix h = stat;
    ModelParams p = params;
    if (kind == ModelKind::dbh) {
      const double w = p.drive_frequency();
      for (std::size_t k = 0; k < basis->size(); ++k) {
        const Occupation& v = basis->state(k);
        double e = 0.0;
        for (int m = 1; m <= basis->n_modes(); ++m) {
          e += v[static_cast<std::size_t>(m - 1)] *
               std::sin(w * t + p.site_phase(m) + 0.5 * p.theta);
        }
        h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += p.V0 * e;
      }
    } else {
      const double force = p.Gamma * std::cos(p.drive_frequency() * t);
      for (std::size_t k = 0; k < basis->size(); ++k) {
        const Occupation& v = basis->state(k);
        double e = 0.0;
        for (int m = 1; m <= basis->n_modes(); ++m) e += m * v[static_cast<std::size_t>(m - 1)];
        h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += force * e;
      }
    }
    return h;
  };
}

Vector midpoint_step(const HamiltonianFamily& family, const Vector& v, double t, double h) {
  const EigenSystem eig = eigensystem(family(t + 0.5 * h));
  return apply_spectral_phase(eig, v, h);
}

QuantumState evolve_family(const HamiltonianFamily& family, const QuantumState& psi0,
                           double t0, double t1, std::size_t steps) {
  if (steps == 0) throw ConfigError("step count must be positive");
  if (!(t1 >= t0)) throw DomainError("final time precedes start time");
  Vector v = psi0.amplitudes();
  const double h = (t1 - t0) / static_cast<double>(steps);
  if (h > 0.0) {
    for (std::size_t s = 0; s < steps; ++s) {
      v = midpoint_step(family, v, t0 + static_cast<double>(s) * h, h);
    }
  }
  const double drift = std::abs(v.norm() - 1.0);
  if (drift > QuantumState::kNormTolerance) {
    throw NumericalError("propagation lost unitarity: | |psi| - 1 | = " + std::to_string(drift));
  }
  return QuantumState(psi0.basis_ptr(), std::move(v));
}

QuantumState evolve_driven(const ModelParams& params, const BasisPtr& basis,
                           const QuantumState& psi0, double T, std::size_t steps,
                           ModelKind kind) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("final time must be >= 0");
  validate(params, *basis);
  const double w = params.drive_frequency();
  if (!(w > 0.0)) throw DomainError("drive frequency must be positive");
  const std::size_t floor = min_driven_steps(T, w);
  if (steps < floor) {
    throw ConfigError("driven evolution to T=" + std::to_string(T) + " needs at least " +
                      std::to_string(floor) + " steps (" + std::to_string(kMinStepsPerPeriod) +
                      " per drive period), got " + std::to_string(steps));
  }
  return evolve_family(hamiltonian_family(params, basis, kind), psi0, 0.0, T, steps);
}

std::vector<QuantumState> trajectory(const ModelParams& params, const BasisPtr& basis,
                                     ModelKind kind, const QuantumState& psi0,
                                     const std::vector<double>& times, int steps_per_period) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1]))) {
      throw DomainError("sample times must be finite, >= 0 and strictly increasing");
    }
  }
  validate(params, *basis);
  std::vector<QuantumState> out;
  out.reserve(times.size());
  if (!is_time_dependent(kind)) {
    const EigenSystem eig = eigensystem(static_hamiltonian(params, basis, kind));
    for (double t : times) out.push_back(evolve_static(eig, psi0, t));
    return out;
  }
  if (steps_per_period < kMinStepsPerPeriod) {
    throw ConfigError("steps_per_period must be at least " + std::to_string(kMinStepsPerPeriod));
  }
  const double w = params.drive_frequency();
  if (!(w > 0.0)) throw DomainError("drive frequency must be positive");
  const HamiltonianFamily family = hamiltonian_family(params, basis, kind);
  const double h0 = 2.0 * std::numbers::pi / (w * steps_per_period);
  Vector v = psi0.amplitudes();
  std::size_t k = 0;
  for (double t : times) {
    auto full = static_cast<std::size_t>(std::floor(t / h0));
    while (full > 0 && static_cast<double>(full) * h0 > t) --full;
    while (static_cast<double>(full + 1) * h0 <= t) ++full;
    for (; k < full; ++k) v = midpoint_step(family, v, static_cast<double>(k) * h0, h0);
    const double t0 = static_cast<double>(full) * h0;
    Vector x = t > t0 ? midpoint_step(family, v, t0, t - t0) : v;
    const double drift = std::abs(x.norm() - 1.0);
    if (drift > QuantumState::kNormTolerance) {
      throw NumericalError("propagation lost unitarity: | |psi| - 1 | = " + std::to_string(drift));
    }
    out.emplace_back(basis, std::move(x));
  }
  return out;
}

}  // namespace latticeqfi
