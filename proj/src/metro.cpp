#include "latticeqfi/metro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "latticeqfi/errors.hpp"

namespace latticeqfi {

namespace {

// e^{i t E/2} sin(t E/2) / E, with the E -> 0 limit t/2 below `gap`.
Complex oscillation_kernel(double e, double t, double gap) {
  if (std::abs(e) < gap) return Complex(0.5 * t, 0.0);
  return std::polar(1.0, 0.5 * t * e) * (std::sin(0.5 * t * e) / e);
}

double degeneracy_gap(const EigenSystem& eig) {
  return kDegeneracyTolerance * std::max(eig.scale, std::numeric_limits<double>::min());
}

double variance_of(const Vector& psi, const Vector& h_psi) {
  const double second = h_psi.squaredNorm();
  const double first = std::norm(psi.dot(h_psi));
  return second - first;
}

void check_dims(const EigenSystem& eig, Eigen::Index n) {
  if (static_cast<Eigen::Index>(eig.size()) != n) {
    throw DomainError("eigensystem and operator dimensions differ");
  }
}

}  // namespace

std::string_view to_string(QfiMethod method) {
  switch (method) {
    case QfiMethod::finite_difference: return "finite-difference";
    case QfiMethod::generator: return "generator";
    case QfiMethod::generator_two_level: return "generator-two-level";
  }
  return "unknown";
}

QfiMethod parse_qfi_method(std::string_view name) {
  if (name == "finite-difference" || name == "fd") return QfiMethod::finite_difference;
  if (name == "generator") return QfiMethod::generator;
  if (name == "generator-two-level") return QfiMethod::generator_two_level;
  throw DomainError("unknown QFI method '" + std::string(name) + "'");
}

GeneratorParts generator_parts(const EigenSystem& eig, const Matrix& dh, double t) {
  check_dims(eig, dh.rows());
  const Eigen::Index n = dh.rows();
  const Matrix d = eig.vectors.adjoint() * dh * eig.vectors;
  const double gap = degeneracy_gap(eig);

  Matrix lin = Matrix::Zero(n, n);
  Matrix osc = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    lin(k, k) = t * d(k, k).real();
    for (Eigen::Index l = 0; l < n; ++l) {
      if (l == k) continue;
      const double ekl = eig.energies(k) - eig.energies(l);
      osc(k, l) = 2.0 * oscillation_kernel(ekl, t, gap) * d(k, l);
    }
  }
  GeneratorParts parts;
  parts.t = t;
  parts.linear = eig.vectors * lin * eig.vectors.adjoint();
  parts.oscillating = eig.vectors * osc * eig.vectors.adjoint();
  return parts;
}

GeneratorParts generator_parts(const EigenSystem& eig, const HermitianOperator& dh, double t) {
  return generator_parts(eig, dh.matrix(), t);
}

double variance(const Vector& psi, const Matrix& h) {
  return variance_of(psi, h * psi);
}

GeneratorQfi qfi_from_generator(const QuantumState& psi0, const GeneratorParts& parts) {
  const Vector& psi = psi0.amplitudes();
  if (parts.linear.rows() != psi.size()) throw DomainError("generator and state dimensions differ");
  const Vector lin = parts.linear * psi;
  const Vector osc = parts.oscillating * psi;
  GeneratorQfi out;
  out.F = 4.0 * variance_of(psi, lin + osc);
  out.var_linear = variance_of(psi, lin);
  out.var_oscillating = variance_of(psi, osc);
  return out;
}

double optimal_qfi(const Matrix& generator) {
  const Matrix sym = 0.5 * (generator + generator.adjoint());
  const EigenSystem eig = eigensystem(sym);
  const double spread = eig.energies.maxCoeff() - eig.energies.minCoeff();
  return spread * spread;
}

double optimal_qfi(const GeneratorParts& parts) { return optimal_qfi(parts.full()); }

double heisenberg_limit(int n_particles, int n_modes, double T) {
  if (n_particles < 1 || n_modes < 2) throw DomainError("need N >= 1 and M >= 2");
  if (!(T >= 0.0)) throw DomainError("time must be >= 0");
  const double w = T * n_particles * (n_modes - 1);
  return w * w;
}

double cramer_rao(double F, double repetitions) {
  if (!(F > 0.0)) throw DomainError("Cramer-Rao bound is unbounded for F <= 0");
  if (!(repetitions >= 1.0)) throw DomainError("repetitions must be >= 1");
  return 1.0 / std::sqrt(repetitions * F);
}

DominantPair dominant_pair(const EigenSystem& eig, const QuantumState& psi0) {
  const auto n = eig.size();
  if (n < 2) throw DomainError("dominant pair needs dimension >= 2");
  check_dims(eig, static_cast<Eigen::Index>(psi0.size()));
  const Vector coeffs = eig.vectors.adjoint() * psi0.amplitudes();
  // Scanning upward and replacing only on a strictly larger overlap keeps the
  // lower energy index among ties.
  auto pop = [&](std::size_t k) { return std::norm(coeffs(static_cast<Eigen::Index>(k))); };
  auto pick = [&](std::size_t skip) {
    std::size_t best = skip == 0 ? 1 : 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != skip && pop(k) > pop(best) + 1e-12) best = k;
    }
    return best;
  };
  DominantPair out;
  out.first = pick(n);
  out.second = pick(out.first);
  out.tie = std::abs(pop(out.first) - pop(out.second)) <= 1e-12;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != out.first && k != out.second && std::abs(pop(k) - pop(out.second)) <= 1e-12) {
      out.tie = true;
    }
  }
  return out;
}

TwoLevelGenerator two_level_generator(const EigenSystem& eig, const QuantumState& psi0,
                                      const HermitianOperator& dh, double t) {
  if (eig.size() < 3) throw DomainError("two-level generator needs dimension >= 3");
  const DominantPair pair = dominant_pair(eig, psi0);
  TwoLevelGenerator out;
  out.first = pair.first;
  out.second = pair.second;
  out.tie = pair.tie;
  out.omega = std::abs(eig.energies(static_cast<Eigen::Index>(out.first)) -
                       eig.energies(static_cast<Eigen::Index>(out.second)));
  out.tau_estimate = out.omega > 0.0 ? std::numbers::pi / out.omega
                                     : std::numeric_limits<double>::infinity();

  const GeneratorParts full = generator_parts(eig, dh, t);
  // Project the oscillating part onto the selected 2x2 eigen-block.
  const Matrix osc_eigen = eig.vectors.adjoint() * full.oscillating * eig.vectors;
  Matrix restricted = Matrix::Zero(osc_eigen.rows(), osc_eigen.cols());
  const auto a = static_cast<Eigen::Index>(out.first);
  const auto b = static_cast<Eigen::Index>(out.second);
  restricted(a, b) = osc_eigen(a, b);
  restricted(b, a) = osc_eigen(b, a);
  out.parts.t = t;
  out.parts.linear = full.linear;
  out.parts.oscillating = eig.vectors * restricted * eig.vectors.adjoint();
  return out;
}

GeneratorSeriesEvaluator::GeneratorSeriesEvaluator(const EigenSystem& eig,
                                                   const HermitianOperator& dh,
                                                   const QuantumState& psi0)
    : energies_(eig.energies),
      dh_eigen_(eig.vectors.adjoint() * dh.matrix() * eig.vectors),
      coeffs_(eig.vectors.adjoint() * psi0.amplitudes()),
      degeneracy_gap_(degeneracy_gap(eig)) {
  check_dims(eig, dh.matrix().rows());
  check_dims(eig, static_cast<Eigen::Index>(psi0.size()));
}

void GeneratorSeriesEvaluator::restrict_to_pair(std::size_t a, std::size_t b) {
  if (a == b || a >= static_cast<std::size_t>(energies_.size()) ||
      b >= static_cast<std::size_t>(energies_.size())) {
    throw DomainError("invalid eigenpair for restriction");
  }
  restricted_ = true;
  pair_a_ = a;
  pair_b_ = b;
}

GeneratorQfi GeneratorSeriesEvaluator::at(double t) const {
  const Eigen::Index n = energies_.size();
  Vector lin(n);
  Vector osc = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) lin(k) = t * dh_eigen_(k, k).real() * coeffs_(k);

  auto add = [&](Eigen::Index k, Eigen::Index l) {
    const double ekl = energies_(k) - energies_(l);
    osc(k) += 2.0 * oscillation_kernel(ekl, t, degeneracy_gap_) * dh_eigen_(k, l) * coeffs_(l);
  };
  if (restricted_) {
    const auto a = static_cast<Eigen::Index>(pair_a_);
    const auto b = static_cast<Eigen::Index>(pair_b_);
    add(a, b);
    add(b, a);
  } else {
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = 0; l < n; ++l) {
        if (l != k) add(k, l);
      }
    }
  }
  GeneratorQfi out;
  out.F = 4.0 * variance_of(coeffs_, lin + osc);
  out.var_linear = variance_of(coeffs_, lin);
  out.var_oscillating = variance_of(coeffs_, osc);
  return out;
}

Evolver static_evolver(ModelKind kind, const BasisPtr& basis, const QuantumState& psi0, double T) {
  return [kind, basis, psi0, T](const ModelParams& p) {
    return evolve_static(static_hamiltonian(p, basis, kind), psi0, T);
  };
}

Evolver driven_evolver(ModelKind kind, const BasisPtr& basis, const QuantumState& psi0, double T,
                       std::size_t steps) {
  return [kind, basis, psi0, T, steps](const ModelParams& p) {
    const std::size_t n = steps ? steps : min_driven_steps(T, p.drive_frequency());
    return evolve_driven(p, basis, psi0, T, n, kind);
  };
}

double qfi_from_states(const Vector& minus, const Vector& center, const Vector& plus, double step) {
  const Vector d = (plus - minus) / (2.0 * step);
  return 4.0 * (d.squaredNorm() - std::norm(center.dot(d)));
}

FdEstimate qfi_finite_difference(const Evolver& evolver, const ModelParams& params, double dgamma) {
  if (!(dgamma > 0.0) || !std::isfinite(dgamma)) throw DomainError("dgamma must be positive");
  const double resolution = 1e3 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::abs(params.gamma));
  if (dgamma / 2.0 < resolution) {
    std::ostringstream os;
    os << "gamma step " << dgamma << " is below the resolvable increment " << resolution
       << " at gamma = " << params.gamma;
    throw NumericalError(os.str());
  }
  auto at = [&](double shift) {
    ModelParams p = params;
    p.gamma += shift;
    return evolver(p).amplitudes();
  };
  const Vector center = at(0.0);
  const Vector plus = at(dgamma);
  const Vector minus = at(-dgamma);
  const Vector plus_half = at(0.5 * dgamma);
  const Vector minus_half = at(-0.5 * dgamma);

  return fd_estimate(minus, minus_half, center, plus_half, plus, dgamma);
}

FdEstimate fd_estimate(const Vector& minus, const Vector& minus_half, const Vector& center,
                       const Vector& plus_half, const Vector& plus, double dgamma) {
  FdEstimate out;
  out.F = qfi_from_states(minus, center, plus, dgamma);
  out.F_half = qfi_from_states(minus_half, center, plus_half, 0.5 * dgamma);
  const double scale = std::max({std::abs(out.F), std::abs(out.F_half), 1e-6});
  if (std::abs(out.F - out.F_half) > 1e-4 * scale) {
    out.consistent = false;
    std::ostringstream os;
    os << "finite-difference QFI not converged: F(d)=" << out.F << " F(d/2)=" << out.F_half
       << " at dgamma=" << dgamma;
    out.warning = os.str();
  }
  return out;
}

double default_gamma_step(double T, double dh_max_norm) {
  return 3e-4 / std::max(1.0, std::abs(T) * std::abs(dh_max_norm));
}

}  // namespace latticeqfi
