#include "latticeqfi/observe.hpp"

#include <cmath>
#include <numbers>

#include "latticeqfi/errors.hpp"

namespace latticeqfi {

Complex correlator_amplitude(const QuantumState& psi) {
  const FockBasis& basis = psi.basis();
  Vector v = psi.amplitudes();
  for (int k = 0; k < basis.n_particles(); ++k) v = apply_hop(basis, basis.n_modes(), 1, v);
  return psi.amplitudes().dot(v);
}

double correlator(const QuantumState& psi) {
  const double c = std::tgamma(psi.basis().n_particles() + 1.0) / 2.0;
  return std::abs(correlator_amplitude(psi)) / c;
}

RealVector occupations(const QuantumState& psi) {
  const FockBasis& basis = psi.basis();
  RealVector out = RealVector::Zero(basis.n_modes());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double p = std::norm(psi.amplitudes()(static_cast<Eigen::Index>(k)));
    const Occupation& v = basis.state(k);
    for (std::size_t m = 0; m < v.size(); ++m) out(static_cast<Eigen::Index>(m)) += p * v[m];
  }
  return out;
}

RealVector eigenstate_overlaps(const QuantumState& psi0, const EigenSystem& eig) {
  if (eig.size() != psi0.size()) throw DomainError("eigensystem and state dimensions differ");
  const Vector c = eig.vectors.adjoint() * psi0.amplitudes();
  return c.cwiseAbs2();
}

GapEstimate spectral_gap_tau(const EigenSystem& eig, const RealVector& overlaps) {
  const auto n = static_cast<Eigen::Index>(eig.size());
  if (n < 2) throw DomainError("spectral gap needs dimension >= 2");
  if (overlaps.size() != n) throw DomainError("overlap vector does not match eigensystem");

  Eigen::Index first = 0;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (overlaps(k) > overlaps(first)) first = k;
  }
  Eigen::Index second = first == 0 ? 1 : 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k != first && overlaps(k) > overlaps(second)) second = k;
  }

  GapEstimate out;
  out.first = static_cast<std::size_t>(first);
  out.second = static_cast<std::size_t>(second);
  out.omega = std::abs(eig.energies(first) - eig.energies(second));
  out.concentrated = overlaps(first) >= kConcentratedOverlap;
  if (out.omega <= 1e-14 * eig.scale) {
    throw NumericalError("dominant eigenpair is degenerate (Omega = " +
                         std::to_string(out.omega) + "); tau estimate undefined");
  }
  out.tau_estimate = std::numbers::pi / out.omega;
  return out;
}

}  // namespace latticeqfi
