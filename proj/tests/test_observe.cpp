#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"
#include "latticeqfi/errors.hpp"
#include "latticeqfi/metro.hpp"
#include "latticeqfi/model.hpp"
#include "latticeqfi/observe.hpp"

using namespace latticeqfi;

namespace {

ModelParams sized(int n, int m) {
  ModelParams p;
  p.N = n;
  p.M = m;
  return p;
}

QuantumState random_state(const BasisPtr& b, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(b->size());
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return QuantumState::normalized(b, v);
}

// (a^dag_M a_1)^N only connects |N,0,...,0> to |0,...,0,N>, with amplitude N!.
double summed_correlator(const QuantumState& psi) {
  const auto& b = psi.basis();
  const auto& v = psi.amplitudes();
  const int n = b.n_particles();
  REQUIRE(b.state(0).front() == n);
  REQUIRE(b.state(b.size() - 1).back() == n);
  const auto last = static_cast<Eigen::Index>(b.size() - 1);
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  const Complex amp = factorial * std::conj(v(last)) * v(0);
  return std::abs(amp) / (factorial / 2.0);
}

}  // namespace

TEST_CASE("correlator on NOON and Fock states") {
  for (int n = 1; n <= 4; ++n) {
    for (int m = 2; m <= 4; ++m) {
      const BasisPtr b = build_basis(n, m);
      CHECK(correlator(noon_state(b)) == doctest::Approx(1.0).epsilon(1e-12));
      Occupation top(static_cast<std::size_t>(m), 0);
      top[0] = n;
      CHECK(correlator(fock_state(b, top)) == 0.0);
    }
  }
}

TEST_CASE("correlator stays at one for NOON under frozen dynamics") {
  ModelParams p = sized(3, 3);
  p.J = 0.0;
  const BasisPtr b = build_basis(3, 3);
  const EigenSystem e = eigensystem(tilt_hamiltonian(p, b));
  for (double t : {0.1, 1.0, 17.3, 250.0}) {
    CHECK(std::abs(correlator(evolve_static(e, noon_state(b), t)) - 1.0) <= 1e-9);
  }
}

TEST_CASE("correlator against direct amplitude summation") {
  ModelParams p = sized(3, 3);
  const BasisPtr b = build_basis(3, 3);
  const QuantumState psi0 = fock_state(b, {3, 0, 0});
  for (double u : {0.0, 0.96, 1.92, 3.0}) {
    p.U = u;
    const EigenSystem e = eigensystem(effective_hamiltonian(p, b));
    for (double t : {5.0, 30.0, 62.0}) {
      const QuantumState psi = evolve_static(e, psi0, t);
      const double g = correlator(psi);
      CHECK(g == doctest::Approx(summed_correlator(psi)).epsilon(1e-10));
      CHECK(g >= 0.0);
      CHECK(g <= 1.0 + 1e-9);
    }
  }
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const BasisPtr b4 = build_basis(4, 3);
    const QuantumState r = random_state(b4, seed);
    CHECK(correlator(r) == doctest::Approx(summed_correlator(r)).epsilon(1e-10));
    CHECK(std::abs(correlator_amplitude(r)) == doctest::Approx(12.0 * summed_correlator(r)));
  }
}

TEST_CASE("occupations") {
  const BasisPtr b = build_basis(3, 3);
  const RealVector n = occupations(fock_state(b, {3, 0, 0}));
  CHECK(n(0) == 3.0);
  CHECK(n(1) == 0.0);
  CHECK(n(2) == 0.0);
  const RealVector noon = occupations(noon_state(build_basis(2, 2)));
  CHECK(noon(0) == doctest::Approx(1.0));
  CHECK(noon(1) == doctest::Approx(1.0));
}

TEST_CASE("occupations are conserved along evolutions") {
  ModelParams p = sized(3, 3);
  p.U = 1.92;
  const BasisPtr b = build_basis(3, 3);
  const QuantumState psi0 = fock_state(b, {3, 0, 0});
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(0.4 * i);
  for (ModelKind kind : {ModelKind::effective, ModelKind::dbh}) {
    for (const QuantumState& psi : trajectory(p, b, kind, psi0, times)) {
      CHECK(std::abs(occupations(psi).sum() - 3.0) <= 1e-9);
      CHECK(correlator(psi) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("first and last sites approach each other near the peak") {
  ModelParams p = sized(3, 3);
  p.U = 1.92;
  const BasisPtr b = build_basis(3, 3);
  const QuantumState psi = evolve_static(effective_hamiltonian(p, b), fock_state(b, {3, 0, 0}), 62.1);
  const RealVector n = occupations(psi);
  CHECK(std::abs(n(0) - n(2)) < 0.5);
}

TEST_CASE("eigenstate overlaps") {
  ModelParams p = sized(3, 3);
  p.U = 1.92;
  const BasisPtr b = build_basis(3, 3);
  const EigenSystem e = eigensystem(effective_hamiltonian(p, b));
  for (Eigen::Index k = 0; k < 10; k += 3) {
    const RealVector ov = eigenstate_overlaps(QuantumState(b, e.vectors.col(k)), e);
    for (Eigen::Index j = 0; j < 10; ++j) CHECK(ov(j) == doctest::Approx(j == k ? 1.0 : 0.0));
  }
  for (unsigned seed = 3; seed < 8; ++seed) {
    const RealVector ov = eigenstate_overlaps(random_state(b, seed), e);
    CHECK(std::abs(ov.sum() - 1.0) <= 1e-10);
    CHECK(ov.minCoeff() >= 0.0);
  }

  // Rephasing eigenvectors leaves the overlaps untouched.
  EigenSystem rotated = e;
  for (Eigen::Index k = 0; k < 10; ++k) rotated.vectors.col(k) *= std::polar(1.0, 0.37 * k);
  const QuantumState psi0 = fock_state(b, {3, 0, 0});
  const RealVector a = eigenstate_overlaps(psi0, e);
  const RealVector c = eigenstate_overlaps(psi0, rotated);
  CHECK((a - c).cwiseAbs().maxCoeff() <= 1e-14);

  RealVector sorted = a;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  CHECK(sorted(0) == doctest::Approx(0.72).epsilon(0.08 / 0.72));
  CHECK(sorted(1) == doctest::Approx(0.17).epsilon(0.08 / 0.17));
}

TEST_CASE("spectral gap estimate") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = std::numbers::pi;
  const EigenSystem e = eigensystem(h);
  RealVector ov(2);
  ov << 0.5, 0.5;
  const GapEstimate g = spectral_gap_tau(e, ov);
  CHECK(g.omega == doctest::Approx(std::numbers::pi));
  CHECK(g.tau_estimate == doctest::Approx(1.0));
  CHECK_FALSE(g.concentrated);

  Matrix h3 = Matrix::Zero(3, 3);
  h3.diagonal() << 0.0, 1.0, 2.5;
  RealVector peaked(3);
  peaked << 0.001, 0.995, 0.004;
  const GapEstimate c = spectral_gap_tau(eigensystem(h3), peaked);
  CHECK(c.concentrated);
  CHECK(c.first == 1);
  CHECK(c.second == 2);
  CHECK(c.omega == doctest::Approx(1.5));

  Matrix flat = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(spectral_gap_tau(eigensystem(flat), ov), NumericalError);
}
