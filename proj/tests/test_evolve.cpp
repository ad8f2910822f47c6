#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "latticeqfi/errors.hpp"
#include "latticeqfi/evolve.hpp"
#include "latticeqfi/model.hpp"
#include "oracles.hpp"

using namespace latticeqfi;

namespace {

ModelParams sized(int n, int m) {
  ModelParams p;
  p.N = n;
  p.M = m;
  return p;
}

Matrix random_hermitian(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

QuantumState random_state(const BasisPtr& b, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(b->size());
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return QuantumState::normalized(b, v);
}

double fidelity(const Vector& a, const Vector& b) { return std::norm(a.dot(b)); }

}  // namespace

TEST_CASE("eigensystem of a diagonal matrix") {
  Matrix h = Matrix::Zero(4, 4);
  h.diagonal() << 3.0, -1.0, 2.0, 0.5;
  const EigenSystem e = eigensystem(h);
  CHECK(e.energies(0) == -1.0);
  CHECK(e.energies(1) == 0.5);
  CHECK(e.energies(2) == 2.0);
  CHECK(e.energies(3) == 3.0);
  for (Eigen::Index k = 0; k < 4; ++k) {
    CHECK(e.vectors.col(k).cwiseAbs().maxCoeff() == 1.0);
    CHECK(e.vectors.col(k).cwiseAbs().sum() == 1.0);
  }
}

TEST_CASE("two-site hopping") {
  Matrix h(2, 2);
  h << 0.0, -1.4, -1.4, 0.0;
  const EigenSystem e = eigensystem(h);
  CHECK(e.energies(0) == doctest::Approx(-1.4).epsilon(1e-15));
  CHECK(e.energies(1) == doctest::Approx(1.4).epsilon(1e-15));
}

TEST_CASE("spectral invariants and the phase convention") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const Matrix h = random_hermitian(12, seed);
    const EigenSystem e = eigensystem(h);
    const double scale = max_abs(h);
    CHECK(max_abs(h * e.vectors - e.vectors * e.energies.asDiagonal()) <= 1e-9 * scale);
    CHECK(max_abs(e.vectors.adjoint() * e.vectors - Matrix::Identity(12, 12)) <= 1e-10);
    CHECK(max_abs(e.vectors * e.energies.asDiagonal() * e.vectors.adjoint() - h) <= 1e-9 * scale);
    for (Eigen::Index k = 1; k < 12; ++k) CHECK(e.energies(k) >= e.energies(k - 1));
    for (Eigen::Index k = 0; k < 12; ++k) {
      Eigen::Index i = 0;
      e.vectors.col(k).cwiseAbs().maxCoeff(&i);
      CHECK(e.vectors(i, k).imag() == 0.0);
      CHECK(e.vectors(i, k).real() > 0.0);
    }
    // Deterministic: same input, same bits.
    CHECK(eigensystem(h).vectors == e.vectors);
  }
}

TEST_CASE("static evolution against an independent matrix exponential") {
  ModelParams p = sized(3, 3);
  p.U = 1.3;
  const BasisPtr b = build_basis(3, 3);
  const HermitianOperator h = effective_hamiltonian(p, b);
  const QuantumState psi = random_state(b, 11);
  for (double t : {0.1, 1.0, 7.5, 40.0}) {
    const Vector ref = oracle::propagate(h.matrix(), t, psi.amplitudes());
    CHECK((evolve_static(h, psi, t).amplitudes() - ref).norm() <= 1e-10);
  }
  CHECK(evolve_static(h, psi, 0.0).amplitudes() == psi.amplitudes());
  CHECK_THROWS_AS(evolve_static(h, psi, -1.0), DomainError);
}

TEST_CASE("tilt-only NOON dynamics acquire the relative phase gamma N (M - 1) t") {
  ModelParams p = sized(2, 4);
  p.gamma = 1.7;
  const BasisPtr b = build_basis(2, 4);
  const QuantumState noon = noon_state(b);
  const double t = 0.9;
  const Vector v = evolve_static(tilt_hamiltonian(p, b), noon, t).amplitudes();
  const Complex first = v(0);
  const Complex last = v(b->size() - 1);
  const Complex expected = std::polar(1.0, -t * p.gamma * 2 * 3);
  CHECK(std::abs(last / first - expected) <= 1e-12);
}

TEST_CASE("Fock eigenstates only pick up a global phase") {
  ModelParams p = sized(3, 3);
  p.U = 2.0;
  p.J = 0.0;
  const BasisPtr b = build_basis(3, 3);
  const QuantumState f = fock_state(b, {1, 2, 0});
  const Vector v = evolve_static(tbh_hamiltonian(p, b), f, 3.3).amplitudes();
  CHECK(std::abs(std::abs(v(b->index({1, 2, 0}))) - 1.0) <= 1e-14);
}

TEST_CASE("composition, unitarity and energy conservation") {
  ModelParams p = sized(3, 4);
  p.U = 0.7;
  const BasisPtr b = build_basis(3, 4);
  const HermitianOperator h = tbh_hamiltonian(p, b);
  const EigenSystem e = eigensystem(h);
  const QuantumState psi = random_state(b, 5);
  const double e0 = psi.amplitudes().dot(h.matrix() * psi.amplitudes()).real();
  for (auto [t1, t2] : {std::pair{0.3, 1.1}, std::pair{5.0, 2.5}}) {
    const QuantumState once = evolve_static(e, psi, t1 + t2);
    const QuantumState twice = evolve_static(e, evolve_static(e, psi, t1), t2);
    CHECK((once.amplitudes() - twice.amplitudes()).norm() <= 1e-10);
    CHECK(fidelity(once.amplitudes(), twice.amplitudes()) >= 1 - 1e-12);
    CHECK(std::abs(once.norm() - 1.0) <= 1e-10);
    const double et = once.amplitudes().dot(h.matrix() * once.amplitudes()).real();
    CHECK(std::abs(et - e0) <= 1e-9 * h.max_norm());
  }
}

TEST_CASE("driven step floor") {
  ModelParams p = sized(1, 2);
  const BasisPtr b = build_basis(1, 2);
  const QuantumState psi = fock_state(b, {1, 0});
  const double T = 2.0;
  const std::size_t floor = min_driven_steps(T, p.omega);
  CHECK(floor == static_cast<std::size_t>(std::ceil(T * p.omega * 40 / (2 * std::numbers::pi))));
  CHECK_NOTHROW(evolve_driven(p, b, psi, T, floor));
  try {
    evolve_driven(p, b, psi, T, floor - 1);
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(std::to_string(floor)) != std::string::npos);
  }
}

TEST_CASE("driven chain without drive matches static evolution") {
  ModelParams p = sized(2, 3);
  p.V0 = 0.0;
  p.U = 0.5;
  const BasisPtr b = build_basis(2, 3);
  const QuantumState psi = fock_state(b, {2, 0, 0});
  const double T = 1.5;
  const Vector d = evolve_driven(p, b, psi, T, min_driven_steps(T, p.omega)).amplitudes();
  const Vector s = evolve_static(tbh_hamiltonian(p, b), psi, T).amplitudes();
  CHECK(fidelity(d, s) >= 1 - 1e-8);
}

TEST_CASE("midpoint scheme converges at second order") {
  ModelParams p = sized(2, 3);
  p.U = 1.0;
  const BasisPtr b = build_basis(2, 3);
  const QuantumState psi = fock_state(b, {2, 0, 0});
  const double T = 1.0;
  const std::size_t n = 4 * min_driven_steps(T, p.omega);
  const Vector a = evolve_driven(p, b, psi, T, n).amplitudes();
  const Vector c = evolve_driven(p, b, psi, T, 2 * n).amplitudes();
  const Vector d = evolve_driven(p, b, psi, T, 4 * n).amplitudes();
  const double order = std::log2((a - c).norm() / (c - d).norm());
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("norm after 10^4 driven steps") {
  ModelParams p = sized(3, 3);
  p.U = 1.92;
  const BasisPtr b = build_basis(3, 3);
  const QuantumState psi = fock_state(b, {3, 0, 0});
  const double T = 10000.0 * 2 * std::numbers::pi / (p.omega * 40);
  const QuantumState out = evolve_driven(p, b, psi, T, 10000);
  CHECK(std::abs(out.norm() - 1.0) <= 1e-10);
}

TEST_CASE("stroboscopic agreement with the effective model") {
  const BasisPtr b = build_basis(3, 3);
  const QuantumState psi = fock_state(b, {3, 0, 0});
  auto worst = [&](double U, std::optional<double> K) {
    ModelParams p = sized(3, 3);
    p.U = U;
    p.K = K;
    // Micromotion kick at t = 0: exp(-i Theta), Theta = -(V0/omega) sum_m n_m cos(phi_m + theta/2).
    Vector kick(b->size());
    for (std::size_t k = 0; k < b->size(); ++k) {
      double theta = 0.0;
      for (int m = 1; m <= 3; ++m) {
        theta -= p.V0 / p.omega * b->state(k)[m - 1] * std::cos(p.site_phase(m) + p.theta / 2);
      }
      kick(k) = std::polar(1.0, -theta);
    }
    const EigenSystem e = eigensystem(effective_hamiltonian(p, b));
    const double period = 2 * std::numbers::pi / p.omega;
    std::vector<double> times;
    for (int n : {1, 10, 50, 100}) times.push_back(n * period);
    const std::vector<QuantumState> d = trajectory(p, b, ModelKind::dbh, psi, times, 80);
    double f = 1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Vector eff = kick.asDiagonal() * evolve_static(e, psi, times[i]).amplitudes();
      f = std::min(f, fidelity(d[i].amplitudes(), eff));
    }
    return f;
  };
  CHECK(worst(0.0, 0.0) >= 0.9);
  CHECK(worst(0.0, std::nullopt) >= 0.9);
  CHECK(worst(1.92, std::nullopt) >= 0.9);
}

TEST_CASE("trajectory samples are independent of the rest of the axis") {
  ModelParams p = sized(2, 3);
  p.U = 0.4;
  const BasisPtr b = build_basis(2, 3);
  const QuantumState psi = fock_state(b, {2, 0, 0});
  const std::vector<double> axis{0.0, 0.05, 0.31, 0.77, 1.2};
  const std::vector<QuantumState> all = trajectory(p, b, ModelKind::dbh, psi, axis);
  CHECK(all[0].amplitudes() == psi.amplitudes());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const std::vector<QuantumState> one = trajectory(p, b, ModelKind::dbh, psi, {axis[i]});
    CHECK(one[0].amplitudes() == all[i].amplitudes());
  }
  const std::vector<QuantumState> st = trajectory(p, b, ModelKind::tbh, psi, axis);
  CHECK((st[3].amplitudes() - evolve_static(tbh_hamiltonian(p, b), psi, 0.77).amplitudes()).norm() <=
        1e-12);
  CHECK_THROWS_AS(trajectory(p, b, ModelKind::dbh, psi, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(trajectory(p, b, ModelKind::dbh, psi, {1.0}, 20), ConfigError);
}
