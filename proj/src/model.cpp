#include "latticeqfi/model.hpp"

#include <cmath>

#include "latticeqfi/bessel.hpp"
#include "latticeqfi/errors.hpp"

namespace latticeqfi {

namespace {

using std::numbers::pi;

void require_drive(const ModelParams& params) {
  const double w = params.drive_frequency();
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw DomainError("drive frequency must be positive, got " + std::to_string(w));
  }
}

Eigen::Index dim(const FockBasis& basis) { return static_cast<Eigen::Index>(basis.size()); }

// sum_j n_j (n_j - 1) / 2 for each basis state.
RealVector interaction_diagonal(const FockBasis& basis) {
  RealVector out(dim(basis));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double e = 0.0;
    for (int n : basis.state(k)) e += 0.5 * n * (n - 1);
    out(static_cast<Eigen::Index>(k)) = e;
  }
  return out;
}

// n_M - n_1, the telescoped sum_j (n_{j+1} - n_j).
RealVector boundary_diagonal(const FockBasis& basis) {
  RealVector out(dim(basis));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Occupation& v = basis.state(k);
    out(static_cast<Eigen::Index>(k)) = v.back() - v.front();
  }
  return out;
}

// sum_m n_m f(m) with f evaluated on 1-based site labels.
template <class F>
RealVector site_weighted_diagonal(const FockBasis& basis, F&& f) {
  const int M = basis.n_modes();
  std::vector<double> weights(static_cast<std::size_t>(M));
  for (int m = 1; m <= M; ++m) weights[static_cast<std::size_t>(m - 1)] = f(m);
  RealVector out(dim(basis));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Occupation& v = basis.state(k);
    double e = 0.0;
    for (std::size_t m = 0; m < v.size(); ++m) e += weights[m] * v[m];
    out(static_cast<Eigen::Index>(k)) = e;
  }
  return out;
}

// -t sum_j (a^dagger_{j+1} a_j e^{-i phase(j)} + h.c.) over the open chain.
template <class Phase>
Matrix chain_hopping(const FockBasis& basis, double amplitude, Phase&& phase) {
  Matrix out = Matrix::Zero(dim(basis), dim(basis));
  if (amplitude == 0.0) return out;
  for (int j = 1; j < basis.n_modes(); ++j) {
    const Complex c = -amplitude * std::polar(1.0, -phase(j));
    const Matrix forward = hop_operator(basis, j + 1, j);
    out += c * forward;
    out += std::conj(c) * forward.adjoint();
  }
  return out;
}

Matrix plain_hopping(const FockBasis& basis, double J) {
  return chain_hopping(basis, J, [](int) { return 0.0; });
}

// Sum of J^2 (J_{k-1}(x)^2 - J_{k+1}(x)^2) / k and its x-derivative.
std::pair<double, double> boundary_series(double J, double x) {
  const int kmax = 40 + static_cast<int>(2.0 * std::abs(x));
  const std::vector<double> b = bessel_j_sequence(kmax + 2, x);
  auto deriv = [&](int n) {
    const double lower = n == 0 ? -b[1] : b[static_cast<std::size_t>(n - 1)];
    return 0.5 * (lower - b[static_cast<std::size_t>(n + 1)]);
  };
  double value = 0.0;
  double slope = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double lo = b[static_cast<std::size_t>(k - 1)];
    const double hi = b[static_cast<std::size_t>(k + 1)];
    value += (lo * lo - hi * hi) / k;
    slope += 2.0 * (lo * deriv(k - 1) - hi * deriv(k + 1)) / k;
  }
  return {J * J * value, J * J * slope};
}

HermitianOperator make_operator(const BasisPtr& basis, Matrix m) {
  // Builders assemble H and H^dagger term by term; symmetrizing removes the
  // last-ulp asymmetry of the complex phases.
  Matrix sym = 0.5 * (m + m.adjoint());
  return HermitianOperator(basis, std::move(sym));
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::tilt: return "tilt";
    case ModelKind::tbh: return "tbh";
    case ModelKind::dbh: return "dbh";
    case ModelKind::effective: return "effective";
    case ModelKind::pf: return "pf";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "tilt") return ModelKind::tilt;
  if (name == "tbh") return ModelKind::tbh;
  if (name == "dbh") return ModelKind::dbh;
  if (name == "effective") return ModelKind::effective;
  if (name == "pf") return ModelKind::pf;
  throw DomainError("unknown model kind '" + std::string(name) + "'");
}

bool is_time_dependent(ModelKind kind) {
  return kind == ModelKind::dbh || kind == ModelKind::pf;
}

void validate(const ModelParams& p, const FockBasis& basis) {
  const double values[] = {p.J, p.gamma, p.U, p.V0, p.omega, p.theta, p.phi0, p.Gamma};
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("model parameters must be finite");
  }
  if (p.K && !std::isfinite(*p.K)) throw DomainError("K must be finite");
  if (!(p.J >= 0.0)) throw DomainError("J must be non-negative");
  if (p.M != basis.n_modes() || p.N != basis.n_particles()) {
    throw DomainError("basis (N=" + std::to_string(basis.n_particles()) +
                      ", M=" + std::to_string(basis.n_modes()) +
                      ") does not match parameters (N=" + std::to_string(p.N) +
                      ", M=" + std::to_string(p.M) + ")");
  }
}

double renormalized_tunneling(const ModelParams& params) {
  require_drive(params);
  return params.J * bessel_j(1, 2.0 * params.V0 / params.drive_frequency());
}

double first_order_boundary_coefficient(const ModelParams& params) {
  require_drive(params);
  return boundary_series(params.J, 2.0 * params.V0 / params.drive_frequency()).first;
}

double boundary_coefficient(const ModelParams& params) {
  return params.K ? *params.K : first_order_boundary_coefficient(params);
}

RealVector tilt_diagonal(const FockBasis& basis) {
  return site_weighted_diagonal(basis, [](int m) { return static_cast<double>(m); });
}

HermitianOperator tilt_hamiltonian(const ModelParams& params, const BasisPtr& basis) {
  validate(params, *basis);
  Matrix h = (params.gamma * tilt_diagonal(*basis)).cast<Complex>().asDiagonal();
  return HermitianOperator(basis, std::move(h));
}

HermitianOperator tbh_hamiltonian(const ModelParams& params, const BasisPtr& basis) {
  validate(params, *basis);
  Matrix h = plain_hopping(*basis, params.J);
  const RealVector diag =
      params.gamma * tilt_diagonal(*basis) + params.U * interaction_diagonal(*basis);
  h.diagonal() += diag.cast<Complex>();
  return make_operator(basis, std::move(h));
}

HermitianOperator dbh_hamiltonian_at(const ModelParams& params, const BasisPtr& basis,
                                     double t) {
  require_drive(params);
  HermitianOperator base = tbh_hamiltonian(params, basis);
  const double w = params.drive_frequency();
  const RealVector drive = site_weighted_diagonal(*basis, [&](int m) {
    return params.V0 * std::sin(w * t + params.site_phase(m) + 0.5 * params.theta);
  });
  Matrix h = base.matrix();
  h.diagonal() += drive.cast<Complex>();
  return HermitianOperator(basis, std::move(h));
}

HermitianOperator effective_hamiltonian(const ModelParams& params, const BasisPtr& basis) {
  validate(params, *basis);
  require_drive(params);
  const double w = params.drive_frequency();
  const double jf = renormalized_tunneling(params);
  Matrix h = chain_hopping(*basis, jf, [&](int j) { return params.site_phase(j); });
  RealVector diag = params.U * interaction_diagonal(*basis) +
                    (boundary_coefficient(params) / w) * boundary_diagonal(*basis);
  if (!params.co_vary_omega) diag += (params.gamma - params.omega) * tilt_diagonal(*basis);
  h.diagonal() += diag.cast<Complex>();
  return make_operator(basis, std::move(h));
}

HermitianOperator pf_hamiltonian_at(const ModelParams& params, const BasisPtr& basis,
                                    double t) {
  require_drive(params);
  ModelParams base = params;
  base.gamma = 0.0;
  Matrix h = tbh_hamiltonian(base, basis).matrix();
  const double force = params.Gamma * std::cos(params.drive_frequency() * t);
  h.diagonal() += (force * tilt_diagonal(*basis)).cast<Complex>();
  return HermitianOperator(basis, std::move(h));
}

HermitianOperator static_hamiltonian(const ModelParams& params, const BasisPtr& basis,
                                     ModelKind kind) {
  switch (kind) {
    case ModelKind::tilt: return tilt_hamiltonian(params, basis);
    case ModelKind::tbh: return tbh_hamiltonian(params, basis);
    case ModelKind::effective: return effective_hamiltonian(params, basis);
    case ModelKind::dbh:
    case ModelKind::pf:
      break;
  }
  throw DomainError("model '" + std::string(to_string(kind)) + "' is time dependent");
}

HermitianOperator hamiltonian_at(const ModelParams& params, const BasisPtr& basis,
                                 ModelKind kind, double t) {
  switch (kind) {
    case ModelKind::dbh: return dbh_hamiltonian_at(params, basis, t);
    case ModelKind::pf: return pf_hamiltonian_at(params, basis, t);
    default: return static_hamiltonian(params, basis, kind);
  }
}

HermitianOperator d_hamiltonian_d_gamma(const ModelParams& params, const BasisPtr& basis,
                                        ModelKind kind, double t) {
  validate(params, *basis);
  const Matrix tilt = tilt_diagonal(*basis).cast<Complex>().asDiagonal();
  switch (kind) {
    case ModelKind::tilt:
    case ModelKind::tbh:
      return HermitianOperator(basis, tilt);
    case ModelKind::dbh: {
      if (!params.co_vary_omega) return HermitianOperator(basis, tilt);
      const RealVector extra = site_weighted_diagonal(*basis, [&](int m) {
        return params.V0 * t *
               std::cos(params.gamma * t + params.site_phase(m) + 0.5 * params.theta);
      });
      Matrix h = tilt;
      h.diagonal() += extra.cast<Complex>();
      return HermitianOperator(basis, std::move(h));
    }
    case ModelKind::effective: {
      if (!params.co_vary_omega) return HermitianOperator(basis, tilt);
      require_drive(params);
      const double g = params.gamma;
      const double x = 2.0 * params.V0 / g;
      const double dx = -x / g;
      const double djf = params.J * bessel_j_derivative(1, x) * dx;
      Matrix h = chain_hopping(*basis, djf, [&](int j) { return params.site_phase(j); });
      double dcoef = 0.0;
      if (params.K) {
        dcoef = -*params.K / (g * g);
      } else {
        const auto [k, dk] = boundary_series(params.J, x);
        dcoef = dk * dx / g - k / (g * g);
      }
      h.diagonal() += (dcoef * boundary_diagonal(*basis)).cast<Complex>();
      return make_operator(basis, std::move(h));
    }
    case ModelKind::pf:
      break;
  }
  throw DomainError("no gamma derivative for model '" + std::string(to_string(kind)) + "'");
}

}  // namespace latticeqfi
