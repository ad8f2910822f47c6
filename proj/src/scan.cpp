#include "latticeqfi/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "latticeqfi/errors.hpp"
#include "latticeqfi/observe.hpp"

namespace latticeqfi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_axis(std::span<const double> axis, const char* name, bool nonnegative) {
  if (axis.empty()) throw DomainError(std::string(name) + " axis is empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw DomainError(std::string(name) + " axis has a non-finite entry");
    if (nonnegative && axis[i] < 0.0) throw DomainError(std::string(name) + " axis has a negative entry");
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw DomainError(std::string(name) + " axis must be strictly increasing");
    }
  }
}

std::string describe_axis(std::span<const double> axis, const char* name) {
  std::ostringstream os;
  os.precision(12);
  os << name << ": " << axis.size() << " points on [" << axis.front() << ", " << axis.back() << "]";
  return os.str();
}

void record(QfiSeries& s, std::size_t i, double T, double F) {
  s.qfi[i] = F;
  s.qfi_over_T2[i] = T > 0.0 ? F / (T * T) : 0.0;
}

void check_gamma_step(const ModelParams& params, double dgamma) {
  if (!(dgamma > 0.0) || !std::isfinite(dgamma)) throw DomainError("dgamma must be positive");
  const double resolution =
      1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(params.gamma));
  if (dgamma / 2.0 < resolution) {
    throw NumericalError("gamma step is below the resolvable increment at gamma = " +
                         std::to_string(params.gamma));
  }
}

void note(QfiSeries& s, const FdEstimate& fd) {
  if (fd.consistent) return;
  if (s.inconsistent_points++ == 0) s.first_warning = fd.warning;
}

void generator_series(QfiSeries& s, const BasisPtr& basis, const QuantumState& psi0,
                      std::span<const double> T_axis, bool with_correlator) {
  const EigenSystem eig = eigensystem(static_hamiltonian(s.params, basis, s.kind));
  GeneratorSeriesEvaluator eval(eig, d_hamiltonian_d_gamma(s.params, basis, s.kind), psi0);
  if (s.method == QfiMethod::generator_two_level) {
    if (eig.size() < 3) throw DomainError("two-level truncation needs a basis of dimension >= 3");
    const DominantPair pair = dominant_pair(eig, psi0);
    eval.restrict_to_pair(pair.first, pair.second);
  }
  for (std::size_t i = 0; i < T_axis.size(); ++i) {
    const GeneratorQfi g = eval.at(T_axis[i]);
    record(s, i, T_axis[i], g.F);
    s.var_linear[i] = g.var_linear;
    s.var_oscillating[i] = g.var_oscillating;
    if (with_correlator) s.correlator[i] = correlator(evolve_static(eig, psi0, T_axis[i]));
  }
}

void static_fd_series(QfiSeries& s, const BasisPtr& basis, const QuantumState& psi0,
                      std::span<const double> T_axis, const SeriesOptions& opts) {
  const double dh_max = d_hamiltonian_d_gamma(s.params, basis, s.kind).max_norm();
  for (std::size_t i = 0; i < T_axis.size(); ++i) {
    const double T = T_axis[i];
    const double step = opts.dgamma ? *opts.dgamma : default_gamma_step(T, dh_max);
    const FdEstimate fd =
        qfi_finite_difference(static_evolver(s.kind, basis, psi0, T), s.params, step);
    note(s, fd);
    record(s, i, T, fd.F);
    if (opts.with_correlator) {
      s.correlator[i] =
          correlator(evolve_static(static_hamiltonian(s.params, basis, s.kind), psi0, T));
    }
  }
}

// Five perturbed copies propagated together on the global grid k h0, with a
// partial step onto each sample time.
void driven_fd_series(QfiSeries& s, const BasisPtr& basis, const QuantumState& psi0,
                      std::span<const double> T_axis, const SeriesOptions& opts) {
  if (opts.steps_per_period < kMinStepsPerPeriod) {
    throw ConfigError("steps_per_period must be at least " + std::to_string(kMinStepsPerPeriod));
  }
  const double w = s.params.drive_frequency();
  if (!(w > 0.0)) throw DomainError("drive frequency must be positive");
  const double T_max = T_axis.back();
  const double step =
      opts.dgamma
          ? *opts.dgamma
          : default_gamma_step(T_max,
                               d_hamiltonian_d_gamma(s.params, basis, s.kind, T_max).max_norm());
  check_gamma_step(s.params, step);

  constexpr int kCopies = 5;
  constexpr int kCenter = 2;
  const double shifts[kCopies] = {-step, -0.5 * step, 0.0, 0.5 * step, step};
  std::vector<HamiltonianFamily> family;
  for (double d : shifts) {
    ModelParams p = s.params;
    p.gamma += d;
    family.push_back(hamiltonian_family(p, basis, s.kind));
  }
  std::vector<Vector> v(kCopies, psi0.amplitudes());
  const double h0 = 2.0 * std::numbers::pi / (w * opts.steps_per_period);
  std::size_t k = 0;

  for (std::size_t i = 0; i < T_axis.size(); ++i) {
    const double T = T_axis[i];
    auto full = static_cast<std::size_t>(std::floor(T / h0));
    while (full > 0 && static_cast<double>(full) * h0 > T) --full;
    while (static_cast<double>(full + 1) * h0 <= T) ++full;
    for (; k < full; ++k) {
      for (int c = 0; c < kCopies; ++c) {
        v[c] = midpoint_step(family[c], v[c], static_cast<double>(k) * h0, h0);
      }
    }
    const double t0 = static_cast<double>(full) * h0;
    const double rest = T - t0;
    std::vector<Vector> at = v;
    if (rest > 0.0) {
      for (int c = 0; c < kCopies; ++c) at[c] = midpoint_step(family[c], v[c], t0, rest);
    }
    for (const Vector& x : at) {
      const double drift = std::abs(x.norm() - 1.0);
      if (drift > QuantumState::kNormTolerance) {
        throw NumericalError("driven propagation lost unitarity at T=" + std::to_string(T) +
                             ": | |psi| - 1 | = " + std::to_string(drift));
      }
    }
    const FdEstimate fd = fd_estimate(at[0], at[1], at[kCenter], at[3], at[4], step);
    note(s, fd);
    record(s, i, T, fd.F);
    if (opts.with_correlator) s.correlator[i] = correlator(QuantumState(basis, at[kCenter]));
  }
}

}  // namespace

QfiSeries qfi_time_series(const ModelParams& params, ModelKind kind, const QuantumState& psi0,
                          std::span<const double> T_axis, QfiMethod method,
                          const SeriesOptions& options) {
  check_axis(T_axis, "T", true);
  const BasisPtr basis = psi0.basis_ptr();
  validate(params, *basis);

  QfiSeries s;
  s.params = params;
  s.kind = kind;
  s.method = method;
  s.times.assign(T_axis.begin(), T_axis.end());
  s.qfi.assign(T_axis.size(), 0.0);
  s.qfi_over_T2.assign(T_axis.size(), 0.0);
  s.var_linear.assign(T_axis.size(), kNaN);
  s.var_oscillating.assign(T_axis.size(), kNaN);
  if (options.with_correlator) s.correlator.assign(T_axis.size(), kNaN);

  if (method != QfiMethod::finite_difference) {
    if (is_time_dependent(kind)) {
      throw DomainError("generator methods need a time-independent model; use finite-difference");
    }
    generator_series(s, basis, psi0, T_axis, options.with_correlator);
  } else if (is_time_dependent(kind)) {
    driven_fd_series(s, basis, psi0, T_axis, options);
  } else {
    static_fd_series(s, basis, psi0, T_axis, options);
  }
  return s;
}

std::pair<double, double> parabolic_vertex(double x0, double y0, double x1, double y1, double x2,
                                           double y2) {
  // Divided differences: y = y1 + b (x - x1) + a (x - x1)^2 around the middle point.
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  const double b = d01 + a * (x1 - x0);
  if (!(a != 0.0) || !std::isfinite(a)) return {x1, y1};
  double x = x1 - b / (2.0 * a);
  x = std::clamp(x, x0, x2);
  const double dx = x - x1;
  return {x, y1 + b * dx + a * dx * dx};
}

PeakResult find_first_peak(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw DomainError("times and values differ in length");
  if (values.size() < 5) throw DomainError("peak search needs at least 5 samples");
  check_axis(times, "T", false);
  const std::size_t n = values.size();
  double scale = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericalError("peak search on non-finite series");
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-9 * scale;

  PeakResult out;
  out.provenance.grid = describe_axis(times, "T");
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(values[i] > values[i - 1] + tol)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && std::abs(values[j + 1] - values[j]) <= tol) ++j;
    if (j + 1 < n && values[j + 1] < values[j] - tol) {
      out.grid_index = i;
      if (i == j) {
        const auto [x, y] = parabolic_vertex(times[i - 1], values[i - 1], times[i], values[i],
                                             times[i + 1], values[i + 1]);
        out.tau = x;
        out.F_max = std::max(y, values[i]);
        out.provenance.refinement = "parabolic through samples " + std::to_string(i - 1) + ".." +
                                    std::to_string(i + 1);
      } else {
        out.tau = 0.5 * (times[i] + times[j]);
        out.F_max = *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(i),
                                      values.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        out.provenance.refinement = "plateau midpoint over samples " + std::to_string(i) + ".." +
                                    std::to_string(j);
      }
      return out;
    }
    i = j + 1;
  }
  out.boundary_peak = true;
  out.grid_index = values[n - 1] > values[0] + tol ? n - 1 : 0;
  out.tau = times[out.grid_index];
  out.F_max = values[out.grid_index];
  out.provenance.refinement = "none (boundary)";
  return out;
}

PeakResult find_first_peak(const QfiSeries& series) {
  // F/T^2 is undefined at T = 0; such samples do not take part.
  std::size_t first = 0;
  while (first < series.times.size() && series.times[first] <= 0.0) ++first;
  std::span<const double> t(series.times);
  std::span<const double> f(series.qfi_over_T2);
  PeakResult r = find_first_peak(t.subspan(first), f.subspan(first));
  r.grid_index += first;
  r.U_bar = series.params.U;
  return r;
}

std::vector<double> default_time_axis(int n_modes, std::optional<double> T_end,
                                      std::size_t points) {
  if (points == 0) throw DomainError("time axis needs at least one point");
  const double end = T_end ? *T_end : 1.5 * n_modes;
  if (!(end > 0.0) || !std::isfinite(end)) throw DomainError("time window end must be positive");
  std::vector<double> axis(points);
  for (std::size_t i = 0; i < points; ++i) {
    axis[i] = end * static_cast<double>(i + 1) / static_cast<double>(points);
  }
  return axis;
}

std::vector<double> linear_axis(double start, double stop, std::size_t points) {
  if (points == 0) throw DomainError("axis needs at least one point");
  if (points == 1) return {start};
  std::vector<double> axis(points);
  for (std::size_t i = 0; i < points; ++i) {
    axis[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return axis;
}

ScanGrid scan_TU(const ModelParams& params, ModelKind kind, const QuantumState& psi0,
                 std::span<const double> T_axis, std::span<const double> U_axis, QfiMethod method,
                 const ScanOptions& options) {
  check_axis(T_axis, "T", true);
  check_axis(U_axis, "U", false);
  const auto rows = static_cast<Eigen::Index>(T_axis.size());
  const auto cols = static_cast<Eigen::Index>(U_axis.size());

  ScanGrid g;
  g.T_axis.assign(T_axis.begin(), T_axis.end());
  g.U_axis.assign(U_axis.begin(), U_axis.end());
  g.F_over_T2 = Eigen::MatrixXd::Constant(rows, cols, kNaN);
  g.correlator = Eigen::MatrixXd::Constant(rows, cols, kNaN);
  g.var_linear = Eigen::MatrixXd::Constant(rows, cols, kNaN);
  g.var_oscillating = Eigen::MatrixXd::Constant(rows, cols, kNaN);
  g.params = params;
  g.kind = kind;
  g.method = method;

  std::vector<std::exception_ptr> errors(U_axis.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < U_axis.size(); j = next++) {
      try {
        ModelParams p = params;
        p.U = U_axis[j];
        const QfiSeries s = qfi_time_series(p, kind, psi0, T_axis, method, options.series);
        const auto c = static_cast<Eigen::Index>(j);
        for (Eigen::Index i = 0; i < rows; ++i) {
          const auto k = static_cast<std::size_t>(i);
          g.F_over_T2(i, c) = s.qfi_over_T2[k];
          g.var_linear(i, c) = s.var_linear[k];
          g.var_oscillating(i, c) = s.var_oscillating[k];
          if (!s.correlator.empty()) g.correlator(i, c) = s.correlator[k];
        }
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const unsigned workers =
      std::clamp<unsigned>(options.threads, 1u, static_cast<unsigned>(U_axis.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return g;
}

PeakResult find_Ubar(const ScanGrid& grid) {
  const std::size_t nu = grid.U_axis.size();
  std::vector<PeakResult> peaks;
  peaks.reserve(nu);
  for (std::size_t j = 0; j < nu; ++j) {
    QfiSeries s;
    s.times = grid.T_axis;
    s.params = grid.params;
    s.params.U = grid.U_axis[j];
    const Eigen::VectorXd col = grid.F_over_T2.col(static_cast<Eigen::Index>(j));
    s.qfi_over_T2.assign(col.data(), col.data() + col.size());
    peaks.push_back(find_first_peak(s));
  }

  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < nu; ++j) {
    if (peaks[j].boundary_peak) continue;
    if (!best || peaks[j].F_max > peaks[*best].F_max) best = j;
  }
  if (!best) {
    throw NumericalError("inconclusive scan: every first peak lies on the T window boundary");
  }
  const std::size_t j = *best;
  PeakResult out = peaks[j];
  out.U_bar = grid.U_axis[j];
  out.provenance.grid =
      describe_axis(grid.T_axis, "T") + "; " + describe_axis(grid.U_axis, "U");
  const bool left = j > 0 && !peaks[j - 1].boundary_peak;
  const bool right = j + 1 < nu && !peaks[j + 1].boundary_peak;
  if (left && right) {
    const auto [u, f] = parabolic_vertex(grid.U_axis[j - 1], peaks[j - 1].F_max, grid.U_axis[j],
                                         peaks[j].F_max, grid.U_axis[j + 1], peaks[j + 1].F_max);
    out.U_bar = u;
    out.F_max = std::max(f, peaks[j].F_max);
    out.provenance.refinement = "T: " + peaks[j].provenance.refinement +
                                "; U: parabolic through columns " + std::to_string(j - 1) + ".." +
                                std::to_string(j + 1);
  } else {
    out.provenance.refinement =
        "T: " + peaks[j].provenance.refinement + "; U: grid point " + std::to_string(j);
  }
  return out;
}

PeakResult find_Ubar(const ModelParams& params, ModelKind kind, const QuantumState& psi0,
                     std::span<const double> U_axis, std::span<const double> T_window,
                     QfiMethod method, const ScanOptions& options) {
  return find_Ubar(scan_TU(params, kind, psi0, T_window, U_axis, method, options));
}

namespace {

PeakResult scaling_peak(int n_particles, int M, const ModelParams& params, ModelKind kind,
                        const InitialStateSpec& initial, QfiMethod method,
                        const ScalingOptions& options) {
  ModelParams p = params;
  p.M = M;
  p.N = n_particles;
  const BasisPtr basis = build_basis(n_particles, M);
  const QuantumState psi0 = make_initial_state(basis, initial);
  double T_end = options.T_end_per_mode * M;
  PeakResult peak;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::vector<double> axis = default_time_axis(M, T_end, options.points);
    peak = find_first_peak(qfi_time_series(p, kind, psi0, axis, method, options.scan.series));
    if (!peak.boundary_peak) break;
    T_end *= 2.0;
  }
  return peak;
}

}  // namespace

std::vector<ScalingRow> scaling_study(int n_particles, std::span<const int> M_axis,
                                      const ModelParams& params, ModelKind kind,
                                      const InitialStateSpec& initial, QfiMethod method,
                                      const ScalingOptions& options) {
  if (M_axis.empty()) throw DomainError("M axis is empty");
  std::vector<int> modes(M_axis.begin(), M_axis.end());
  std::sort(modes.begin(), modes.end());
  if (std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
    throw DomainError("M axis has duplicate entries");
  }

  std::vector<ScalingRow> rows;
  std::optional<double> reference;
  for (int M : modes) {
    ScalingRow row;
    row.M = M;
    try {
      row.peak = scaling_peak(n_particles, M, params, kind, initial, method, options);
      row.ok = true;
      if (M == 2) reference = row.peak.F_max;
    } catch (const SizingError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  if (!reference) {
    reference = scaling_peak(n_particles, 2, params, kind, initial, method, options).F_max;
  }
  for (ScalingRow& row : rows) {
    if (!row.ok) continue;
    row.ratio_to_M2 = row.peak.F_max / *reference;
    const double hl = static_cast<double>(n_particles) * (row.M - 1);
    row.ratio_to_HL = row.peak.F_max / (hl * hl);
  }
  return rows;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit inputs differ in length");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw DomainError("fit needs at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit needs two distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

LinearFit tau_fit(const std::vector<ScalingRow>& rows) {
  std::vector<double> x;
  std::vector<double> y;
  for (const ScalingRow& r : rows) {
    if (!r.ok) continue;
    x.push_back(r.M);
    y.push_back(r.peak.tau);
  }
  return linear_fit(x, y);
}

LinearFit large_M_loglog_fit(const std::vector<ScalingRow>& rows) {
  int top = 0;
  for (const ScalingRow& r : rows) {
    if (r.ok) top = std::max(top, r.M);
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const ScalingRow& r : rows) {
    if (!r.ok || 3 * r.M < 2 * top) continue;
    x.push_back(std::log(r.M));
    y.push_back(std::log(r.ratio_to_M2));
  }
  return linear_fit(x, y);
}

}  // namespace latticeqfi
