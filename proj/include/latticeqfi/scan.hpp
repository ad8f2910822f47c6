#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "latticeqfi/evolve.hpp"
#include "latticeqfi/fock.hpp"
#include "latticeqfi/metro.hpp"
#include "latticeqfi/model.hpp"

namespace latticeqfi {

/// F(gamma; T) sampled on a time axis.
struct QfiSeries {
  std::vector<double> times;
  std::vector<double> qfi;
  std::vector<double> qfi_over_T2;  // 0 at T = 0
  std::vector<double> var_linear;       // generator methods only
  std::vector<double> var_oscillating;  // generator methods only
  std::vector<double> correlator;       // when SeriesOptions::with_correlator
  ModelParams params;
  ModelKind kind = ModelKind::effective;
  QfiMethod method = QfiMethod::generator;
  /// Points whose finite-difference consistency check failed.
  std::size_t inconsistent_points = 0;
  std::string first_warning;
};

struct SeriesOptions {
  /// Finite-difference gamma step; default_gamma_step() when unset.
  std::optional<double> dgamma;
  int steps_per_period = kMinStepsPerPeriod;
  bool with_correlator = false;
};

/**
 * QFI along T_axis (strictly increasing, >= 0).
 *
 * Generator methods need a time-independent model. Finite differences work
 * for every kind; driven kinds are propagated once along the axis with a
 * fixed step 2 pi / (omega S) and a final partial step onto each sample, so
 * a sample's value does not depend on the rest of the axis.
 */
QfiSeries qfi_time_series(const ModelParams& params, ModelKind kind, const QuantumState& psi0,
                          std::span<const double> T_axis, QfiMethod method,
                          const SeriesOptions& options = {});

struct Provenance {
  std::string grid;
  std::string refinement;
};

struct PeakResult {
  double F_max = 0.0;  // peak of F / T^2
  double tau = 0.0;
  double U_bar = 0.0;
  bool boundary_peak = false;
  std::size_t grid_index = 0;
  Provenance provenance;
};

/// Vertex of the parabola through three points; falls back to the middle
/// point when they are collinear. Returns {x, y}.
std::pair<double, double> parabolic_vertex(double x0, double y0, double x1, double y1, double x2,
                                           double y2);

/**
 * First interior local maximum by the three-point test, refined by a
 * parabola through the bracketing triple. Without one, the larger endpoint
 * (the first on ties) is returned with boundary_peak set.
 * Throws DomainError for fewer than 5 samples.
 */
PeakResult find_first_peak(std::span<const double> times, std::span<const double> values);
PeakResult find_first_peak(const QfiSeries& series);

/// n equally spaced points on (0, T_end]; T_end defaults to 3M/2.
std::vector<double> default_time_axis(int n_modes, std::optional<double> T_end = std::nullopt,
                                      std::size_t points = 400);

/// Evenly spaced axis from start to stop inclusive.
std::vector<double> linear_axis(double start, double stop, std::size_t points);

struct ScanOptions {
  SeriesOptions series;
  unsigned threads = 1;
};

/// F/T^2 over a (T, U) grid; rows index T, columns index U.
struct ScanGrid {
  std::vector<double> T_axis;
  std::vector<double> U_axis;
  Eigen::MatrixXd F_over_T2;
  Eigen::MatrixXd correlator;
  Eigen::MatrixXd var_linear;       // NaN for finite differences
  Eigen::MatrixXd var_oscillating;  // NaN for finite differences
  ModelParams params;
  ModelKind kind = ModelKind::effective;
  QfiMethod method = QfiMethod::generator;
};

/// Cells are independent; with threads > 1 columns are distributed over
/// workers and merged by index.
ScanGrid scan_TU(const ModelParams& params, ModelKind kind, const QuantumState& psi0,
                 std::span<const double> T_axis, std::span<const double> U_axis, QfiMethod method,
                 const ScanOptions& options = {});

/**
 * First-peak F_max for every U column, then U_bar = argmax with parabolic
 * refinement over the U grid. Throws NumericalError when every column's
 * peak sits on the window boundary.
 */
PeakResult find_Ubar(const ScanGrid& grid);
PeakResult find_Ubar(const ModelParams& params, ModelKind kind, const QuantumState& psi0,
                     std::span<const double> U_axis, std::span<const double> T_window,
                     QfiMethod method, const ScanOptions& options = {});

struct ScalingRow {
  int M = 0;
  bool ok = false;
  PeakResult peak;
  double ratio_to_M2 = 0.0;  // F_max / F_max(M = 2)
  double ratio_to_HL = 0.0;  // F_max / (N (M - 1))^2, i.e. F/F_HL at tau
  std::string error;
};

struct ScalingOptions {
  ScanOptions scan;
  std::size_t points = 400;
  double T_end_per_mode = 1.5;
};

/// Rows sorted by M. A failing M (e.g. dimension cap) is reported in its row
/// and the others are still computed.
std::vector<ScalingRow> scaling_study(int n_particles, std::span<const int> M_axis,
                                      const ModelParams& params, ModelKind kind,
                                      const InitialStateSpec& initial, QfiMethod method,
                                      const ScalingOptions& options = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Needs two distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// tau against M over the successful rows.
LinearFit tau_fit(const std::vector<ScalingRow>& rows);

/// log(ratio_to_M2) against log(M) over successful rows with
/// M >= (2/3) max M, the largest-M window of the table.
LinearFit large_M_loglog_fit(const std::vector<ScalingRow>& rows);

}  // namespace latticeqfi
