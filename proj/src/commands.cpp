#include "latticeqfi/commands.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"
#include "latticeqfi/errors.hpp"
#include "latticeqfi/evolve.hpp"
#include "latticeqfi/observe.hpp"
#include "latticeqfi/output.hpp"
#include "latticeqfi/scan.hpp"

namespace latticeqfi {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

fs::path output_dir(const RunConfig& c, const CommandOptions& o) {
  const fs::path dir = o.out_dir ? *o.out_dir : fs::path(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

ordered_json provenance(std::string_view command, const RunConfig& c) {
  ordered_json p;
  p["tool"] = "latticeqfi";
  p["version"] = std::string(version());
  p["command"] = std::string(command);
  p["config_hash"] = content_hash(c.canonical);
  p["config"] = ordered_json::parse(c.canonical);
  return p;
}

ordered_json number_or_null(double x) {
  return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

ordered_json peak_json(const PeakResult& r) {
  ordered_json j;
  j["F_max"] = number_or_null(r.F_max);
  j["tau"] = number_or_null(r.tau);
  j["boundary_peak"] = r.boundary_peak;
  j["grid_index"] = r.grid_index;
  j["grid"] = r.provenance.grid;
  j["refinement"] = r.provenance.refinement;
  return j;
}

void emit(const fs::path& dir, std::string_view name, const std::string& csv,
          const ordered_json* summary, const CommandOptions& o, const std::string& plot) {
  write_atomic(dir / (std::string(name) + ".csv"), csv);
  if (summary) write_atomic(dir / (std::string(name) + ".json"), summary->dump(2) + "\n");
  if (o.emit_plot) write_atomic(dir / (std::string(name) + ".gp"), plot);
}

}  // namespace

void cmd_evolve(const RunConfig& c, const CommandOptions& o) {
  const ModelParams p = c.params;
  const BasisPtr basis = build_basis(p.N, p.M);
  const QuantumState psi0 = make_initial_state(basis, c.initial);
  std::vector<double> times = c.times;
  if (times.front() > 0.0) times.insert(times.begin(), 0.0);
  const std::vector<QuantumState> states =
      trajectory(p, basis, c.kind, psi0, times, c.steps_per_period);

  CsvTable t;
  t.columns.push_back("t");
  for (int m = 1; m <= p.M; ++m) t.columns.push_back("n_" + std::to_string(m));
  t.columns.push_back("norm");
  t.columns.push_back("G");
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<std::string> row{format_number(times[i])};
    const RealVector n = occupations(states[i]);
    for (Eigen::Index m = 0; m < n.size(); ++m) row.push_back(format_number(n(m)));
    row.push_back(format_number(states[i].norm()));
    row.push_back(format_number(correlator(states[i])));
    t.add(std::move(row));
  }
  emit(output_dir(c, o), "evolve", t.render(provenance_header("evolve", c.canonical)), nullptr,
       o, gnuplot_script("evolve.csv", "occupation of site 1", 1, 2));
}

void cmd_qfi(const RunConfig& c, const CommandOptions& o) {
  const ModelParams p = c.params;
  const BasisPtr basis = build_basis(p.N, p.M);
  const QuantumState psi0 = make_initial_state(basis, c.initial);
  SeriesOptions so;
  so.dgamma = c.dgamma;
  so.steps_per_period = c.steps_per_period;
  so.with_correlator = true;
  const QfiSeries s = qfi_time_series(p, c.kind, psi0, c.times, c.method, so);

  CsvTable t;
  t.columns = {"T", "F", "F_over_T2", "var_linear", "var_oscillating", "G"};
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    t.add({format_number(s.times[i]), format_number(s.qfi[i]), format_number(s.qfi_over_T2[i]),
           format_number(s.var_linear[i]), format_number(s.var_oscillating[i]),
           format_number(s.correlator[i])});
  }

  ordered_json j;
  j["provenance"] = provenance("qfi", c);
  j["model"] = std::string(to_string(c.kind));
  j["method"] = std::string(to_string(c.method));
  j["heisenberg_limit_rate"] = std::pow(static_cast<double>(p.N) * (p.M - 1), 2);
  std::size_t positive = 0;
  for (double T : s.times) positive += T > 0.0 ? 1 : 0;
  j["peak"] = positive >= 5 ? peak_json(find_first_peak(s)) : ordered_json(nullptr);
  j["inconsistent_points"] = s.inconsistent_points;
  j["warning"] = s.first_warning;
  emit(output_dir(c, o), "qfi", t.render(provenance_header("qfi", c.canonical)), &j, o,
       gnuplot_script("qfi.csv", "F / T^2", 1, 3));
}

void cmd_scan(const RunConfig& c, const CommandOptions& o) {
  const ModelParams p = c.params;
  const BasisPtr basis = build_basis(p.N, p.M);
  const QuantumState psi0 = make_initial_state(basis, c.initial);
  ScanOptions so;
  so.threads = o.threads;
  so.series.dgamma = c.dgamma;
  so.series.steps_per_period = c.steps_per_period;
  so.series.with_correlator = true;
  const ScanGrid g = scan_TU(p, c.kind, psi0, c.times, c.U_axis, c.method, so);

  CsvTable t;
  t.columns = {"T", "U", "F_over_T2", "G"};
  for (std::size_t u = 0; u < g.U_axis.size(); ++u) {
    for (std::size_t i = 0; i < g.T_axis.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto k = static_cast<Eigen::Index>(u);
      t.add({format_number(g.T_axis[i]), format_number(g.U_axis[u]),
             format_number(g.F_over_T2(r, k)), format_number(g.correlator(r, k))});
    }
  }

  ordered_json j;
  j["provenance"] = provenance("scan", c);
  j["model"] = std::string(to_string(c.kind));
  j["method"] = std::string(to_string(c.method));
  j["rows"] = t.rows.size();
  std::string failure;
  try {
    const PeakResult r = find_Ubar(g);
    j["status"] = "ok";
    j["U_bar"] = r.U_bar;
    j["peak"] = peak_json(r);
  } catch (const std::exception& e) {
    failure = e.what();
    j["status"] = "inconclusive";
    j["U_bar"] = nullptr;
    j["error"] = failure;
  }
  emit(output_dir(c, o), "scan", t.render(provenance_header("scan", c.canonical)), &j, o,
       gnuplot_script("scan.csv", "F / T^2 over (T, U)", 1, 2, 3));
  if (!failure.empty()) throw NumericalError(failure);
}

void cmd_scaling(const RunConfig& c, const CommandOptions& o) {
  ScalingOptions so;
  so.scan.threads = o.threads;
  so.scan.series.dgamma = c.dgamma;
  so.scan.series.steps_per_period = c.steps_per_period;
  so.points = c.time_points;
  so.T_end_per_mode = c.T_end_per_mode;
  const std::vector<ScalingRow> rows =
      scaling_study(c.params.N, c.M_axis, c.params, c.kind, c.initial, c.method, so);

  CsvTable t;
  t.columns = {"M", "dim", "F_max", "tau", "boundary_peak", "ratio_to_M2", "ratio_to_HL", "error"};
  for (const ScalingRow& r : rows) {
    const std::string dim = std::to_string(fock_dimension(c.params.N, r.M));
    if (r.ok) {
      t.add({std::to_string(r.M), dim, format_number(r.peak.F_max), format_number(r.peak.tau),
             r.peak.boundary_peak ? "1" : "0", format_number(r.ratio_to_M2),
             format_number(r.ratio_to_HL), ""});
    } else {
      std::string msg = r.error;
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      t.add({std::to_string(r.M), dim, "nan", "nan", "", "nan", "nan", msg});
    }
  }

  ordered_json j;
  j["provenance"] = provenance("scaling", c);
  j["model"] = std::string(to_string(c.kind));
  j["method"] = std::string(to_string(c.method));
  auto fit_json = [](auto&& fit) -> ordered_json {
    try {
      const LinearFit f = fit();
      return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
    } catch (const DomainError&) {
      return nullptr;
    }
  };
  j["tau_fit"] = fit_json([&] { return tau_fit(rows); });
  j["large_M_loglog_fit"] = fit_json([&] { return large_M_loglog_fit(rows); });
  std::size_t failed = 0;
  for (const ScalingRow& r : rows) failed += r.ok ? 0 : 1;
  j["failed_rows"] = failed;
  emit(output_dir(c, o), "scaling", t.render(provenance_header("scaling", c.canonical)), &j, o,
       gnuplot_script("scaling.csv", "F_max(M) / F_max(2)", 1, 6));
}

void cmd_spectrum(const RunConfig& c, const CommandOptions& o) {
  if (is_time_dependent(c.kind)) {
    throw ConfigError("spectrum needs a time-independent model (tilt, tbh or effective)");
  }
  const ModelParams base = c.params;
  const BasisPtr basis = build_basis(base.N, base.M);
  const QuantumState psi0 = make_initial_state(basis, c.initial);
  const std::size_t d = basis->size();

  CsvTable t;
  t.columns.push_back("U");
  for (std::size_t k = 1; k <= d; ++k) t.columns.push_back("E_" + std::to_string(k));
  for (std::size_t k = 1; k <= d; ++k) t.columns.push_back("overlap_" + std::to_string(k));
  for (const char* col : {"first", "second", "Omega", "tau_est"}) t.columns.push_back(col);

  ordered_json rows = ordered_json::array();
  for (double U : c.U_axis) {
    ModelParams p = base;
    p.U = U;
    const EigenSystem eig = eigensystem(static_hamiltonian(p, basis, c.kind));
    const RealVector ov = eigenstate_overlaps(psi0, eig);
    std::vector<std::string> row{format_number(U)};
    for (std::size_t k = 0; k < d; ++k) row.push_back(format_number(eig.energies(static_cast<Eigen::Index>(k))));
    for (std::size_t k = 0; k < d; ++k) row.push_back(format_number(ov(static_cast<Eigen::Index>(k))));
    ordered_json r;
    r["U"] = U;
    try {
      const GapEstimate gap = spectral_gap_tau(eig, ov);
      row.push_back(std::to_string(gap.first + 1));
      row.push_back(std::to_string(gap.second + 1));
      row.push_back(format_number(gap.omega));
      row.push_back(format_number(gap.tau_estimate));
      r["first"] = gap.first + 1;
      r["second"] = gap.second + 1;
      r["overlap_first"] = ov(static_cast<Eigen::Index>(gap.first));
      r["overlap_second"] = ov(static_cast<Eigen::Index>(gap.second));
      r["Omega"] = gap.omega;
      r["tau_est"] = gap.tau_estimate;
      r["concentrated"] = gap.concentrated;
    } catch (const NumericalError& e) {
      for (int k = 0; k < 4; ++k) row.push_back("nan");
      r["error"] = e.what();
    }
    t.add(std::move(row));
    rows.push_back(std::move(r));
  }

  ordered_json j;
  j["provenance"] = provenance("spectrum", c);
  j["model"] = std::string(to_string(c.kind));
  j["dimension"] = d;
  j["rows"] = std::move(rows);
  emit(output_dir(c, o), "spectrum", t.render(provenance_header("spectrum", c.canonical)), &j, o,
       gnuplot_script("spectrum.csv", "E_k against U", 1, 2));
}

int run_command(std::string_view command, const std::string& config_path,
                const CommandOptions& options, std::ostream& err) {
  try {
    const RunConfig c = load_config(config_path);
    if (command == "evolve") {
      cmd_evolve(c, options);
    } else if (command == "qfi") {
      cmd_qfi(c, options);
    } else if (command == "scan") {
      cmd_scan(c, options);
    } else if (command == "scaling") {
      cmd_scaling(c, options);
    } else if (command == "spectrum") {
      cmd_spectrum(c, options);
    } else {
      err << "latticeqfi: unknown command '" << command << "'\n";
      return kExitConfig;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "latticeqfi: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SizingError& e) {
    err << "latticeqfi: dimension cap: " << e.what() << '\n';
    return kExitDimensionCap;
  } catch (const DomainError& e) {
    err << "latticeqfi: invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "latticeqfi: numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "latticeqfi: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace latticeqfi
