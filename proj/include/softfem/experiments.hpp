#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "softfem/eigensolve.hpp"
#include "softfem/method.hpp"

namespace softfem {

enum class Problem { laplace1d, laplace2d, variable_kappa };

const char* to_string(Problem p) noexcept;
Problem parse_problem(const std::string& name);

enum class OutputFormat { csv, json };

/// One method of a run. `label` names the output files.
struct MethodSpec {
  Method method = Method::fem;
  ParameterTriple params;
  std::string label;
};

/// Embedded parameter sets: "table2" (eta_K, eta_M per degree, alpha = 0.95)
/// and "table4" (alpha = 1 / (p + 1) with its eta_K, eta_M).
ParameterTriple preset_params(const std::string& preset, int p);

struct ExperimentConfig {
  Problem problem = Problem::laplace1d;
  std::string kappa_id = "exp_x_minus_x2";
  int n = 100;
  int ny = 0; // 0 means ny = n
  int p = 1;
  std::vector<int> n_list;
  std::vector<MethodSpec> methods;
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::csv;
  /// Reference spectrum file for variable_kappa; empty means <out>/reference_<kappa>.json.
  std::filesystem::path reference_path;
  bool generate_reference = true;
  /// Relative tolerance override for table cells; NaN keeps the pinned values.
  double tolerance_override = std::numeric_limits<double>::quiet_NaN();

  /// Parses a JSON document; unknown keys and ill-typed values throw config_error.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::filesystem::path& path);
  [[nodiscard]] std::string to_json_text() const;

  /// Throws config_error on inconsistent settings.
  void validate() const;
  [[nodiscard]] DiffusionField kappa() const;
  [[nodiscard]] std::filesystem::path resolved_reference_path() const;
};

struct MethodSummary {
  std::string label;
  MethodConfig config;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double sigma = 0.0;
  double rho_vs_fem = 1.0;
  double rho_percent = 0.0;
  SolverDiagnostics diagnostics;
  std::filesystem::path csv_path;
};

struct SpectrumRun {
  std::vector<MethodSummary> methods;
  std::filesystem::path summary_path;
};

/// Solves every configured method, writes spectrum_<label>.csv
/// ("j,lambda_h,lambda_ref,rel_err,l2_err,h1_err") and summary.json.
SpectrumRun run_spectrum(const ExperimentConfig& config);

struct ConvergenceRun {
  std::vector<int> n_list;
  std::vector<std::string> labels;
  /// errors[m][k]: signed relative error of the first eigenvalue, method m, mesh k.
  std::vector<std::vector<double>> errors;
  std::vector<double> orders;
  std::filesystem::path csv_path;
};

/// First-eigenvalue error against N with a fitted order per method; writes convergence.csv.
ConvergenceRun run_convergence(const ExperimentConfig& config);
/// The same computation without touching the file system.
ConvergenceRun compute_convergence(const ExperimentConfig& config);

/// Lowest eigenvalue of one configuration, sharpened by inverse iteration.
double first_eigenvalue(const MethodConfig& method, Problem problem, int n, int ny = 0);

struct ReferenceSpectrum {
  std::string problem;
  std::string kappa_id;
  int degree = 4;
  int n = 1000;
  std::vector<double> eigenvalues;
  SolverDiagnostics diagnostics;

  [[nodiscard]] std::string to_json_text() const;
  static ReferenceSpectrum from_json_text(const std::string& text);
};

/// Galerkin FEM spectrum with quartic elements on 1000 elements for the
/// given coefficient; the lowest modes are refined by inverse iteration.
ReferenceSpectrum compute_reference(const DiffusionField& kappa, int degree = 4, int n = 1000);
/// Computes and writes the reference; returns it.
ReferenceSpectrum generate_reference(const DiffusionField& kappa, const std::filesystem::path& path);
/// Loads `path`, or generates it when absent and `allow_generate` is set.
ReferenceSpectrum load_or_generate_reference(const DiffusionField& kappa, const std::filesystem::path& path,
                                             bool allow_generate);

// Table reproduction.

struct TableCell {
  std::string row;
  std::string column;
  double computed = 0.0;
  double expected = 0.0;
  /// Relative deviation |computed - expected| / |expected| (absolute for floor cells).
  double deviation = 0.0;
  double tolerance = 0.0;
  bool absolute = false;
  bool pass = false;
};

struct TableReport {
  std::string id;
  std::string title;
  std::vector<TableCell> cells;
  double seconds = 0.0;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] std::size_t failures() const;
  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::string to_json_text() const;
};

struct TableOptions {
  std::filesystem::path reference_path = "reference_exp_x_minus_x2.json";
  bool allow_generate = true;
  /// NaN keeps the pinned tolerances; otherwise replaces every relative one.
  double tolerance_override = std::numeric_limits<double>::quiet_NaN();
  std::string kappa_id = "exp_x_minus_x2";
};

const std::vector<std::string>& table_ids();
TableReport reproduce_table(const std::string& id, const TableOptions& options = {});

} // namespace softfem
