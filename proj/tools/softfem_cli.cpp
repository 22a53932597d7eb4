// Command-line front end: spectrum, converge, table <id>, reference.
//
// Exit codes: 0 success, 1 table cell failure, 2 configuration error,
// 3 numerical failure.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "softfem/error.hpp"
#include "softfem/experiments.hpp"

namespace {

using namespace softfem;

constexpr int kExitCellFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<int> p;
  std::optional<int> n;
  std::string method;
  std::string preset;
  std::optional<double> eta_k;
  std::optional<double> eta_m;
  std::optional<double> alpha;
  std::string format;
  std::string problem;
  std::string kappa;
  std::vector<int> n_list;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON experiment configuration");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--p", f.p, "polynomial degree")->check(CLI::Range(1, 4));
  app->add_option("--n", f.n, "number of elements per direction");
  app->add_option("--method", f.method, "comma-separated methods: fem,softfem,gsfem,softfembq,gsfembq");
  app->add_option("--preset", f.preset, "embedded parameter set: table2 or table4");
  app->add_option("--eta-k", f.eta_k, "stiffness softness");
  app->add_option("--eta-m", f.eta_m, "mass softness");
  app->add_option("--alpha", f.alpha, "blending weight");
  app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--problem", f.problem, "laplace1d, laplace2d or variable_kappa");
  app->add_option("--kappa", f.kappa, "diffusion coefficient id for variable_kappa");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentConfig make_config(const CommonFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(f.config);
  if (!f.problem.empty()) c.problem = parse_problem(f.problem);
  if (!f.kappa.empty()) c.kappa_id = f.kappa;
  if (f.p) c.p = *f.p;
  if (f.n) c.n = *f.n;
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.format.empty()) c.format = f.format == "csv" ? OutputFormat::csv : OutputFormat::json;
  if (!f.n_list.empty()) c.n_list = f.n_list;
  if (!f.method.empty()) {
    c.methods.clear();
    for (const auto& name : split(f.method)) {
      MethodSpec s;
      s.method = parse_method(name);
      s.label = to_string(s.method);
      c.methods.push_back(s);
    }
  }
  for (auto& s : c.methods) {
    if (!f.preset.empty()) s.params = MethodConfig::make(s.method, c.p, preset_params(f.preset, c.p)).params();
    if (f.eta_k) s.params.eta_k = *f.eta_k;
    if (f.eta_m) s.params.eta_m = *f.eta_m;
    if (f.alpha) s.params.alpha = *f.alpha;
  }
  c.validate();
  return c;
}

int run_table(const std::string& id, const CommonFlags& f, const std::string& reference, bool no_generate,
              std::optional<double> tolerance) {
  TableOptions opt;
  if (!f.kappa.empty()) opt.kappa_id = f.kappa;
  const std::filesystem::path out = f.out.empty() ? std::filesystem::path(".") : std::filesystem::path(f.out);
  opt.reference_path = reference.empty() ? out / ("reference_" + opt.kappa_id + ".json") : std::filesystem::path(reference);
  opt.allow_generate = !no_generate;
  if (tolerance) opt.tolerance_override = *tolerance;

  const std::vector<std::string> ids = id == "all" ? table_ids() : std::vector<std::string>{id};
  bool ok = true;
  for (const auto& t : ids) {
    const TableReport r = reproduce_table(t, opt);
    const bool json = f.format == "json";
    const auto path = out / ("table_" + t + (json ? ".json" : ".csv"));
    std::filesystem::create_directories(out);
    std::ofstream(path, std::ios::binary) << (json ? r.to_json_text() : r.to_csv());
    for (const auto& c : r.cells)
      if (!c.pass)
        std::printf("  FAIL %s [%s] computed %.6g expected %.6g deviation %.3g > %.3g\n", c.row.c_str(),
                    c.column.c_str(), c.computed, c.expected, c.deviation, c.tolerance);
    std::printf("%s %s: %zu/%zu cells pass (%.1f s) -> %s\n", r.all_pass() ? "PASS" : "FAIL", t.c_str(),
                r.cells.size() - r.failures(), r.cells.size(), r.seconds, path.string().c_str());
    ok = ok && r.all_pass();
  }
  return ok ? 0 : kExitCellFailure;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_positive_definite:
    case ErrorCode::numerical_failure:
    case ErrorCode::indefinite_system: return kExitNumerical;
    default: return kExitConfig;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Softened finite element eigenvalue experiments"};
  app.require_subcommand(1);

  CommonFlags spectrum_flags, converge_flags, table_flags, reference_flags;
  auto* spectrum = app.add_subcommand("spectrum", "solve each method and write per-index errors plus summary.json");
  add_common(spectrum, spectrum_flags);

  auto* converge = app.add_subcommand("converge", "first-eigenvalue error against mesh size with fitted orders");
  add_common(converge, converge_flags);
  converge->add_option("--n-list", converge_flags.n_list, "mesh sizes, e.g. 4,8,16,32")->delimiter(',');

  std::string table_id, table_reference;
  bool table_no_generate = false;
  std::optional<double> table_tolerance;
  auto* table = app.add_subcommand("table", "reproduce a reference table and report every cell");
  table->add_option("id", table_id, "superconv, condnum_t2, condnum_t4, ratios_t2, ratios_t4, variable_kappa or all")
      ->required();
  add_common(table, table_flags);
  table->add_option("--reference", table_reference, "reference spectrum file for variable_kappa");
  table->add_flag("--no-generate", table_no_generate, "fail instead of generating a missing reference");
  table->add_option("--tolerance", table_tolerance, "replace every relative cell tolerance");

  std::string reference_path;
  auto* reference = app.add_subcommand("reference", "generate the quartic fine-mesh reference spectrum");
  add_common(reference, reference_flags);
  reference->add_option("--path", reference_path, "output file (default <out>/reference_<kappa>.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*spectrum) {
      const auto run = run_spectrum(make_config(spectrum_flags));
      for (const auto& m : run.methods)
        std::printf("%-10s lambda_min %.10g lambda_max %.6g sigma %.6g rho %.4f -> %s\n", m.label.c_str(),
                    m.lambda_min, m.lambda_max, m.sigma, m.rho_vs_fem, m.csv_path.string().c_str());
      if (!run.summary_path.empty()) std::printf("summary: %s\n", run.summary_path.string().c_str());
      return 0;
    }
    if (*converge) {
      const auto run = run_convergence(make_config(converge_flags));
      for (std::size_t m = 0; m < run.labels.size(); ++m)
        std::printf("%-10s order %.3f\n", run.labels[m].c_str(), run.orders[m]);
      if (!run.csv_path.empty()) std::printf("written: %s\n", run.csv_path.string().c_str());
      return 0;
    }
    if (*table) {
      if (table_id != "all") {
        const auto& ids = table_ids();
        if (std::find(ids.begin(), ids.end(), table_id) == ids.end()) {
          std::fprintf(stderr, "error: unknown table id '%s'\n", table_id.c_str());
          return kExitConfig;
        }
      }
      return run_table(table_id, table_flags, table_reference, table_no_generate, table_tolerance);
    }
    if (*reference) {
      ExperimentConfig c = make_config(reference_flags);
      c.problem = Problem::variable_kappa;
      const auto path = reference_path.empty() ? c.resolved_reference_path() : std::filesystem::path(reference_path);
      const auto r = generate_reference(c.kappa(), path);
      std::printf("reference %s: %zu eigenvalues, lambda_1 = %.12g -> %s\n", r.kappa_id.c_str(),
                  r.eigenvalues.size(), r.eigenvalues.front(), path.string().c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}
