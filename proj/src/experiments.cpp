#include "softfem/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "softfem/error.hpp"
#include "softfem/metrics.hpp"
#include "softfem/oracle.hpp"

namespace softfem {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  SOFTFEM_THROW_IF(!out, config_error, "cannot write " + path.string());
  out << text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  SOFTFEM_THROW_IF(!in, missing_reference, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json diagnostics_json(const SolverDiagnostics& d) {
  return {{"cholesky_ok", d.cholesky_ok},
          {"max_residual", d.max_residual},
          {"orthonormality_error", d.orthonormality_error},
          {"trace_error", d.trace_error}};
}

SolverDiagnostics diagnostics_from_json(const json& j) {
  SolverDiagnostics d;
  auto num = [&](const char* key) {
    return j.contains(key) && j[key].is_number() ? j[key].get<double>() : std::numeric_limits<double>::quiet_NaN();
  };
  d.cholesky_ok = j.value("cholesky_ok", false);
  d.max_residual = num("max_residual");
  d.orthonormality_error = num("orthonormality_error");
  d.trace_error = num("trace_error");
  return d;
}

MethodConfig method_config(const MethodSpec& spec, int p, const DiffusionField& kappa) {
  MethodConfig c{spec.method, p, spec.params.eta_k, spec.params.eta_m, spec.params.alpha};
  c.kappa = kappa;
  return c;
}

SymmetricSystem build_for(const MethodConfig& c, Problem problem, int n, int ny) {
  if (problem == Problem::laplace2d) return build_system_2d(TensorMesh2D::uniform(n, ny > 0 ? ny : n), c);
  return build_system(Mesh1D::uniform(0.0, 1.0, n), c);
}

// Runs body(i) for i in [0, count) on OpenMP workers and rethrows the first
// failure (lowest index) on the calling thread.
template <class Body>
void parallel_for(std::size_t count, Body body) {
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> reference_values(const ExperimentConfig& c, std::size_t count) {
  std::vector<double> out;
  switch (c.problem) {
    case Problem::laplace1d:
      for (const auto& e : exact_spectrum_1d(int(count))) out.push_back(e.lambda);
      break;
    case Problem::laplace2d:
      for (const auto& e : exact_spectrum_2d(int(count))) out.push_back(e.lambda);
      break;
    case Problem::variable_kappa: {
      const auto ref = load_or_generate_reference(c.kappa(), c.resolved_reference_path(), c.generate_reference);
      out = ref.eigenvalues;
      if (out.size() > count) out.resize(count);
      break;
    }
  }
  return out;
}

} // namespace

SpectrumRun run_spectrum(const ExperimentConfig& config) {
  config.validate();
  SpectrumRun run;
  if (config.methods.empty()) {
    std::cerr << "warning: no methods configured; nothing to do\n";
    return run;
  }
  const DiffusionField kappa = config.kappa();
  const bool want_vectors = config.problem == Problem::laplace1d;

  // Baseline FEM goes last unless the user listed it.
  std::vector<MethodSpec> specs = config.methods;
  std::size_t baseline = specs.size();
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (specs[i].method == Method::fem) baseline = i;
  const bool extra_baseline = baseline == specs.size();
  if (extra_baseline) specs.push_back({Method::fem, {}, "FEM"});

  std::vector<SymmetricSystem> systems(specs.size());
  std::vector<Spectrum> spectra(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) {
    systems[i] = build_for(method_config(specs[i], config.p, kappa), config.problem, config.n, config.ny);
    SolveOptions opts;
    opts.want_vectors = want_vectors && (i < config.methods.size());
    spectra[i] = solve_gevp(systems[i], opts);
  });

  const StiffnessReport base = condition_number(spectra[baseline].eigenvalues);
  const std::vector<double> ref = reference_values(config, spectra.front().size());
  const Mesh1D mesh1d = Mesh1D::uniform(0.0, 1.0, config.n);

  // Outputs are written sequentially in configuration order.
  json summary;
  summary["schema"] = "softfem.summary/1";
  summary["problem"] = to_string(config.problem);
  summary["kappa"] = kappa.id();
  summary["p"] = config.p;
  summary["n"] = config.n;
  summary["ny"] = config.problem == Problem::laplace2d ? (config.ny > 0 ? config.ny : config.n) : 0;
  summary["baseline"] = {{"label", specs[baseline].label},
                         {"lambda_min", base.lambda_min},
                         {"lambda_max", base.lambda_max},
                         {"sigma", base.sigma}};
  summary["methods"] = json::array();
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    const Spectrum& sp = spectra[i];
    const StiffnessReport rep = condition_number(sp.eigenvalues);
    const ReductionRatio red = reduction_ratios(base, rep);
    const auto rel = eigenvalue_errors(sp.eigenvalues, ref);
    EigenfunctionErrors ef;
    if (want_vectors) ef = eigenfunction_errors(sp, exact_spectrum_1d(int(sp.size())), mesh1d, config.p);

    MethodSummary ms;
    ms.label = specs[i].label;
    ms.config = systems[i].config;
    ms.lambda_min = rep.lambda_min;
    ms.lambda_max = rep.lambda_max;
    ms.sigma = rep.sigma;
    ms.rho_vs_fem = red.rho;
    ms.rho_percent = red.percent;
    ms.diagnostics = sp.diagnostics;

    auto opt = [](const std::vector<std::optional<double>>& v, std::size_t j) -> std::optional<double> {
      return j < v.size() ? v[j] : std::nullopt;
    };
    if (config.format == OutputFormat::csv) {
      std::ostringstream os;
      os << "j,lambda_h,lambda_ref,rel_err,l2_err,h1_err\n";
      for (std::size_t j = 0; j < sp.size(); ++j) {
        os << (j + 1) << ',' << fmt17(sp.eigenvalues[j]) << ',';
        if (j < ref.size()) os << fmt17(ref[j]) << ',' << fmt17(rel[j]);
        else os << ',';
        const auto l2 = opt(ef.l2, j), h1 = opt(ef.h1, j);
        os << ',' << (l2 ? fmt17(*l2) : "") << ',' << (h1 ? fmt17(*h1) : "") << '\n';
      }
      ms.csv_path = config.out_dir / ("spectrum_" + ms.label + ".csv");
      write_file(ms.csv_path, os.str());
    } else {
      json rows = json::array();
      for (std::size_t j = 0; j < sp.size(); ++j) {
        const auto l2 = opt(ef.l2, j), h1 = opt(ef.h1, j);
        rows.push_back({{"j", j + 1},
                        {"lambda_h", sp.eigenvalues[j]},
                        {"lambda_ref", j < ref.size() ? json(ref[j]) : json()},
                        {"rel_err", j < ref.size() ? json(rel[j]) : json()},
                        {"l2_err", l2 ? json(*l2) : json()},
                        {"h1_err", h1 ? json(*h1) : json()}});
      }
      ms.csv_path = config.out_dir / ("spectrum_" + ms.label + ".json");
      write_file(ms.csv_path, rows.dump(1) + "\n");
    }

    summary["methods"].push_back({{"label", ms.label},
                                  {"method", to_string(specs[i].method)},
                                  {"eta_k", ms.config.eta_k},
                                  {"eta_m", ms.config.eta_m},
                                  {"alpha", ms.config.alpha},
                                  {"dofs", sp.size()},
                                  {"lambda_min", ms.lambda_min},
                                  {"lambda_max", ms.lambda_max},
                                  {"sigma", ms.sigma},
                                  {"rho", ms.rho_vs_fem},
                                  {"rho_percent", ms.rho_percent},
                                  {"diagnostics", diagnostics_json(ms.diagnostics)},
                                  {"file", ms.csv_path.filename().string()}});
    run.methods.push_back(std::move(ms));
  }
  run.summary_path = config.out_dir / "summary.json";
  write_file(run.summary_path, summary.dump(2) + "\n");
  return run;
}

double first_eigenvalue(const MethodConfig& method, Problem problem, int n, int ny) {
  const SymmetricSystem sys = build_for(method, problem, n, ny);
  return lowest_eigenvalue(sys.a, sys.b);
}

ConvergenceRun compute_convergence(const ExperimentConfig& config) {
  config.validate();
  SOFTFEM_THROW_IF(config.n_list.size() < 3, config_error, "convergence runs need at least three mesh sizes");
  ConvergenceRun run;
  run.n_list = config.n_list;
  if (config.methods.empty()) {
    std::cerr << "warning: no methods configured; nothing to do\n";
    return run;
  }
  const DiffusionField kappa = config.kappa();
  double exact = 0.0;
  switch (config.problem) {
    case Problem::laplace1d: exact = exact_spectrum_1d(1).front().lambda; break;
    case Problem::laplace2d: exact = exact_spectrum_2d(1).front().lambda; break;
    case Problem::variable_kappa: exact = reference_values(config, 1).front(); break;
  }

  const std::size_t nm = config.methods.size(), nn = config.n_list.size();
  run.errors.assign(nm, std::vector<double>(nn, 0.0));
  parallel_for(nm * nn, [&](std::size_t k) {
    const std::size_t m = k / nn, i = k % nn;
    const int n = config.n_list[i];
    const double lam = first_eigenvalue(method_config(config.methods[m], config.p, kappa), config.problem, n,
                                        config.problem == Problem::laplace2d ? n : 0);
    run.errors[m][i] = (lam - exact) / exact;
  });

  std::vector<double> h;
  for (int n : config.n_list) h.push_back(1.0 / n);
  for (std::size_t m = 0; m < nm; ++m) {
    run.labels.push_back(config.methods[m].label);
    std::vector<double> mag;
    for (double e : run.errors[m]) mag.push_back(std::abs(e));
    run.orders.push_back(fit_order(h, mag).slope);
  }
  return run;
}

ConvergenceRun run_convergence(const ExperimentConfig& config) {
  ConvergenceRun run = compute_convergence(config);
  if (run.labels.empty()) return run;
  std::ostringstream os;
  if (config.format == OutputFormat::csv) {
    os << 'N';
    for (const auto& l : run.labels) os << ',' << l;
    os << '\n';
    for (std::size_t i = 0; i < run.n_list.size(); ++i) {
      os << run.n_list[i];
      for (const auto& col : run.errors) os << ',' << fmt17(col[i]);
      os << '\n';
    }
    os << "order";
    for (double o : run.orders) os << ',' << fmt17(o);
    os << '\n';
    run.csv_path = config.out_dir / "convergence.csv";
  } else {
    json doc;
    doc["n_list"] = run.n_list;
    doc["methods"] = json::array();
    for (std::size_t m = 0; m < run.labels.size(); ++m)
      doc["methods"].push_back({{"label", run.labels[m]}, {"rel_err", run.errors[m]}, {"order", run.orders[m]}});
    os << doc.dump(2) << '\n';
    run.csv_path = config.out_dir / "convergence.json";
  }
  write_file(run.csv_path, os.str());
  return run;
}

std::string ReferenceSpectrum::to_json_text() const {
  json doc;
  doc["problem"] = problem;
  doc["kappa"] = kappa_id;
  doc["method"] = "FEM";
  doc["degree"] = degree;
  doc["n"] = n;
  doc["diagnostics"] = diagnostics_json(diagnostics);
  doc["eigenvalues"] = eigenvalues;
  return doc.dump(1) + "\n";
}

ReferenceSpectrum ReferenceSpectrum::from_json_text(const std::string& text) {
  ReferenceSpectrum r;
  try {
    const json doc = json::parse(text);
    r.problem = doc.at("problem").get<std::string>();
    r.kappa_id = doc.at("kappa").get<std::string>();
    r.degree = doc.at("degree").get<int>();
    r.n = doc.at("n").get<int>();
    r.eigenvalues = doc.at("eigenvalues").get<std::vector<double>>();
    if (doc.contains("diagnostics")) r.diagnostics = diagnostics_from_json(doc["diagnostics"]);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::missing_reference, std::string("malformed reference file: ") + e.what());
  }
  SOFTFEM_THROW_IF(r.eigenvalues.empty(), missing_reference, "reference file has no eigenvalues");
  return r;
}

ReferenceSpectrum compute_reference(const DiffusionField& kappa, int degree, int n) {
  constexpr std::size_t kRefined = 50;
  MethodConfig c = MethodConfig::fem(degree);
  c.kappa = kappa;
  const SymmetricSystem sys = build_system(Mesh1D::uniform(0.0, 1.0, n), c);
  SolveOptions opts;
  opts.want_vectors = false;
  opts.exec = kernels::Execution::parallel;
  const Spectrum sp = solve_gevp(sys, opts);
  ReferenceSpectrum r;
  r.problem = to_string(Problem::variable_kappa);
  r.kappa_id = kappa.id();
  r.degree = degree;
  r.n = n;
  r.eigenvalues = refine_lowest_eigenvalues(sys.a, sys.b, sp.eigenvalues, kRefined);
  r.diagnostics = sp.diagnostics;
  return r;
}

ReferenceSpectrum generate_reference(const DiffusionField& kappa, const std::filesystem::path& path) {
  ReferenceSpectrum r = compute_reference(kappa);
  write_file(path, r.to_json_text());
  return r;
}

ReferenceSpectrum load_or_generate_reference(const DiffusionField& kappa, const std::filesystem::path& path,
                                             bool allow_generate) {
  if (std::filesystem::exists(path)) {
    ReferenceSpectrum r = ReferenceSpectrum::from_json_text(read_file(path));
    SOFTFEM_THROW_IF(r.kappa_id != kappa.id(), missing_reference,
                     "reference " + path.string() + " was generated for kappa '" + r.kappa_id + "', not '" +
                         kappa.id() + "'");
    return r;
  }
  SOFTFEM_THROW_IF(!allow_generate, missing_reference,
                   "reference spectrum " + path.string() + " is missing and generation is disabled");
  return generate_reference(kappa, path);
}

} // namespace softfem
