#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "softfem/error.hpp"
#include "softfem/experiments.hpp"

namespace softfem {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  SOFTFEM_THROW_IF(!obj.is_object(), config_error, where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    SOFTFEM_THROW_IF(!allowed.count(key), config_error, "unknown key '" + key + "' in " + where);
}

template <class T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::config_error, "bad value for '" + key + "' in " + where);
  }
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  SOFTFEM_THROW_IF(!v.is_number_integer(), config_error, "'" + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

MethodSpec parse_method_spec(const json& j, int p) {
  const std::string where = "method entry";
  reject_unknown(j, {"method", "preset", "eta_k", "eta_m", "alpha", "label"}, where);
  SOFTFEM_THROW_IF(!j.contains("method"), config_error, "method entry needs a 'method' field");
  MethodSpec spec;
  spec.method = parse_method(get_as<std::string>(j, "method", where));
  ParameterTriple t{};
  if (j.contains("preset")) {
    const auto preset = get_as<std::string>(j, "preset", where);
    t = MethodConfig::make(spec.method, p, preset_params(preset, p)).params();
  }
  if (j.contains("eta_k")) t.eta_k = get_as<double>(j, "eta_k", where);
  if (j.contains("eta_m")) t.eta_m = get_as<double>(j, "eta_m", where);
  if (j.contains("alpha")) t.alpha = get_as<double>(j, "alpha", where);
  spec.params = t;
  spec.label = j.contains("label") ? get_as<std::string>(j, "label", where) : std::string(to_string(spec.method));
  return spec;
}

} // namespace

const char* to_string(Problem p) noexcept {
  switch (p) {
    case Problem::laplace1d: return "laplace1d";
    case Problem::laplace2d: return "laplace2d";
    case Problem::variable_kappa: return "variable_kappa";
  }
  return "?";
}

Problem parse_problem(const std::string& name) {
  if (name == "laplace1d") return Problem::laplace1d;
  if (name == "laplace2d") return Problem::laplace2d;
  if (name == "variable_kappa") return Problem::variable_kappa;
  throw Error(ErrorCode::config_error, "unknown problem '" + name + "'");
}

ParameterTriple preset_params(const std::string& preset, int p) {
  SOFTFEM_THROW_IF(p < 1 || p > 3, config_error, "parameter presets exist for p = 1, 2, 3 only");
  if (preset == "table2") {
    static const double ek[] = {1.0 / 12, 1.0 / 24, 1.0 / 40};
    static const double em[] = {1.0 / 360, 1.0 / 2880, 1.0 / 57600};
    return {ek[p - 1], em[p - 1], 0.95};
  }
  if (preset == "table4") {
    static const double ek[] = {1.0 / 8, 1.0 / 32, 1.0 / 72};
    static const double em[] = {1.0 / 96, 1.0 / 3840, 1.0 / 84480};
    return {ek[p - 1], em[p - 1], 1.0 / (p + 1)};
  }
  throw Error(ErrorCode::config_error, "unknown parameter preset '" + preset + "'");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config_error, std::string("config is not valid JSON: ") + e.what());
  }
  const std::string where = "config";
  reject_unknown(doc, {"problem", "kappa", "n", "ny", "p", "n_list", "methods", "outputs", "reference", "tolerances"},
                 where);
  ExperimentConfig c;
  if (doc.contains("problem")) c.problem = parse_problem(get_as<std::string>(doc, "problem", where));
  if (doc.contains("kappa")) c.kappa_id = get_as<std::string>(doc, "kappa", where);
  if (doc.contains("n")) c.n = get_int(doc, "n", where);
  if (doc.contains("ny")) c.ny = get_int(doc, "ny", where);
  if (doc.contains("p")) c.p = get_int(doc, "p", where);
  if (doc.contains("n_list")) {
    SOFTFEM_THROW_IF(!doc["n_list"].is_array(), config_error, "'n_list' must be an array");
    for (const auto& v : doc["n_list"]) {
      SOFTFEM_THROW_IF(!v.is_number_integer(), config_error, "'n_list' entries must be integers");
      c.n_list.push_back(v.get<int>());
    }
  }
  if (doc.contains("methods")) {
    SOFTFEM_THROW_IF(!doc["methods"].is_array(), config_error, "'methods' must be an array");
    for (const auto& m : doc["methods"]) c.methods.push_back(parse_method_spec(m, c.p));
  }
  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    reject_unknown(o, {"dir", "format"}, "outputs");
    if (o.contains("dir")) c.out_dir = get_as<std::string>(o, "dir", "outputs");
    if (o.contains("format")) {
      const auto f = get_as<std::string>(o, "format", "outputs");
      SOFTFEM_THROW_IF(f != "csv" && f != "json", config_error, "outputs.format must be csv or json");
      c.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
    }
  }
  if (doc.contains("reference")) {
    const json& r = doc["reference"];
    reject_unknown(r, {"path", "generate"}, "reference");
    if (r.contains("path")) c.reference_path = get_as<std::string>(r, "path", "reference");
    if (r.contains("generate")) c.generate_reference = get_as<bool>(r, "generate", "reference");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    reject_unknown(t, {"relative"}, "tolerances");
    if (t.contains("relative")) c.tolerance_override = get_as<double>(t, "relative", "tolerances");
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  SOFTFEM_THROW_IF(!in, config_error, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
  json doc;
  doc["problem"] = to_string(problem);
  doc["kappa"] = kappa_id;
  doc["n"] = n;
  doc["ny"] = ny;
  doc["p"] = p;
  doc["n_list"] = n_list;
  doc["methods"] = json::array();
  for (const auto& m : methods)
    doc["methods"].push_back({{"method", to_string(m.method)},
                              {"eta_k", m.params.eta_k},
                              {"eta_m", m.params.eta_m},
                              {"alpha", m.params.alpha},
                              {"label", m.label}});
  doc["outputs"] = {{"dir", out_dir.string()}, {"format", format == OutputFormat::csv ? "csv" : "json"}};
  doc["reference"] = {{"path", reference_path.string()}, {"generate", generate_reference}};
  if (std::isfinite(tolerance_override)) doc["tolerances"] = {{"relative", tolerance_override}};
  return doc.dump(2);
}

void ExperimentConfig::validate() const {
  SOFTFEM_THROW_IF(p < 1 || p > 4, config_error, "p must be in [1, 4]");
  SOFTFEM_THROW_IF(n < 2, config_error, "n must be at least 2");
  SOFTFEM_THROW_IF(ny < 0 || ny == 1, config_error, "ny must be 0 (same as n) or at least 2");
  for (int v : n_list) SOFTFEM_THROW_IF(v < 2, config_error, "n_list entries must be at least 2");
  SOFTFEM_THROW_IF(std::isfinite(tolerance_override) && !(tolerance_override > 0.0), config_error,
                   "tolerances.relative must be positive");
  (void)kappa();
  std::set<std::string> labels;
  for (const auto& m : methods) {
    MethodConfig mc{m.method, p, m.params.eta_k, m.params.eta_m, m.params.alpha};
    try {
      mc.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::config_error, e.what());
    }
    SOFTFEM_THROW_IF(m.label.empty(), config_error, "method labels must be non-empty");
    SOFTFEM_THROW_IF(m.label.find_first_of("/\\,") != std::string::npos, config_error,
                     "method label '" + m.label + "' contains a path separator or comma");
    SOFTFEM_THROW_IF(!labels.insert(m.label).second, config_error, "duplicate method label '" + m.label + "'");
  }
}

DiffusionField ExperimentConfig::kappa() const {
  if (problem != Problem::variable_kappa) return DiffusionField::constant(1.0);
  try {
    return DiffusionField::from_id(kappa_id);
  } catch (const Error& e) {
    throw Error(ErrorCode::config_error, e.what());
  }
}

std::filesystem::path ExperimentConfig::resolved_reference_path() const {
  if (!reference_path.empty()) return reference_path;
  return out_dir / ("reference_" + kappa_id + ".json");
}

} // namespace softfem
