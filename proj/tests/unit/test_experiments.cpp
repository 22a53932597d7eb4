#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#include "softfem/error.hpp"
#include "softfem/experiments.hpp"

using namespace softfem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("softfem_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ErrorCode config_code(const std::string& text) {
  try {
    ExperimentConfig::from_json_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

} // namespace

TEST(Config, ParsesFullDocument) {
  const auto c = ExperimentConfig::from_json_text(R"({
    "problem": "laplace1d", "n": 20, "p": 2, "n_list": [4, 8, 16],
    "methods": [{"method": "fem"},
                {"method": "gsfembq", "preset": "table2", "label": "gq"},
                {"method": "softfem", "eta_k": 0.04}],
    "outputs": {"dir": "o", "format": "json"},
    "reference": {"path": "r.json", "generate": false},
    "tolerances": {"relative": 0.05}})");
  EXPECT_EQ(c.n, 20);
  EXPECT_EQ(c.p, 2);
  ASSERT_EQ(c.methods.size(), 3u);
  EXPECT_EQ(c.methods[1].label, "gq");
  EXPECT_DOUBLE_EQ(c.methods[1].params.eta_k, 1.0 / 24);
  EXPECT_DOUBLE_EQ(c.methods[1].params.alpha, 0.95);
  EXPECT_DOUBLE_EQ(c.methods[2].params.eta_k, 0.04);
  EXPECT_EQ(c.format, OutputFormat::json);
  EXPECT_FALSE(c.generate_reference);
  EXPECT_DOUBLE_EQ(c.tolerance_override, 0.05);

  const auto again = ExperimentConfig::from_json_text(c.to_json_text());
  EXPECT_EQ(again.to_json_text(), c.to_json_text());
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
  EXPECT_EQ(config_code(R"({"nn": 3})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"methods": [{"method": "fem", "etak": 1}]})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"outputs": {"directory": "x"}})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"reference": {"file": "x"}})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"tolerances": {"absolute": 1}})"), ErrorCode::config_error);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_EQ(config_code("{not json"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"p": 5})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"n": 1})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"n": 2.5})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"problem": "heat"})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"methods": [{"method": "fem", "eta_k": 0.1}]})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"methods": [{"method": "fem"}, {"method": "fem"}]})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"methods": [{"method": "fem", "label": "a/b"}]})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"methods": [{"method": "fem", "preset": "table9"}]})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"problem": "variable_kappa", "kappa": "sinusoid"})"), ErrorCode::config_error);
  EXPECT_EQ(config_code(R"({"tolerances": {"relative": -1}})"), ErrorCode::config_error);
}

TEST(Presets, EmbeddedValues) {
  const auto t4 = preset_params("table4", 2);
  EXPECT_DOUBLE_EQ(t4.eta_k, 1.0 / 32);
  EXPECT_DOUBLE_EQ(t4.eta_m, 1.0 / 3840);
  EXPECT_DOUBLE_EQ(t4.alpha, 1.0 / 3);
  EXPECT_THROW(preset_params("table2", 4), Error);
}

TEST(Spectrum, WritesFilesAndIsDeterministic) {
  ExperimentConfig c;
  c.n = 16;
  c.p = 2;
  c.methods = {{Method::softfem, {1.0 / 24, 0.0, 1.0}, "soft"}, {Method::gsfem, {1.0 / 24, 1.0 / 2880, 1.0}, "gs"}};
  c.out_dir = scratch_dir("spectrum");
  const auto run = run_spectrum(c);
  ASSERT_EQ(run.methods.size(), 2u);
  ASSERT_TRUE(fs::exists(c.out_dir / "spectrum_soft.csv"));
  ASSERT_TRUE(fs::exists(run.summary_path));

  const std::string csv = slurp(c.out_dir / "spectrum_gs.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "j,lambda_h,lambda_ref,rel_err,l2_err,h1_err");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 31);

  const auto summary = nlohmann::json::parse(slurp(run.summary_path));
  EXPECT_EQ(summary["schema"], "softfem.summary/1");
  EXPECT_EQ(summary["baseline"]["label"], "FEM");
  EXPECT_EQ(summary["methods"].size(), 2u);
  EXPECT_EQ(summary["methods"][1]["file"], "spectrum_gs.csv");
  EXPECT_GT(summary["methods"][0]["rho"].get<double>(), 1.0);

  const std::string first = slurp(run.summary_path);
  run_spectrum(c);
  EXPECT_EQ(slurp(c.out_dir / "spectrum_gs.csv"), csv);
  EXPECT_EQ(slurp(run.summary_path), first);
  fs::remove_all(c.out_dir);
}

TEST(Spectrum, JsonFormatAndEmptyMethodList) {
  ExperimentConfig c;
  c.n = 8;
  c.format = OutputFormat::json;
  c.methods = {{Method::fem, {}, "fem"}};
  c.out_dir = scratch_dir("json");
  const auto run = run_spectrum(c);
  const auto rows = nlohmann::json::parse(slurp(c.out_dir / "spectrum_fem.json"));
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_NEAR(rows[0]["lambda_ref"].get<double>(), std::numbers::pi * std::numbers::pi, 1e-12);

  ExperimentConfig empty;
  empty.out_dir = scratch_dir("empty");
  const auto none = run_spectrum(empty);
  EXPECT_TRUE(none.methods.empty());
  EXPECT_FALSE(fs::exists(empty.out_dir));
  fs::remove_all(c.out_dir);
}

TEST(Convergence, GalerkinOrders) {
  ExperimentConfig c;
  c.p = 1;
  c.n_list = {8, 16, 32, 64};
  c.methods = {{Method::fem, {}, "fem"}, {Method::gsfem, {1.0 / 12, 1.0 / 360, 1.0}, "gs"}};
  const auto run = compute_convergence(c);
  ASSERT_EQ(run.orders.size(), 2u);
  EXPECT_NEAR(run.orders[0], 2.0, 0.05);
  EXPECT_NEAR(run.orders[1], 6.0, 0.1);
  EXPECT_GT(run.errors[0][0], 0.0);

  c.n_list = {8, 16};
  EXPECT_THROW(compute_convergence(c), Error);
}

TEST(Convergence, TwoDimensionalGalerkin) {
  ExperimentConfig c;
  c.problem = Problem::laplace2d;
  c.p = 1;
  c.n_list = {4, 8, 16};
  c.methods = {{Method::fem, {}, "fem"}};
  const auto run = compute_convergence(c);
  EXPECT_NEAR(run.orders[0], 2.0, 0.1);
}

TEST(Reference, RoundTripAndMissingFile) {
  auto r = compute_reference(DiffusionField::constant(1.0), 3, 40);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(r.eigenvalues[0], pi2, 1e-9 * pi2);
  EXPECT_NEAR(r.eigenvalues[4], 25 * pi2, 1e-6 * 25 * pi2);
  const auto back = ReferenceSpectrum::from_json_text(r.to_json_text());
  EXPECT_EQ(back.eigenvalues, r.eigenvalues);
  EXPECT_EQ(back.kappa_id, r.kappa_id);

  const auto dir = scratch_dir("reference");
  try {
    load_or_generate_reference(DiffusionField::exp_x_minus_x2(), dir / "missing.json", false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_reference);
  }
  EXPECT_THROW(reproduce_table("nonexistent"), Error);
}

TEST(Tables, IdsAreListed) {
  const auto& ids = table_ids();
  EXPECT_EQ(ids.size(), 6u);
  EXPECT_NE(std::find(ids.begin(), ids.end(), "variable_kappa"), ids.end());
}

TEST(Tables, RatiosReportAndSerialize) {
  const auto r = reproduce_table("ratios_t4");
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.failures(), 0u);
  const auto csv = r.to_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(r.cells.size()) + 1);
  const auto doc = nlohmann::json::parse(r.to_json_text());
  EXPECT_EQ(doc["cells"].size(), r.cells.size());

  TableOptions strict;
  strict.tolerance_override = 1e-12;
  EXPECT_FALSE(reproduce_table("ratios_t4", strict).all_pass());
}
