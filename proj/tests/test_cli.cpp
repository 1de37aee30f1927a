// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/cli.hpp"
#include "qpureb/errors.hpp"
#include "qpureb/model_states.hpp"
#include "qpureb/plot.hpp"
#include "qpureb/serialize.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qpureb::cli {
namespace {

namespace fs = std::filesystem;

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qpureb");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qpureb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

TEST(Parsing, Lists) {
  EXPECT_EQ(parse_double_list("0.1, 0.5,1"), (std::vector<double>{0.1, 0.5, 1.0}));
  EXPECT_EQ(parse_int_list("4,8,16"), (std::vector<int>{4, 8, 16}));
  EXPECT_THROW(parse_int_list("4,x"), ArgumentError);
  EXPECT_THROW(parse_double_list("0.1,"), ArgumentError);
  const auto r = parse_range("0:1:5");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_EQ(r.front(), 0.0);
  EXPECT_EQ(r.back(), 1.0);
  EXPECT_THROW(parse_range("0:1"), ArgumentError);
  EXPECT_EQ(parse_dims("3x2"), (Dims{3, 2}));
  EXPECT_THROW(parse_dims("3"), ArgumentError);
}

TEST(Parsing, StateSpecs) {
  EXPECT_EQ((parse_state_spec("werner:3:0.9").matrix() - werner(3, 0.9).matrix()).norm(), 0.0);
  EXPECT_EQ((parse_state_spec("isotropic:3:0.2").matrix() - isotropic(3, 0.2).matrix()).norm(), 0.0);
  EXPECT_EQ(parse_state_spec("tiles").dims(), (Dims{3, 3}));
  EXPECT_EQ(parse_state_spec("pyramid").dims(), (Dims{3, 3}));
  EXPECT_EQ(parse_state_spec("example1:0.233").dims(), (Dims{2, 2}));
  EXPECT_EQ(parse_state_spec("example2:0.5").dims(), (Dims{2, 2}));
  EXPECT_EQ(parse_state_spec("example2:0.5:3").dims(), (Dims{3, 2}));
  EXPECT_THROW(parse_state_spec("werner:3"), ArgumentError);
  EXPECT_THROW(parse_state_spec("bell"), ArgumentError);
  EXPECT_THROW(parse_state_spec("werner:2:abc"), ArgumentError);
  EXPECT_THROW(parse_state_spec("file:/nonexistent/rho.json"), IoError);
}

TEST(Parsing, FamiliesAndDirections) {
  const Family w = parse_family("werner:2");
  EXPECT_NEAR(w.analytic(1.0), std::log(2.0), 1e-10);
  EXPECT_TRUE(static_cast<bool>(w.beta_to_alpha));
  EXPECT_FALSE(static_cast<bool>(parse_family("example1").beta_to_alpha));
  EXPECT_THROW(parse_family("werner"), ArgumentError);
  const Direction d = parse_direction("isotropic:3");
  EXPECT_NEAR(d.beta_to_alpha(beta_ppt(d.ray)), 0.25, 1e-10);
  EXPECT_EQ(parse_direction("random:2:3:7").ray.dims(), (Dims{2, 3}));
  EXPECT_EQ(parse_direction("tiles").ray.dims(), (Dims{3, 3}));
  EXPECT_THROW(parse_direction("random:2:3"), ArgumentError);
}

TEST_F(CliRun, ConfigFile) {
  const auto path = out("run.cfg");
  std::ofstream(path) << "# comment\nk = 4\n\nrestarts=1 # trailing\n";
  const auto cfg = read_config_file(path);
  EXPECT_EQ(cfg.at("k"), "4");
  EXPECT_EQ(cfg.at("restarts"), "1");
  std::ofstream(path) << "novalue\n";
  EXPECT_THROW(read_config_file(path), ArgumentError);
  EXPECT_THROW(read_config_file(out("missing.cfg")), IoError);
}

TEST_F(CliRun, ReeWritesCheckpointAndManifest) {
  ASSERT_EQ(invoke({"ree", "werner:2:0.9", "--k", "4", "--out", out("a")}), kOk);
  const auto ck = nlohmann::json::parse(slurp(dir_ / "a" / "ree.json"));
  EXPECT_EQ(ck.at("n"), 4);
  const auto m = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(m.at("command"), "ree");
  EXPECT_EQ(m.at("status"), "ok");
  EXPECT_EQ(m.at("seed"), 20220917);
  EXPECT_EQ(m.at("config").at("--k"), "4");
  EXPECT_TRUE(m.contains("wall_time_seconds"));
  EXPECT_TRUE(m.contains("version"));
}

TEST_F(CliRun, ReeExamples) {
  ASSERT_EQ(invoke({"ree", "example2:0.5", "--k", "4", "--out", out("e2")}), kOk);
  EXPECT_LE(nlohmann::json::parse(slurp(dir_ / "e2" / "ree.json")).at("objective").get<double>(), 1e-9);
  ASSERT_EQ(invoke({"ree", "werner:3:0.9", "--k", "8", "--restarts", "1", "--out", out("w3")}), kOk);
  EXPECT_LE(nlohmann::json::parse(slurp(dir_ / "w3" / "ree.json")).at("objective").get<double>(),
            werner_ree_analytic(3, 0.9) + 5e-3);
}

TEST_F(CliRun, FileStateSpec) {
  save_density_matrix(dir_ / "rho.json", werner(2, 0.3));
  EXPECT_EQ(invoke({"ree", "file:" + (dir_ / "rho.json").string(), "--k", "3", "--out", out("f")}), kOk);
  std::ofstream(dir_ / "bad.json") << R"({"d_a": 1, "d_b": 2, "re": [[2, 0], [0, -1]], "im": [[0, 0], [0, 0]]})";
  EXPECT_EQ(invoke({"ree", "file:" + (dir_ / "bad.json").string(), "--out", out("g")}), kUsage);
}

TEST_F(CliRun, ExitCodes) {
  EXPECT_EQ(invoke({"ree", "nonsense", "--out", out("x")}), kUsage);
  EXPECT_EQ(invoke({"ree", "werner:2:0.5", "--k", "0", "--out", out("x")}), kUsage);
  EXPECT_EQ(invoke({"ree", "werner:2:0.5", "--backend", "taylor", "--out", out("x")}), kUsage);
  EXPECT_EQ(invoke({"frobnicate"}), kUsage);
  EXPECT_EQ(invoke({}), kUsage);
  EXPECT_EQ(invoke({"--help"}), kOk);
  EXPECT_EQ(invoke({"circuit", "--k", "4", "--layers", "0", "--out", out("x")}), kUsage);
  std::ofstream(dir_ / "blocker") << "file";
  EXPECT_EQ(invoke({"ree", "werner:2:0.5", "--out", (dir_ / "blocker" / "sub").string()}), kIo);
  // One iteration cannot converge on an entangled state.
  EXPECT_EQ(invoke({"ree", "werner:2:0.9", "--k", "6", "--max-iters", "1", "--restarts", "1", "--out", out("nc")}),
            kNonConvergence);
  EXPECT_TRUE(fs::exists(dir_ / "nc" / "ree.json"));
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "nc" / "manifest.json")).at("status"), "not_converged");
}

TEST_F(CliRun, ConfigOverridesFlags) {
  std::ofstream(out("c.cfg")) << "k=3\nrestarts=1\n";
  ASSERT_EQ(invoke({"ree", "werner:2:0.9", "--k", "16", "--config", out("c.cfg"), "--out", out("c")}), kOk);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "c" / "ree.json")).at("n"), 3);
  std::ofstream(out("bad.cfg")) << "colour=blue\n";
  EXPECT_EQ(invoke({"ree", "werner:2:0.9", "--config", out("bad.cfg"), "--out", out("d")}), kUsage);
  EXPECT_EQ(invoke({"ree", "werner:2:0.9", "--config", out("none.cfg"), "--out", out("d")}), kIo);
}

TEST_F(CliRun, CurveIsDeterministic) {
  const std::vector<std::string> args{"curve", "werner:2", "--alphas", "0.2,0.6,1.0", "--k-list", "4,6"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", out("a")});
  b.insert(b.end(), {"--out", out("b"), "--threads", "1"});
  ASSERT_EQ(invoke(a), kOk);
  ASSERT_EQ(invoke(b), kOk);
  const std::string csv = slurp(dir_ / "a" / "curve.csv");
  EXPECT_EQ(csv, slurp(dir_ / "b" / "curve.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,k,ree");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_NE(slurp(dir_ / "a" / "curve.svg").find("<svg"), std::string::npos);
  EXPECT_EQ(invoke({"curve", "werner:2", "--out", out("c")}), kUsage);
  EXPECT_EQ(invoke({"curve", "werner:2", "--alpha-range", "0:0.3:2", "--k-list", "2", "--out", out("c")}), kOk);
}

TEST_F(CliRun, BoundaryReportsAlpha) {
  ASSERT_EQ(invoke({"boundary", "werner:2", "--methods", "dm,ppt,pureb", "--k-list", "4", "--out", out("b")}), kOk);
  const std::string csv = slurp(dir_ / "b" / "boundary.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,k,beta,alpha,flagged");
  const auto pos = csv.find("pureb,4,");
  ASSERT_NE(pos, std::string::npos);
  std::stringstream row(csv.substr(pos));
  std::string method, k, beta, alpha;
  std::getline(row, method, ',');
  std::getline(row, k, ',');
  std::getline(row, beta, ',');
  std::getline(row, alpha, ',');
  EXPECT_NEAR(std::stod(alpha), 0.64585, 5e-3);
  EXPECT_EQ(invoke({"boundary", "werner:2", "--methods", "sdp", "--out", out("c")}), kUsage);
}

TEST_F(CliRun, PlaneAndSurvey) {
  ASSERT_EQ(invoke({"plane", "tiles", "pyramid", "--resolution", "8", "--methods", "dm,ppt", "--out", out("p")}), kOk);
  const std::string csv = slurp(dir_ / "p" / "plane.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta,beta_dm,beta_ppt");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_EQ(invoke({"plane", "tiles", "tiles", "--out", out("q")}), kUsage);

  ASSERT_EQ(invoke({"survey", "--samples", "3", "--dims", "2x2", "--cha-rounds", "5", "--out", out("s")}), kOk);
  const std::string s = slurp(dir_ / "s" / "survey.csv");
  EXPECT_EQ(s.substr(0, s.find('\n')), "sample,beta_ppt,beta_cha,gap");
  const auto m = nlohmann::json::parse(slurp(dir_ / "s" / "manifest.json"));
  EXPECT_EQ(m.at("summary").at("negative_gaps"), 0);
}

TEST_F(CliRun, KextErrorAndCircuit) {
  ASSERT_EQ(invoke({"kext-error", "--samples", "1", "--k-list", "2", "--out", out("k")}), kOk);
  const std::string k = slurp(dir_ / "k" / "kext_error.csv");
  EXPECT_EQ(k.substr(0, k.find('\n')), "direction_id,k,beta,reference,relative_error");
  EXPECT_EQ(invoke({"kext-error", "--reference", out("missing.csv"), "--out", out("k2")}), kIo);

  ASSERT_EQ(invoke({"circuit", "--k", "2", "--layers", "3", "--alphas", "0.5,1", "--restarts", "2", "--out", out("c")}),
            kOk);
  EXPECT_TRUE(fs::exists(dir_ / "c" / "circuit.csv"));
  const std::string b = slurp(dir_ / "c" / "circuit_boundary.csv");
  EXPECT_EQ(b.substr(0, b.find('\n')), "k,layers,beta,alpha");
}

TEST(Plot, CsvAndSvgHelpers) {
  CsvWriter csv({"a", "b"});
  csv.row({"1", "2"});
  EXPECT_EQ(csv.str(), "a,b\n1,2\n");
  EXPECT_THROW(csv.row({"1"}), ContractViolation);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  const std::string svg = line_plot_svg({{"s", {1, 2, 3}, {1e-3, 0.0, 1.0}}}, {"t", "x", "y", true});
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(polar_plot_svg({{"r", {0, 1, 2}, {1, 1, 1}}}, {}).find("</svg>"), std::string::npos);
  EXPECT_THROW(write_text_file("/nonexistent/dir/file.txt", "x"), IoError);
}

}  // namespace
}  // namespace qpureb::cli
