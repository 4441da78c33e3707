#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"

using nlohmann::json;
namespace cli = magicfreq::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, ParseAngle) {
  EXPECT_DOUBLE_EQ(cli::parse_angle("0.5"), 0.5);
  EXPECT_DOUBLE_EQ(cli::parse_angle("pi"), std::numbers::pi);
  EXPECT_DOUBLE_EQ(cli::parse_angle("pi/2"), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(cli::parse_angle("3*pi/4"), 3 * std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(cli::parse_angle("-pi/3"), -std::numbers::pi / 3);
  EXPECT_THROW(cli::parse_angle("tau"), std::invalid_argument);
  EXPECT_THROW(cli::parse_angle("pi/0"), std::invalid_argument);
}

TEST(Cli, SweepCsv) {
  const auto r = run({"sweep", "--f", "2", "--scan-mhz", "380:390", "--grid-mhz", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines_of(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0].rfind("# magicfreq sweep config=", 0), 0u);
  EXPECT_NE(l[0].find("Steck"), std::string::npos);
  EXPECT_EQ(l[1], "delta_l_mhz,m=-2,m=-1,m=0,m=1,m=2,s_f");
  EXPECT_EQ(l[2].substr(0, 4), "380,");
  EXPECT_EQ(l[4].substr(0, 4), "390,");
}

TEST(Cli, SweepHalfIntegerLabels) {
  const auto r = run({"sweep", "--species", "rb85_d2", "--f", "3", "--scan-mhz", "0:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("m=-3,"), std::string::npos);
  const auto s = run({"sweep", "--species", "cs_d2", "--f", "4", "--scan-mhz", "0:1"});
  EXPECT_NE(s.out.find("m=-4,m=-3"), std::string::npos);
}

TEST(Cli, SweepIsDeterministic) {
  const std::vector<std::string> args{"sweep", "--scan-mhz", "-50:50", "--theta", "pi/3", "--phi", "0.2"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, MagicJson) {
  const auto r = run({"magic", "--f", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto& list = j.at("magic_frequencies");
  ASSERT_EQ(list.size(), 2u);
  EXPECT_NEAR(list[1].at("delta_l_magic_mhz").get<double>(), 385.0, 3.0);
  EXPECT_LT(std::abs(list[1].at("temp_sensitivity_khz_per_k").get<double>()), 50.0);
  for (const char* key : {"s_f", "window_halfwidth_mhz", "bracket"}) EXPECT_TRUE(list[1].contains(key)) << key;
  EXPECT_EQ(j.at("config").at("species"), "rb87_d2");
}

TEST(Cli, Surface) {
  const auto r = run({"surface", "--scan-mhz", "380:390", "--grid-mhz", "5", "--theta-steps", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines_of(r.out);
  EXPECT_EQ(l[2], "theta,delta_l_mhz,delta_gamma,s_f");
  EXPECT_EQ(l.size(), 3u + 9u);
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run({"sweep", "--species", "unobtainium"}).code, cli::kConfigError);
  EXPECT_EQ(run({"sweep", "--f", "3"}).code, cli::kConfigError);
  EXPECT_EQ(run({"sweep", "--temp-k", "-4"}).code, cli::kConfigError);
  EXPECT_EQ(run({"sweep", "--scan-mhz", "5:1"}).code, cli::kConfigError);
  EXPECT_EQ(run({"sweep", "--gamma-mhz", "5"}).code, cli::kConfigError);
  EXPECT_EQ(run({"sweep", "--broadening", "lorentz"}).code, cli::kConfigError);
  EXPECT_EQ(run({"sweep", "--bogus"}).code, cli::kConfigError);
  EXPECT_EQ(run({}).code, cli::kConfigError);
  const auto r = run({"sweep", "--f", "5/2"});
  EXPECT_NE(r.err.find("--f"), std::string::npos);
}

TEST(Cli, SpeciesFromFile) {
  const auto p = std::filesystem::path(MAGICFREQ_DATA_DIR) / "rb87_d1.species";
  const auto r = run({"magic", "--species", p.string(), "--scan-mhz", "-600:1400"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["magic_frequencies"][0]["delta_l_magic_mhz"].get<double>(), 408.328, 1e-3);
}

TEST(Cli, MomentsAndBack) {
  const auto in = temp_file("magicfreq_rho.json", R"({"F":"1","re":[[0.5,0.1,0],[0.1,0.3,0],[0,0,0.2]],
    "im":[[0,0.05,0],[-0.05,0,0],[0,0,0]]})");
  const auto m = run({"moments", "--in", in.string()});
  ASSERT_EQ(m.code, 0) << m.err;
  const auto mj = json::parse(m.out);
  EXPECT_EQ(mj.at("moments").size(), 3u);
  EXPECT_NEAR(mj["moments"][0]["re"][0].get<double>(), 1.0 / std::sqrt(3.0), 1e-12);

  const auto mf = temp_file("magicfreq_mom.json", m.out);
  const auto d = run({"to-density", "--in", mf.string()});
  ASSERT_EQ(d.code, 0) << d.err;
  const auto dj = json::parse(d.out);
  EXPECT_NEAR(dj["re"][0][1].get<double>(), 0.1, 1e-12);
  EXPECT_NEAR(dj["im"][0][1].get<double>(), 0.05, 1e-12);
  EXPECT_TRUE(d.err.empty());
}

TEST(Cli, NonHermitianMomentsWarn) {
  const auto in = temp_file("magicfreq_bad.json",
                            R"({"F":"1/2","moments":[{"rank":0,"re":[0.7]},{"rank":1,"re":[0,0,0.3]}]})");
  const auto d = run({"to-density", "--in", in.string()});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.err.find("not Hermitian"), std::string::npos);
  const auto incomplete = temp_file("magicfreq_inc.json", R"({"F":"1","moments":[{"rank":0,"re":[0.5]}]})");
  EXPECT_EQ(run({"to-density", "--in", incomplete.string()}).code, cli::kConfigError);
  EXPECT_EQ(run({"moments", "--in", "/nonexistent.json"}).code, cli::kConfigError);
}

TEST(Cli, OutFile) {
  const auto p = std::filesystem::temp_directory_path() / "magicfreq_out.csv";
  const auto r = run({"sweep", "--scan-mhz", "0:2", "--out", p.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(p);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first.rfind("# magicfreq", 0), 0u);
}
