#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = HRC_CLI_PATH;

struct Result {
  int status;
  std::string out;
};

Result run(const std::string& args) {
  const fs::path tmp = fs::temp_directory_path() / ("hrc_cli_out_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + ".txt");
  const std::string cmd = "'" + kCli + "' " + args + " > '" + tmp.string() + "' 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(tmp);
  return {WEXITSTATUS(raw), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hrc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SweepIsByteIdenticalAcrossRuns) {
  const std::string common = " sweep --scenario fig2 --witness 'S_a1->d' --witness D_a1 --z-count 30 "
                             "--z-start 0.001 --z-stop 0.1 --axis2 alpha_mag --axis2-start 0 --axis2-stop 9 "
                             "--axis2-count 3 --out ";
  ASSERT_EQ(run(common + "'" + (dir_ / "a.csv").string() + "' --threads 1").status, 0);
  ASSERT_EQ(run(common + "'" + (dir_ / "b.csv").string() + "' --threads 3").status, 0);
  const std::string a = slurp(dir_ / "a.csv");
  EXPECT_EQ(a, slurp(dir_ / "b.csv"));
  EXPECT_EQ(a.rfind("z,alpha_mag,witness,value,nonclassical\n", 0), 0u);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1 + 30 * 3 * 2);

  const auto meta = nlohmann::json::parse(slurp(dir_ / "a.csv.meta.json"));
  EXPECT_EQ(meta["command"], "sweep");
  EXPECT_EQ(meta["scenario_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(meta["scenario"]["couplings"]["Gamma"], 1.5);  // map default
}

TEST_F(CliTest, SweepWithoutWitnessesPrintsHeader) {
  const Result r = run("sweep --scenario fig2 --z-start 0.01 --z-stop 0.02 --z-count 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "z,witness,value,nonclassical\n");
}

TEST_F(CliTest, RejectsBadInput) {
  EXPECT_NE(run("sweep --scenario fig2 --z-start 0.01 --z-stop 0.02 --z-count 1 --witness D_b").status, 0);
  EXPECT_NE(run("sweep --scenario fig2 --witness 'S_c->b'").status, 0);
  EXPECT_NE(run("sweep --scenario /no/such/file.json --witness D_b").status, 0);
  EXPECT_NE(run("sweep --scenario fig2 --dkD-unit parsec --witness D_b").status, 0);
}

TEST_F(CliTest, ThresholdSubcommand) {
  const Result r = run("threshold --scenario fig2 --witness 'S_a1->d' --z-start 0.005 --z-stop 0.04 --tol 1e-4");
  ASSERT_EQ(r.status, 0);
  const auto line = r.out.substr(r.out.find('\n') + 1);
  const double z_star = std::stod(line.substr(line.find(',', line.find(',', line.find(',') + 1) + 1) + 1));
  EXPECT_GE(z_star, 0.012);
  EXPECT_LE(z_star, 0.022);
  EXPECT_EQ(run("threshold --scenario fig2 --witness HZ2_cd --z-start 0.001 --z-stop 0.1").status, 3);
}

TEST_F(CliTest, CompareExitStatus) {
  const fs::path scen = dir_ / "small.json";
  std::ofstream(scen) << R"({
    "amplitudes": {"alpha": {"mag": 0.2, "phase": 0.3}, "alpha1": 0.4, "alpha2": {"re": 0.1, "im": 0.3},
                   "beta": 0.25, "gamma": {"mag": 0.3, "phase": -1}, "delta": -0.2},
    "couplings": {"g": 0.8, "chi": 0.6, "Gamma": 0.5},
    "mismatches": {"dkS": 1.5, "dkA": -2, "dkD": 0.7},
    "z_grid": [0.01, 0.02, 0.03]
  })";
  const Result ok = run("compare --scenario '" + scen.string() + "'");
  EXPECT_EQ(ok.status, 0);
  EXPECT_EQ(ok.out.rfind("z,witness,closed_form,oracle,abs_dev,rel_dev,tol,pass\n", 0), 0u);
  EXPECT_EQ(std::count(ok.out.begin(), ok.out.end(), '\n'), 1 + 3 * 23);
  EXPECT_EQ(run("compare --scenario '" + scen.string() + "' --inject-fault g:2:1.5").status, 1);
}

TEST_F(CliTest, ScenariosAndCoefficients) {
  const Result list = run("scenarios");
  EXPECT_EQ(list.status, 0);
  for (const char* n : {"fig2", "fig3", "fig3b", "fig4"}) EXPECT_NE(list.out.find(n), std::string::npos);
  const Result show = run("scenarios --show fig2 --dkD-unit absolute --gamma-over-g 1.5");
  ASSERT_EQ(show.status, 0);
  const auto j = nlohmann::json::parse(show.out);
  EXPECT_EQ(j["mismatches"]["dkD"], 9.0);
  EXPECT_EQ(j["couplings"]["Gamma"], 1.5);
  const Result cof = run("coeffs --scenario fig2 --z 0.0165");
  EXPECT_EQ(cof.status, 0);
  EXPECT_EQ(std::count(cof.out.begin(), cof.out.end(), '\n'), 1 + 82);
}
