// Calibrates the tolerance constant C of the oracle comparison: runs the
// harness with C = 1 on a block of random small scenarios and reports, per
// witness, the worst |deviation| / (Lambda z xi)^3 and the pooled log-log slope.

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hrc/oracle/compare.hpp"

int main(int argc, char** argv) {
  using namespace hrc;
  CLI::App app{"Tolerance calibration for the Fock-oracle comparison"};
  std::uint64_t first_seed = 2000;
  int count = 100, cutoff = 5;
  app.add_option("--first-seed", first_seed)->capture_default_str();
  app.add_option("--count", count)->capture_default_str();
  app.add_option("--cutoff", cutoff)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const std::vector<double> zs = {0.01, 0.02, 0.03, 0.04, 0.05};
  std::map<std::string, double> worst;
  std::map<std::string, oracle::PooledSlope> pooled;
  for (int i = 0; i < count; ++i) {
    const Scenario s = oracle::random_small_scenario(first_seed + static_cast<std::uint64_t>(i));
    oracle::CompareOptions opt;
    opt.tolerance_C = 1.0;
    opt.cutoffs.fill(cutoff);
    const auto run = oracle::compare(s, zs, opt);
    std::map<std::string, std::vector<double>> dev;
    for (const auto& r : run.records) {
      const std::string k = to_string(r.kind);
      dev[k].push_back(r.abs_dev);
      worst[k] = std::max(worst[k], (r.abs_dev - oracle::kToleranceFloor) / (r.tol - oracle::kToleranceFloor));
    }
    for (const auto& [k, d] : dev) pooled[k].add(zs, d);
  }
  double ratio = 0.0, slope = 1e9;
  std::printf("%-10s %10s %12s\n", "witness", "max_ratio", "pooled_slope");
  for (const auto& [k, w] : worst) {
    std::printf("%-10s %10.3f %12.3f\n", k.c_str(), w, pooled[k].slope());
    ratio = std::max(ratio, w);
    slope = std::min(slope, pooled[k].slope());
  }
  std::printf("worst ratio %.3f, smallest pooled slope %.3f, frozen C %.1f\n", ratio, slope,
              oracle::kFrozenToleranceC);
}
