#pragma once

#include "lpplab/couplings.hpp"
#include "lpplab/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lpp {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::string marginal = "exp:theta=1";
  std::string lattice = "line:8";
  std::string coupling = "iid";
  long long reps = 10000;
  std::uint64_t seed = 1;
  int grid = 99;
  int threads = 0;  // 0 = hardware concurrency
  std::string output;            // sample CSV path; empty = do not write
  std::string format = "csv";    // summary format: csv | json

  CouplingSpec resolve() const;
  std::string provenance() const;  // key=value lines, no thread count
};

// One LPP value per replicate; replicate r uses the rng stream (seed, r),
// so the result does not depend on the thread count.
std::vector<double> simulate_lpp(const RunConfig& config);

void write_sample_csv(const std::string& path, const std::vector<double>& values,
                      const std::string& provenance);
std::vector<double> read_sample_csv(const std::string& path,
                                    std::string* provenance = nullptr);

// {config, n, mean, var, se_mean, quantiles[1,5,25,50,75,95,99]}
std::string summary_json(const RunConfig& config, const std::vector<double>& values);
std::string summary_csv(const RunConfig& config, const std::vector<double>& values);

}  // namespace lpp
