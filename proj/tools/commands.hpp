#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace crnconv {

struct SimulateArgs {
  std::string chain;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::vector<double> x0;
  bool backward = false;
  bool plot = false;
  std::filesystem::path out = ".";
};

struct CoupleArgs {
  std::string chain;
  std::size_t n = 50;
  std::size_t replicates = 1000;
  double p = 1.0;
  std::string coupling = "crn";
  std::vector<double> x0;
  std::vector<double> y0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::filesystem::path out = ".";
};

struct MonotonicityArgs {
  std::string function;
  double x = 1.0;
  double y = 2.0;
  std::size_t grid = 4096;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::filesystem::path out = ".";
};

struct BoundArgs {
  std::optional<std::filesystem::path> config;
  std::string example;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::filesystem::path out = ".";
};

/// CRN_SEED, when set, replaces the given seed. Throws crn::UsageError if it is malformed.
std::uint64_t resolve_seed(std::uint64_t seed);

int run_simulate(SimulateArgs args, std::ostream& log);
int run_couple(CoupleArgs args, std::ostream& log);
int run_monotonicity(MonotonicityArgs args, std::ostream& log);
int run_bound(BoundArgs args, std::ostream& log);
int run_chains(std::ostream& log);

}  // namespace crnconv
