#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spovm::cli {

// Exit codes: 0 ok, 1 an internal assertion failed, 2 bad input.
inline constexpr int kOk = 0;
inline constexpr int kAssertionFailed = 1;
inline constexpr int kBadInput = 2;

struct Common {
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  std::string out;  // empty: stdout
};

struct RatesOptions {
  std::string spec;
  int samples = 10000;
};

struct ExampleOptions {
  int id = 1;
  std::string data_dir;
  double match = 5e-4;
};

struct SurfaceOptions {
  std::string spec;  // defaults to the bundled example 3
  double lo = -1.0;
  double hi = 1.0;
  int points = 0;  // 0: take it from the spec, else 41
};

struct SimulateOptions {
  std::string mode = "p2p";
  std::string spec;
  int n = 2;
  int k = 0;
  int l = 4;
  int l1 = 1;
  int l2 = 1;
  int p = 3;
  int N = 2;
  int N1 = 1;
  int N2 = 1;
  double eta = 0.1;
  double delta = 0.9;
};

struct CoveringOptions {
  std::vector<std::int64_t> M = {4, 16, 64, 256};
  int trials = 2000;
  std::string sampler = "both";
  int bits = 12;
  double noise = 0.02;
};

struct PruningOptions {
  int trials = 10000;
  double eta = 0.5;
  int dim = 4;
  int rank = 2;
};

struct UccOptions {
  int p = 2;
  int n = 2;
  int k = 1;
  int l = 1;
  int N = 1;
  bool check_pairwise = false;
  int witness = 0;
  std::string verify;
};

struct FmOptions {
  std::string region;
  std::string spec;
  std::vector<std::string> eliminate;
  int check = 0;
};

std::string default_data_dir();

int cmd_rates(const Common& c, const RatesOptions& o);
int cmd_example(const Common& c, const ExampleOptions& o);
int cmd_surface(const Common& c, const SurfaceOptions& o);
int cmd_simulate(const Common& c, const SimulateOptions& o);
int cmd_covering(const Common& c, const CoveringOptions& o);
int cmd_pruning(const Common& c, const PruningOptions& o);
int cmd_ucc(const Common& c, const UccOptions& o);
int cmd_fm(const Common& c, const FmOptions& o);

}  // namespace spovm::cli
